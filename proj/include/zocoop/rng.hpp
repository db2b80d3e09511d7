#ifndef ZOCOOP_RNG_HPP
#define ZOCOOP_RNG_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace zocoop::rng {

/// Purpose tag that separates the named generator streams derived from one
/// experiment seed. Perturbation streams are never advanced by the delay
/// model (and vice versa), so swapping the delay model leaves every z-draw
/// unchanged.
enum class Purpose : std::uint64_t {
  kPerturbation = 1,
  kDelay = 2,
  kInit = 3,
};

/// SplitMix64 finalizer; the building block of seed derivation.
std::uint64_t mix64(std::uint64_t x);

/// Derives the seed for one named sub-stream from (master seed, trial,
/// purpose, entity). Entity is the agent index for perturbation streams and
/// the delay spec's seed tag for delay streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                          Purpose purpose, std::uint64_t entity);

/// Deterministic random stream: a seeded mt19937_64 plus explicit
/// uniform/normal converters, so the produced sequences do not depend on
/// the standard library's unspecified distribution algorithms.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform01();

  /// Uniform integer in [lo, hi], inclusive; unbiased via rejection.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

  /// Standard normal via Box-Muller (pairs cached).
  double normal();

  /// Vector of independent standard normals.
  Eigen::VectorXd normal_vector(Eigen::Index dim);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace zocoop::rng

#endif  // ZOCOOP_RNG_HPP
