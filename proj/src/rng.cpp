#include "zocoop/rng.hpp"

#include <cmath>
#include <numbers>

namespace zocoop::rng {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                          Purpose purpose, std::uint64_t entity) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ (trial + 0x9E3779B97F4A7C15ULL));
  h = mix64(h ^ (static_cast<std::uint64_t>(purpose) + 0xD1B54A32D192ED03ULL));
  h = mix64(h ^ (entity + 0x8CB92BA72F3D8DD7ULL));
  return h;
}

double Stream::uniform01() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

std::uint64_t Stream::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t range = hi - lo + 1;  // hi >= lo; full range unused here
  if (range == 0) return gen_();
  // bitmask rejection: unbiased and cheap for the small ranges we draw
  std::uint64_t mask = range - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  std::uint64_t v;
  do {
    v = gen_() & mask;
  } while (v >= range);
  return lo + v;
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite
  const double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Eigen::VectorXd Stream::normal_vector(Eigen::Index dim) {
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal();
  return v;
}

}  // namespace zocoop::rng
