#ifndef ZOCOOP_DELAYNET_HPP
#define ZOCOOP_DELAYNET_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "zocoop/rng.hpp"

namespace zocoop {

enum class DelayKind { kZero, kFixedMatrix, kUniformRandom, kPeriodicGossip };

/// Delay model parameters. Every generated delay satisfies 0 <= delta <=
/// bound, and self-messages are always instant. kZero normalizes the bound
/// to 0. kFixedMatrix uses matrix(sender, receiver) with zero diagonal and
/// entries in [0, bound]. kUniformRandom draws iid in {0,...,bound} per
/// (sender, receiver, round) from its own named stream. kPeriodicGossip
/// delivers at the next multiple of period (1 <= period <= bound), the
/// worst-case staleness of a gossip exchange every period rounds.
struct DelayModelSpec {
  DelayKind kind = DelayKind::kZero;
  int bound = 0;
  Eigen::MatrixXi matrix;
  int period = 0;
  std::uint64_t seed_tag = 0;  // folded into the delay stream's seed
};

/// Throws ConfigError if the spec is malformed for a network of `agents`.
void validate_delay_spec(const DelayModelSpec& spec, int agents);

std::string to_string(DelayKind kind);

/// The scalar derivative on the wire: who computed it, at which round, and
/// its value.
struct DerivativeBroadcast {
  int sender = 0;
  std::int64_t timestamp = 0;
  double value = 0.0;
};

/// One agent's freshest (timestamp, value) per peer. Timestamps start at -1
/// (nothing received) and never decrease; updates keep the entry with the
/// maximum timestamp, so out-of-order arrivals are discarded.
class PeerTable {
 public:
  explicit PeerTable(int peers);

  int peer_count() const { return static_cast<int>(stamps_.size()); }
  std::int64_t timestamp(int peer) const { return stamps_.at(peer); }
  double value(int peer) const { return values_.at(peer); }

  void update(const std::vector<DerivativeBroadcast>& arrivals);

 private:
  std::vector<std::int64_t> stamps_;
  std::vector<double> values_;
};

/// Simulated broadcast medium advanced round by round. post schedules one
/// broadcast per receiver at round + delta with delta from the delay model
/// (delta = 0 for the sender itself); deliver returns everything due at
/// (receiver, round), ordered by (sender, timestamp). One engine loop owns
/// the medium; independent trials each build their own.
class DelayMedium {
 public:
  DelayMedium(DelayModelSpec spec, int agents, std::uint64_t stream_seed);

  int agents() const { return agents_; }
  int bound() const { return spec_.bound; }
  const DelayModelSpec& spec() const { return spec_; }

  /// Requires broadcast.timestamp == round (throws StaleTimestamp).
  void post(const DerivativeBroadcast& broadcast, std::int64_t round);

  std::vector<DerivativeBroadcast> deliver(int receiver, std::int64_t round);

 private:
  int delay(int sender, int receiver, std::int64_t round);

  DelayModelSpec spec_;
  int agents_ = 0;
  rng::Stream stream_;
  // Ring of bound+1 rounds x agents slots; tags_ holds the due round each
  // slot currently belongs to.
  std::vector<std::vector<DerivativeBroadcast>> slots_;
  std::vector<std::int64_t> tags_;
};

}  // namespace zocoop

#endif  // ZOCOOP_DELAYNET_HPP
