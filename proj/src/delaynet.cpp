#include "zocoop/delaynet.hpp"

#include <algorithm>
#include <tuple>
#include <utility>

#include "zocoop/errors.hpp"

namespace zocoop {

void validate_delay_spec(const DelayModelSpec& spec, int agents) {
  if (agents <= 0) throw ConfigError("delay network needs at least one agent");
  if (spec.bound < 0) throw ConfigError("delay bound must be non-negative");
  switch (spec.kind) {
    case DelayKind::kZero:
    case DelayKind::kUniformRandom:
      return;
    case DelayKind::kPeriodicGossip:
      if (spec.period < 1 || spec.period > spec.bound) {
        throw ConfigError("gossip period must satisfy 1 <= period <= bound");
      }
      return;
    case DelayKind::kFixedMatrix: {
      if (spec.matrix.rows() != agents || spec.matrix.cols() != agents) {
        throw ConfigError("delay matrix must be agents x agents");
      }
      for (int s = 0; s < agents; ++s) {
        for (int r = 0; r < agents; ++r) {
          const int d = spec.matrix(s, r);
          if (s == r && d != 0) {
            throw ConfigError("delay matrix diagonal must be zero");
          }
          if (d < 0 || d > spec.bound) {
            throw ConfigError("delay matrix entries must lie in [0, bound]");
          }
        }
      }
      return;
    }
  }
  throw ConfigError("unknown delay kind");
}

std::string to_string(DelayKind kind) {
  switch (kind) {
    case DelayKind::kZero:
      return "zero";
    case DelayKind::kFixedMatrix:
      return "fixed_matrix";
    case DelayKind::kUniformRandom:
      return "uniform_random";
    case DelayKind::kPeriodicGossip:
      return "periodic_gossip";
  }
  return "unknown";
}

PeerTable::PeerTable(int peers)
    : stamps_(static_cast<std::size_t>(peers), -1),
      values_(static_cast<std::size_t>(peers), 0.0) {}

void PeerTable::update(const std::vector<DerivativeBroadcast>& arrivals) {
  for (const auto& b : arrivals) {
    const auto j = static_cast<std::size_t>(b.sender);
    if (b.timestamp > stamps_.at(j)) {
      stamps_[j] = b.timestamp;
      values_[j] = b.value;
    }
  }
}

DelayMedium::DelayMedium(DelayModelSpec spec, int agents,
                         std::uint64_t stream_seed)
    : spec_(std::move(spec)), agents_(agents), stream_(stream_seed) {
  if (spec_.kind == DelayKind::kZero) spec_.bound = 0;
  validate_delay_spec(spec_, agents_);
  const std::size_t slots =
      static_cast<std::size_t>(spec_.bound + 1) * static_cast<std::size_t>(agents_);
  slots_.resize(slots);
  tags_.assign(slots, -1);
}

int DelayMedium::delay(int sender, int receiver, std::int64_t round) {
  switch (spec_.kind) {
    case DelayKind::kZero:
      return 0;
    case DelayKind::kFixedMatrix:
      return spec_.matrix(sender, receiver);
    case DelayKind::kUniformRandom:
      return static_cast<int>(
          stream_.uniform_int(0, static_cast<std::uint64_t>(spec_.bound)));
    case DelayKind::kPeriodicGossip:
      return spec_.period - static_cast<int>(round % spec_.period);
  }
  return 0;
}

void DelayMedium::post(const DerivativeBroadcast& broadcast,
                       std::int64_t round) {
  if (round < 0) throw Error("rounds are non-negative");
  if (broadcast.timestamp != round) {
    throw StaleTimestamp("broadcast timestamp " +
                         std::to_string(broadcast.timestamp) +
                         " posted at round " + std::to_string(round));
  }
  // Receivers in ascending order so the random stream is consumed in a
  // fixed order.
  for (int r = 0; r < agents_; ++r) {
    const int d = r == broadcast.sender ? 0 : delay(broadcast.sender, r, round);
    const std::int64_t due = round + d;
    const std::size_t idx =
        static_cast<std::size_t>(due % (spec_.bound + 1)) *
            static_cast<std::size_t>(agents_) +
        static_cast<std::size_t>(r);
    if (tags_[idx] != due) {
      if (!slots_[idx].empty()) {
        throw Error("undelivered broadcasts from round " +
                    std::to_string(tags_[idx]) + " still queued");
      }
      tags_[idx] = due;
    }
    slots_[idx].push_back(broadcast);
  }
}

std::vector<DerivativeBroadcast> DelayMedium::deliver(int receiver,
                                                      std::int64_t round) {
  if (round < 0) throw Error("rounds are non-negative");
  const std::size_t idx =
      static_cast<std::size_t>(round % (spec_.bound + 1)) *
          static_cast<std::size_t>(agents_) +
      static_cast<std::size_t>(receiver);
  if (tags_[idx] != round) return {};
  std::vector<DerivativeBroadcast> out = std::move(slots_[idx]);
  slots_[idx].clear();
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.sender, a.timestamp) < std::tie(b.sender, b.timestamp);
  });
  return out;
}

}  // namespace zocoop
