#include "zocoop/agent.hpp"

#include <string>
#include <utility>

#include "zocoop/errors.hpp"

namespace zocoop {

PerturbationBuffer::PerturbationBuffer(int bound) {
  if (bound < 0) throw Error("delay bound must be non-negative");
  slots_.resize(static_cast<std::size_t>(bound) + 1);
}

bool PerturbationBuffer::has(std::int64_t round) const {
  if (round < 0) return false;
  return slots_[static_cast<std::size_t>(round) % slots_.size()].round == round;
}

void PerturbationBuffer::store(std::int64_t round, Eigen::VectorXd z) {
  if (round < 0) throw Error("rounds are non-negative");
  Slot& slot = slots_[static_cast<std::size_t>(round) % slots_.size()];
  if (slot.round == round) {
    throw DuplicateRound("perturbation for round " + std::to_string(round) +
                         " already drawn");
  }
  slot.round = round;
  slot.z = std::move(z);
}

const Eigen::VectorXd& PerturbationBuffer::lookup(std::int64_t round) const {
  if (round >= 0) {
    const Slot& slot = slots_[static_cast<std::size_t>(round) % slots_.size()];
    if (slot.round == round) return slot.z;
  }
  throw BufferMiss("perturbation for round " + std::to_string(round) +
                   " is no longer buffered (delay bound violated?)");
}

Eigen::VectorXd draw_perturbation(AgentState& state, std::int64_t round,
                                  rng::Stream& stream) {
  Eigen::VectorXd z = stream.normal_vector(state.block.size());
  state.buffer.store(round, z);
  return z;
}

double two_point_derivative(double f_plus, double f_minus, double u,
                            double floor) {
  if (!(u >= floor) || u <= 0.0) {
    throw SmoothingUnderflow("smoothing radius " + std::to_string(u) +
                             " below floor " + std::to_string(floor));
  }
  return (f_plus - f_minus) / (2.0 * u);
}

Eigen::VectorXd assemble_partial_gradient(const AgentState& state, int n) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(state.block.size());
  for (int j = 0; j < state.table.peer_count(); ++j) {
    const std::int64_t tau = state.table.timestamp(j);
    if (tau < 0) continue;
    g += state.table.value(j) * state.buffer.lookup(tau);
  }
  return g / static_cast<double>(n);
}

void apply_update(AgentState& state, const Eigen::VectorXd& g, double eta) {
  if (g.size() != state.block.size()) {
    throw DimensionMismatch("gradient length " + std::to_string(g.size()) +
                            " does not match block length " +
                            std::to_string(state.block.size()));
  }
  if (!g.allFinite()) {
    throw NonFiniteUpdate("partial gradient contains NaN/Inf");
  }
  Eigen::VectorXd next = state.block - eta * g;
  if (!next.allFinite()) {
    throw NonFiniteUpdate("updated block contains NaN/Inf");
  }
  state.block = std::move(next);
}

}  // namespace zocoop
