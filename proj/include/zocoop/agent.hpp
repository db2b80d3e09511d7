#ifndef ZOCOOP_AGENT_HPP
#define ZOCOOP_AGENT_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "zocoop/delaynet.hpp"
#include "zocoop/rng.hpp"

namespace zocoop {

/// Ring of the last bound+1 rounds' perturbation vectors. Lookup succeeds
/// for every round in [t - bound, t] once filled; anything older was
/// evicted, and requesting it means the delay bound was violated.
class PerturbationBuffer {
 public:
  explicit PerturbationBuffer(int bound);

  int capacity() const { return static_cast<int>(slots_.size()); }
  bool has(std::int64_t round) const;

  /// Throws DuplicateRound if this round was already stored.
  void store(std::int64_t round, Eigen::VectorXd z);

  /// Throws BufferMiss if the round is absent (too old or never drawn).
  const Eigen::VectorXd& lookup(std::int64_t round) const;

 private:
  struct Slot {
    std::int64_t round = -1;
    Eigen::VectorXd z;
  };
  std::vector<Slot> slots_;
};

/// One agent: its block of the joint decision, its perturbation history,
/// and its freshest view of every peer's derivative.
struct AgentState {
  AgentState(int index, Eigen::VectorXd block, int delay_bound, int peers)
      : index(index),
        block(std::move(block)),
        buffer(delay_bound),
        table(peers) {}

  int index;
  Eigen::VectorXd block;
  PerturbationBuffer buffer;
  PeerTable table;
};

/// Draws z ~ N(0, I) of the agent's block dimension from the agent's own
/// stream and stores it for the round. Returns the drawn vector.
Eigen::VectorXd draw_perturbation(AgentState& state, std::int64_t round,
                                  rng::Stream& stream);

/// Symmetric finite difference (f_plus - f_minus) / (2u). Throws
/// SmoothingUnderflow when u is below the floor, where floating-point
/// cancellation would dominate the function difference.
double two_point_derivative(double f_plus, double f_minus, double u,
                            double floor = 1e-8);

/// (1/n) * sum over peers with a received derivative of D_j(tau) * z(tau),
/// pairing each stale derivative with this agent's stored perturbation from
/// the same round. Peers never heard from contribute nothing; the divisor
/// stays n regardless.
Eigen::VectorXd assemble_partial_gradient(const AgentState& state, int n);

/// block <- block - eta * g. Throws DimensionMismatch on size mismatch and
/// NonFiniteUpdate if g or the result contains NaN/Inf.
void apply_update(AgentState& state, const Eigen::VectorXd& g, double eta);

}  // namespace zocoop

#endif  // ZOCOOP_AGENT_HPP
