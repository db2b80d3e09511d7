#ifndef ZOCOOP_ENGINE_HPP
#define ZOCOOP_ENGINE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zocoop/agent.hpp"
#include "zocoop/delaynet.hpp"
#include "zocoop/problems.hpp"
#include "zocoop/schedules.hpp"

namespace zocoop {

/// Per-round record, always measured against x(t) before the update so
/// accumulated sums use the same indexing as the convergence metrics.
/// p_sq is the trailing step-size energy sum_{s=t-B}^{t-1} eta(s)^2, zero
/// for t < B.
struct RoundMetrics {
  std::int64_t t = 0;
  double f_value = 0.0;
  std::optional<double> grad_sq_norm;
  double eta = 0.0;
  double u = 0.0;
  double p_sq = 0.0;
  std::optional<double> normalized_objective;
};

enum class TrialStatus {
  kCompleted,
  kAbortedNonFinite,
  kAbortedBufferMiss,
  kAbortedSmoothingUnderflow,
};

std::string to_string(TrialStatus status);

/// One round of the replay log: everything needed to recompute every
/// agent's partial gradient independently.
struct TraceRound {
  std::vector<Eigen::VectorXd> z;          // per agent, drawn this round
  std::vector<double> derivative;          // D_i(t)
  std::vector<std::vector<std::int64_t>> tau;  // tau[i][j] after delivery
  std::vector<Eigen::VectorXd> g;          // assembled partial gradients
  double eta = 0.0;
  double u = 0.0;
};

using TraceLog = std::vector<TraceRound>;

struct TrialResult {
  int trial = 0;
  TrialStatus status = TrialStatus::kCompleted;
  std::vector<RoundMetrics> metrics;
  Eigen::VectorXd final_decision;
  int delay_bound = 0;
  std::string abort_reason;
  TraceLog trace;  // filled only when the config asks for it
};

/// Initial joint decision: an explicit vector, a constant fill, or a
/// uniform draw from a ball (re-drawn per trial from that trial's init
/// stream).
struct InitSpec {
  enum class Kind { kConstant, kExplicit, kRandomBall };
  Kind kind = Kind::kConstant;
  double fill = 0.0;
  Eigen::VectorXd vector;
  double radius = 1.0;
};

struct ExperimentConfig {
  ProblemPtr problem;
  SchedulePair schedules;
  DelayModelSpec delay;
  std::int64_t horizon = 0;
  int trials = 1;
  std::uint64_t master_seed = 0;
  InitSpec init;
  double smoothing_floor = 1e-8;
  bool record_trace = false;
};

/// Throws ConfigError on an invalid combination (missing problem,
/// non-positive horizon or trials, init/partition mismatch, bad delay spec).
void validate_config(const ExperimentConfig& config);

/// One trial's synchronous round loop. All randomness comes from streams
/// derived from (master seed, trial), so stepping is bit-reproducible and
/// independent across trials.
class World {
 public:
  World(ExperimentConfig config, int trial);

  std::int64_t round() const { return round_; }
  int delay_bound() const { return medium_.bound(); }
  const TraceLog& trace() const { return trace_; }

  /// Concatenation of the agents' current blocks: x(t).
  Eigen::VectorXd decision() const;

  /// Executes round t: draw perturbations, evaluate the two probe points,
  /// broadcast derivatives, deliver and update peer tables, assemble
  /// partial gradients, descend. Returns metrics measured against x(t).
  RoundMetrics step();

 private:
  ExperimentConfig config_;
  int trial_ = 0;
  int n_ = 0;
  DelayMedium medium_;
  std::vector<AgentState> agents_;
  std::vector<rng::Stream> streams_;
  std::int64_t round_ = 0;
  TraceLog trace_;
};

TrialResult run_trial(const ExperimentConfig& config, int trial);

struct ExperimentAggregate {
  int trials_completed = 0;
  std::optional<double> normalized_final_mean;
  std::optional<double> normalized_final_std;
  std::optional<double> m_final_mean;
  std::optional<double> m_final_std;
};

struct ExperimentResult {
  std::vector<TrialResult> trials;
  ExperimentAggregate aggregate;
};

/// Runs all trials, in parallel up to ZOCOOP_THREADS (default: hardware
/// concurrency). Results are ordered and aggregated by trial index, so the
/// output never depends on scheduling. Per-trial aborts are recorded in the
/// results without failing the other trials.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace zocoop

#endif  // ZOCOOP_ENGINE_HPP
