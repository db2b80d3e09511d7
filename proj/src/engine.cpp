#include "zocoop/engine.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <utility>

#include "zocoop/errors.hpp"

namespace zocoop {

namespace {

int thread_cap() {
  if (const char* env = std::getenv("ZOCOOP_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

Eigen::VectorXd initial_decision(const ExperimentConfig& config, int trial) {
  const Eigen::Index d = config.problem->partition().total();
  switch (config.init.kind) {
    case InitSpec::Kind::kConstant:
      return Eigen::VectorXd::Constant(d, config.init.fill);
    case InitSpec::Kind::kExplicit:
      if (config.init.vector.size() != d) {
        throw ConfigError("init vector length does not match the partition");
      }
      return config.init.vector;
    case InitSpec::Kind::kRandomBall: {
      rng::Stream stream(rng::derive_seed(config.master_seed,
                                          static_cast<std::uint64_t>(trial),
                                          rng::Purpose::kInit, 0));
      return sample_ball(stream, d, config.init.radius);
    }
  }
  throw ConfigError("unknown init kind");
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

std::string to_string(TrialStatus status) {
  switch (status) {
    case TrialStatus::kCompleted:
      return "completed";
    case TrialStatus::kAbortedNonFinite:
      return "aborted_non_finite";
    case TrialStatus::kAbortedBufferMiss:
      return "aborted_buffer_miss";
    case TrialStatus::kAbortedSmoothingUnderflow:
      return "aborted_smoothing_underflow";
  }
  return "unknown";
}

void validate_config(const ExperimentConfig& config) {
  if (!config.problem) throw ConfigError("no problem configured");
  if (config.horizon <= 0) throw ConfigError("horizon must be positive");
  if (config.trials <= 0) throw ConfigError("trials must be positive");
  if (config.smoothing_floor <= 0.0) {
    throw ConfigError("smoothing floor must be positive");
  }
  const int n = config.problem->partition().agent_count();
  DelayModelSpec spec = config.delay;
  if (spec.kind == DelayKind::kZero) spec.bound = 0;
  validate_delay_spec(spec, n);
  if (config.init.kind == InitSpec::Kind::kExplicit &&
      config.init.vector.size() != config.problem->partition().total()) {
    throw ConfigError("init vector length does not match the partition");
  }
}

World::World(ExperimentConfig config, int trial)
    : config_(std::move(config)),
      trial_(trial),
      n_(config_.problem->partition().agent_count()),
      medium_(config_.delay, n_,
              rng::derive_seed(config_.master_seed,
                               static_cast<std::uint64_t>(trial),
                               rng::Purpose::kDelay, config_.delay.seed_tag)) {
  const Partition& partition = config_.problem->partition();
  const Eigen::VectorXd x0 = initial_decision(config_, trial);
  agents_.reserve(n_);
  streams_.reserve(n_);
  for (int i = 0; i < n_; ++i) {
    agents_.emplace_back(i, x0.segment(partition.offset(i), partition.dim(i)),
                         medium_.bound(), n_);
    streams_.emplace_back(rng::derive_seed(config_.master_seed,
                                           static_cast<std::uint64_t>(trial),
                                           rng::Purpose::kPerturbation,
                                           static_cast<std::uint64_t>(i)));
  }
}

Eigen::VectorXd World::decision() const {
  const Partition& partition = config_.problem->partition();
  Eigen::VectorXd x(partition.total());
  for (int i = 0; i < n_; ++i) {
    x.segment(partition.offset(i), partition.dim(i)) = agents_[i].block;
  }
  return x;
}

RoundMetrics World::step() {
  const Partition& partition = config_.problem->partition();
  const std::int64_t t = round_;
  const double eta = eval(config_.schedules.step, t);
  const double u = eval(config_.schedules.smoothing, t);

  std::vector<Eigen::VectorXd> z(static_cast<std::size_t>(n_));
  Eigen::VectorXd zjoint(partition.total());
  for (int i = 0; i < n_; ++i) {
    z[i] = draw_perturbation(agents_[i], t, streams_[i]);
    zjoint.segment(partition.offset(i), partition.dim(i)) = z[i];
  }

  const Eigen::VectorXd x = decision();
  RoundMetrics metrics;
  metrics.t = t;
  metrics.f_value = config_.problem->evaluate_global(x);
  metrics.eta = eta;
  metrics.u = u;
  const int bound = medium_.bound();
  if (t >= bound) {
    double acc = 0.0;
    for (std::int64_t s = t - bound; s < t; ++s) {
      const double e = eval(config_.schedules.step, s);
      acc += e * e;
    }
    metrics.p_sq = acc;
  }
  if (auto grad = config_.problem->gradient_oracle(x)) {
    metrics.grad_sq_norm = grad->squaredNorm();
  }
  const auto& fstar = config_.problem->meta().optimum_value;
  if (fstar.has_value() && *fstar != 0.0) {
    metrics.normalized_objective = metrics.f_value / *fstar;
  }

  const Eigen::VectorXd x_plus = x + u * zjoint;
  const Eigen::VectorXd x_minus = x - u * zjoint;
  std::vector<double> derivative(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    const double f_plus = config_.problem->evaluate_local(i, x_plus);
    const double f_minus = config_.problem->evaluate_local(i, x_minus);
    derivative[i] =
        two_point_derivative(f_plus, f_minus, u, config_.smoothing_floor);
    medium_.post({i, t, derivative[i]}, t);
  }

  for (int i = 0; i < n_; ++i) {
    agents_[i].table.update(medium_.deliver(i, t));
  }

  std::vector<Eigen::VectorXd> g(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    g[i] = assemble_partial_gradient(agents_[i], n_);
  }
  for (int i = 0; i < n_; ++i) {
    apply_update(agents_[i], g[i], eta);
  }

  if (config_.record_trace) {
    TraceRound rec;
    rec.z = z;
    rec.derivative = derivative;
    rec.tau.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      rec.tau[i].resize(static_cast<std::size_t>(n_));
      for (int j = 0; j < n_; ++j) {
        rec.tau[i][j] = agents_[i].table.timestamp(j);
      }
    }
    rec.g = g;
    rec.eta = eta;
    rec.u = u;
    trace_.push_back(std::move(rec));
  }

  ++round_;
  return metrics;
}

TrialResult run_trial(const ExperimentConfig& config, int trial) {
  TrialResult result;
  result.trial = trial;
  World world(config, trial);
  result.delay_bound = world.delay_bound();
  result.metrics.reserve(static_cast<std::size_t>(config.horizon));
  try {
    for (std::int64_t t = 0; t < config.horizon; ++t) {
      result.metrics.push_back(world.step());
    }
    result.status = TrialStatus::kCompleted;
  } catch (const NonFiniteUpdate& e) {
    result.status = TrialStatus::kAbortedNonFinite;
    result.abort_reason = e.what();
  } catch (const BufferMiss& e) {
    result.status = TrialStatus::kAbortedBufferMiss;
    result.abort_reason = e.what();
  } catch (const SmoothingUnderflow& e) {
    result.status = TrialStatus::kAbortedSmoothingUnderflow;
    result.abort_reason = e.what();
  }
  result.final_decision = world.decision();
  if (config.record_trace) result.trace = world.trace();
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  ExperimentResult out;
  out.trials.resize(static_cast<std::size_t>(config.trials));

  const int workers = std::min(config.trials, thread_cap());
  if (workers <= 1) {
    for (int k = 0; k < config.trials; ++k) {
      out.trials[static_cast<std::size_t>(k)] = run_trial(config, k);
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          const int k = next.fetch_add(1);
          if (k >= config.trials) return;
          out.trials[static_cast<std::size_t>(k)] = run_trial(config, k);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<double> finals;
  std::vector<double> m_finals;
  bool all_normalized = true;
  bool all_grad = true;
  for (const auto& trial : out.trials) {
    if (trial.status != TrialStatus::kCompleted || trial.metrics.empty()) {
      continue;
    }
    ++out.aggregate.trials_completed;
    const RoundMetrics& last = trial.metrics.back();
    if (last.normalized_objective.has_value() && all_normalized) {
      finals.push_back(*last.normalized_objective);
    } else {
      all_normalized = false;
    }
    if (all_grad) {
      double acc = 0.0;
      for (const auto& m : trial.metrics) {
        if (!m.grad_sq_norm.has_value()) {
          all_grad = false;
          break;
        }
        acc += *m.grad_sq_norm;
      }
      if (all_grad) {
        m_finals.push_back(acc / static_cast<double>(trial.metrics.size()));
      }
    }
  }
  if (all_normalized && !finals.empty()) {
    const double mean = mean_of(finals);
    out.aggregate.normalized_final_mean = mean;
    out.aggregate.normalized_final_std = std_of(finals, mean);
  }
  if (all_grad && !m_finals.empty()) {
    const double mean = mean_of(m_finals);
    out.aggregate.m_final_mean = mean;
    out.aggregate.m_final_std = std_of(m_finals, mean);
  }

  return out;
}

}  // namespace zocoop
