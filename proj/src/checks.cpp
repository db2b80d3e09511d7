#include "zocoop/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <sstream>

#include "zocoop/agent.hpp"
#include "zocoop/errors.hpp"
#include "zocoop/metrics.hpp"
#include "zocoop/problems.hpp"

namespace zocoop {

namespace {

constexpr double kTwoSqrtSix = 4.89897948556635619;  // 2*sqrt(6)

std::string fmt(double v) { return format_double(v); }

}  // namespace

CheckResult check_unbiasedness(std::uint64_t seed) {
  CheckResult result{"unbiasedness", true, ""};
  const Eigen::Index d = 4;
  const auto problem = make_separable_quadratic(Partition::uniform(2, 2), 10.0);
  constexpr int kPoints = 10;
  constexpr int kSamples = 100000;
  const double u = 0.01;

  rng::Stream points(rng::derive_seed(seed, 0, rng::Purpose::kInit, 100));
  double worst = 0.0;
  for (int p = 0; p < kPoints; ++p) {
    const Eigen::VectorXd x = sample_ball(points, d, 2.0);
    const Eigen::VectorXd grad = *problem->gradient_oracle(x);
    rng::Stream zs(rng::derive_seed(seed, static_cast<std::uint64_t>(p),
                                    rng::Purpose::kPerturbation, 200));
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(d);
    for (int s = 0; s < kSamples; ++s) {
      const Eigen::VectorXd z = zs.normal_vector(d);
      const double f_plus = problem->evaluate_local(0, x + u * z);
      const double f_minus = problem->evaluate_local(0, x - u * z);
      const double derivative = two_point_derivative(f_plus, f_minus, u);
      const Eigen::VectorXd v = derivative * z;
      mean += v;
      sq += v.cwiseProduct(v);
    }
    mean /= kSamples;
    for (Eigen::Index k = 0; k < d; ++k) {
      const double var =
          (sq[k] / kSamples - mean[k] * mean[k]) * kSamples / (kSamples - 1);
      const double se = std::sqrt(std::max(var, 0.0) / kSamples);
      const double err = std::abs(mean[k] - grad[k]);
      worst = std::max(worst, se > 0.0 ? err / se : err);
      if (err > 3.0 * se) {
        result.pass = false;
        result.detail = "coordinate " + std::to_string(k) + " at point " +
                        std::to_string(p) + ": |mc - grad| = " + fmt(err) +
                        " > 3se = " + fmt(3.0 * se);
        return result;
      }
    }
  }
  result.detail = "worst |mc - grad| / se = " + fmt(worst) + " (limit 3)";
  return result;
}

CheckResult check_bias_bound(std::uint64_t seed) {
  CheckResult result{"bias_bound", true, ""};
  const Eigen::Index d = 4;
  const auto problem = make_nonconvex_cosine(Partition::uniform(2, 2));
  const double smooth_l = *problem->meta().smooth_l;
  constexpr int kPoints = 20;
  constexpr int kSamples = 100000;

  rng::Stream points(rng::derive_seed(seed, 0, rng::Purpose::kInit, 101));
  double worst_margin = -1e300;
  for (int p = 0; p < kPoints; ++p) {
    const Eigen::VectorXd x = sample_ball(points, d, 3.0);
    const Eigen::VectorXd grad = *problem->gradient_oracle(x);
    for (const double u : {0.1, 0.01}) {
      rng::Stream zs(rng::derive_seed(seed, static_cast<std::uint64_t>(p),
                                      rng::Purpose::kPerturbation,
                                      u == 0.1 ? 301 : 302));
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
      Eigen::VectorXd sq = Eigen::VectorXd::Zero(d);
      for (int s = 0; s < kSamples; ++s) {
        const Eigen::VectorXd z = zs.normal_vector(d);
        const double f_plus = problem->evaluate_local(0, x + u * z);
        const double f_minus = problem->evaluate_local(0, x - u * z);
        const double derivative = two_point_derivative(f_plus, f_minus, u);
        const Eigen::VectorXd v = derivative * z;
        mean += v;
        sq += v.cwiseProduct(v);
      }
      mean /= kSamples;
      double se_sq = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        const double var =
            (sq[k] / kSamples - mean[k] * mean[k]) * kSamples / (kSamples - 1);
        se_sq += std::max(var, 0.0) / kSamples;
      }
      const double slack = 3.0 * std::sqrt(se_sq);
      const double bias = (grad - mean).norm();
      const double bound = u * smooth_l * std::sqrt(static_cast<double>(d));
      worst_margin = std::max(worst_margin, bias - bound - slack);
      if (bias > bound + slack) {
        result.pass = false;
        result.detail = "point " + std::to_string(p) + ", u = " + fmt(u) +
                        ": bias " + fmt(bias) + " > bound " + fmt(bound) +
                        " + slack " + fmt(slack);
        return result;
      }
    }
  }
  result.detail = "worst bias - (bound + slack) = " + fmt(worst_margin);
  return result;
}

CheckResult check_second_moment(std::uint64_t seed) {
  CheckResult result{"second_moment", true, ""};
  constexpr int kSamples = 100000;

  const std::vector<Eigen::VectorXd> probes = {
      (Eigen::VectorXd(2) << 1.0, 2.0).finished(),
      (Eigen::VectorXd(4) << 0.5, -0.5, 2.0, 1.0).finished(),
      (Eigen::VectorXd(1) << 3.0).finished(),
  };

  double worst_ratio = 0.0;
  int case_idx = 0;
  for (const auto& a : probes) {
    const Eigen::Index d = a.size();
    const double g_const = a.norm();
    // Closed form E[<a,z>^2 z_k^2] = ||a||^2 + 2 a_k^2, per coordinate.
    for (Eigen::Index k = 0; k < d; ++k) {
      const double closed = a.squaredNorm() + 2.0 * a[k] * a[k];
      if (closed > kTwoSqrtSix * a.squaredNorm()) {
        result.pass = false;
        result.detail = "closed form exceeds per-coordinate bound at k = " +
                        std::to_string(k);
        return result;
      }
    }

    const auto problem =
        make_linear_probe(Partition::uniform(1, d), a);
    rng::Stream zs(rng::derive_seed(seed, static_cast<std::uint64_t>(case_idx),
                                    rng::Purpose::kPerturbation, 400));
    const Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    const double u = 0.5;
    double acc = 0.0;
    double acc_sq = 0.0;
    for (int s = 0; s < kSamples; ++s) {
      const Eigen::VectorXd z = zs.normal_vector(d);
      const double f_plus = problem->evaluate_local(0, x + u * z);
      const double f_minus = problem->evaluate_local(0, x - u * z);
      const double derivative = two_point_derivative(f_plus, f_minus, u);
      const double norm_sq = (derivative * z).squaredNorm();
      acc += norm_sq;
      acc_sq += norm_sq * norm_sq;
    }
    const double mean = acc / kSamples;
    const double var =
        (acc_sq / kSamples - mean * mean) * kSamples / (kSamples - 1);
    const double se = std::sqrt(std::max(var, 0.0) / kSamples);
    const double bound =
        kTwoSqrtSix * g_const * g_const * static_cast<double>(d);
    worst_ratio = std::max(worst_ratio, mean / bound);
    if (mean > bound + 3.0 * se) {
      result.pass = false;
      result.detail = "probe " + std::to_string(case_idx) + ": E||Dz||^2 = " +
                      fmt(mean) + " > bound " + fmt(bound) + " + 3se";
      return result;
    }
    ++case_idx;
  }
  result.detail = "worst E||Dz||^2 / bound = " + fmt(worst_ratio);
  return result;
}

namespace {

struct AuditOutcome {
  bool ok = true;
  std::string detail;
};

AuditOutcome audit_delay_model(const DelayModelSpec& spec, int agents,
                               std::int64_t rounds) {
  DelayMedium medium(spec, agents, rng::derive_seed(7, 0, rng::Purpose::kDelay,
                                                    spec.seed_tag));
  std::vector<PeerTable> tables(static_cast<std::size_t>(agents),
                                PeerTable(agents));
  const int bound = medium.bound();
  for (std::int64_t t = 0; t < rounds; ++t) {
    for (int s = 0; s < agents; ++s) {
      const double value = static_cast<double>(t * agents + s);
      medium.post({s, t, value}, t);
    }
    for (int r = 0; r < agents; ++r) {
      std::vector<std::int64_t> before(static_cast<std::size_t>(agents));
      for (int j = 0; j < agents; ++j) before[j] = tables[r].timestamp(j);
      tables[r].update(medium.deliver(r, t));
      for (int j = 0; j < agents; ++j) {
        const std::int64_t tau = tables[r].timestamp(j);
        if (tau < before[j]) {
          return {false, "timestamp decreased for pair (" + std::to_string(r) +
                             "," + std::to_string(j) + ") at round " +
                             std::to_string(t)};
        }
        if (j == r && tau != t) {
          return {false, "self timestamp not current at round " +
                             std::to_string(t)};
        }
        if (t >= bound && (tau < 0 || t - tau > bound)) {
          return {false, "staleness " + std::to_string(t - tau) +
                             " beyond bound " + std::to_string(bound) +
                             " for pair (" + std::to_string(r) + "," +
                             std::to_string(j) + ") at round " +
                             std::to_string(t)};
        }
        if (tau >= 0) {
          const double expect = static_cast<double>(tau * agents + j);
          if (tables[r].value(j) != expect) {
            return {false, "value/timestamp pairing broken for pair (" +
                               std::to_string(r) + "," + std::to_string(j) +
                               ") at round " + std::to_string(t)};
          }
        }
      }
    }
  }
  return {true, ""};
}

}  // namespace

CheckResult check_delay_bound() {
  CheckResult result{"delay_bound", true, ""};
  constexpr int kAgents = 5;
  constexpr std::int64_t kRounds = 10000;
  int audited = 0;

  for (const int bound : {0, 1, 5}) {
    {
      DelayModelSpec spec;
      spec.kind = DelayKind::kZero;
      spec.bound = bound;  // normalized to 0 by the medium
      const auto out = audit_delay_model(spec, kAgents, kRounds);
      if (!out.ok) {
        result.pass = false;
        result.detail = "zero, B=" + std::to_string(bound) + ": " + out.detail;
        return result;
      }
      ++audited;
    }
    {
      DelayModelSpec spec;
      spec.kind = DelayKind::kFixedMatrix;
      spec.bound = bound;
      spec.matrix.resize(kAgents, kAgents);
      for (int s = 0; s < kAgents; ++s) {
        for (int r = 0; r < kAgents; ++r) {
          spec.matrix(s, r) = s == r ? 0 : (s + r) % (bound + 1);
        }
      }
      const auto out = audit_delay_model(spec, kAgents, kRounds);
      if (!out.ok) {
        result.pass = false;
        result.detail =
            "fixed_matrix, B=" + std::to_string(bound) + ": " + out.detail;
        return result;
      }
      ++audited;
    }
    {
      DelayModelSpec spec;
      spec.kind = DelayKind::kUniformRandom;
      spec.bound = bound;
      spec.seed_tag = static_cast<std::uint64_t>(bound);
      const auto out = audit_delay_model(spec, kAgents, kRounds);
      if (!out.ok) {
        result.pass = false;
        result.detail =
            "uniform_random, B=" + std::to_string(bound) + ": " + out.detail;
        return result;
      }
      ++audited;
    }
    {
      DelayModelSpec spec;
      spec.kind = DelayKind::kPeriodicGossip;
      spec.bound = bound;
      spec.period = std::max(bound, 1);
      if (bound == 0) {
        // No admissible period exists; construction must be rejected.
        bool rejected = false;
        try {
          validate_delay_spec(spec, kAgents);
        } catch (const ConfigError&) {
          rejected = true;
        }
        if (!rejected) {
          result.pass = false;
          result.detail = "periodic_gossip with B=0 was not rejected";
          return result;
        }
        ++audited;
      } else {
        const auto out = audit_delay_model(spec, kAgents, kRounds);
        if (!out.ok) {
          result.pass = false;
          result.detail =
              "periodic_gossip, B=" + std::to_string(bound) + ": " + out.detail;
          return result;
        }
        ++audited;
      }
    }
  }
  result.detail = std::to_string(audited) + " model/bound audits, " +
                  std::to_string(kRounds) + " rounds each, zero violations";
  return result;
}

CheckResult check_delay_drift(std::uint64_t seed) {
  CheckResult result{"delay_drift", true, ""};

  ExperimentConfig config;
  config.problem = make_separable_quadratic(Partition::uniform(4, 2), 10.0);
  config.schedules = validate_schedule_pair(
      {ScheduleKind::kPowerLaw, 0.1, 0.5}, {ScheduleKind::kPowerLaw, 0.01, 0.25});
  config.delay.kind = DelayKind::kUniformRandom;
  config.delay.bound = 3;
  config.horizon = 2000;
  config.trials = 1;
  config.master_seed = seed;
  config.init.kind = InitSpec::Kind::kConstant;
  config.init.fill = 1.0;
  config.record_trace = true;

  World world(config, 0);
  const int n = config.problem->partition().agent_count();
  const int bound = world.delay_bound();
  const Eigen::Index d = config.problem->partition().total();

  std::deque<Eigen::VectorXd> history;  // x(t - bound) ... x(t)
  double drift_acc = 0.0;
  double bound_acc = 0.0;
  std::int64_t counted = 0;
  double max_norm = 0.0;

  for (std::int64_t t = 0; t < config.horizon; ++t) {
    const Eigen::VectorXd x = world.decision();
    history.push_back(x);
    if (static_cast<int>(history.size()) > bound + 1) history.pop_front();
    max_norm = std::max(max_norm, x.norm());

    const RoundMetrics metrics = world.step();
    if (t < bound) continue;

    const auto& tau = world.trace().back().tau;
    double pair_acc = 0.0;
    int pairs = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const std::int64_t tj = tau[i][j];
        if (tj < 0) continue;
        const Eigen::VectorXd& stale =
            history[static_cast<std::size_t>(history.size() - 1 - (t - tj))];
        // grad f = x for the quadratic, so the gradient drift is the
        // decision drift.
        pair_acc += (x - stale).squaredNorm();
        ++pairs;
      }
    }
    if (pairs == 0) continue;
    drift_acc += pair_acc / pairs;
    bound_acc += kTwoSqrtSix * max_norm * max_norm * bound *
                 static_cast<double>(d) * metrics.p_sq;
    ++counted;
  }

  const double avg_drift = drift_acc / static_cast<double>(counted);
  const double avg_bound = bound_acc / static_cast<double>(counted);
  if (!(avg_drift <= avg_bound)) {
    result.pass = false;
    result.detail = "average drift " + fmt(avg_drift) + " exceeds bound " +
                    fmt(avg_bound);
    return result;
  }
  result.detail = "average drift " + fmt(avg_drift) + " <= bound " +
                  fmt(avg_bound) + " over " + std::to_string(counted) +
                  " rounds";
  return result;
}

std::vector<CheckResult> run_all_checks(std::uint64_t seed) {
  return {
      check_unbiasedness(seed), check_bias_bound(seed),
      check_second_moment(seed), check_delay_bound(),
      check_delay_drift(seed),
  };
}

bool replay_matches(const TrialResult& result, std::string* diagnostic) {
  const TraceLog& trace = result.trace;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const TraceRound& round = trace[t];
    const int n = static_cast<int>(round.derivative.size());
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(round.z[i].size());
      for (int j = 0; j < n; ++j) {
        const std::int64_t tau = round.tau[i][j];
        if (tau < 0) continue;
        const TraceRound& source = trace[static_cast<std::size_t>(tau)];
        g += source.derivative[j] * source.z[i];
      }
      g = g / static_cast<double>(n);
      const Eigen::VectorXd& logged = round.g[i];
      if (g.size() != logged.size() ||
          std::memcmp(g.data(), logged.data(),
                      sizeof(double) * static_cast<std::size_t>(g.size())) != 0) {
        if (diagnostic != nullptr) {
          *diagnostic = "round " + std::to_string(t) + ", agent " +
                        std::to_string(i) + ": replay differs";
        }
        return false;
      }
    }
  }
  return true;
}

}  // namespace zocoop
