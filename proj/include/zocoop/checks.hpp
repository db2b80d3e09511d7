#ifndef ZOCOOP_CHECKS_HPP
#define ZOCOOP_CHECKS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "zocoop/engine.hpp"

namespace zocoop {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Monte-Carlo estimator mean against the analytic gradient on a quadratic,
/// per coordinate within 3 standard errors.
CheckResult check_unbiasedness(std::uint64_t seed);

/// Estimated smoothing bias against the u*L*sqrt(d) bound on the bounded
/// nonconvex problem, with 3-standard-error slack.
CheckResult check_bias_bound(std::uint64_t seed);

/// Empirical squared norm of the estimator against the 2*sqrt(6)*G^2*d
/// bound on linear probes, plus the per-coordinate closed form.
CheckResult check_second_moment(std::uint64_t seed);

/// Exhaustive audit of every delay model at bounds {0, 1, 5}: staleness
/// never exceeds the bound, timestamps never decrease, self-messages are
/// instant, and values stay paired with their timestamps.
CheckResult check_delay_bound();

/// Run-average gradient drift between current and peer-stale decisions
/// against the trailing step-energy bound on a quadratic trajectory.
CheckResult check_delay_drift(std::uint64_t seed);

std::vector<CheckResult> run_all_checks(std::uint64_t seed);

/// Recomputes every partial gradient of a traced run from the logged
/// (derivative, timestamp, perturbation) triples; true iff all match the
/// engine's values bit-exactly.
bool replay_matches(const TrialResult& result, std::string* diagnostic = nullptr);

}  // namespace zocoop

#endif  // ZOCOOP_CHECKS_HPP
