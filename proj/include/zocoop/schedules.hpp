#ifndef ZOCOOP_SCHEDULES_HPP
#define ZOCOOP_SCHEDULES_HPP

#include <cstdint>
#include <string>

namespace zocoop {

enum class ScheduleKind { kPowerLaw, kConstant };

/// A step-size or smoothing-radius sequence. PowerLaw evaluates to
/// base/(t+1)^exponent; Constant evaluates to base at every round and its
/// exponent is ignored. Use validate_schedule_pair before running: it
/// enforces base > 0 and the admissible exponent ranges (0 < alpha < 1 for
/// steps, beta > 0 for smoothing).
struct Schedule {
  ScheduleKind kind = ScheduleKind::kPowerLaw;
  double base = 0.0;
  double exponent = 0.0;
};

/// Sequence value at round t (t >= 0). Strictly positive and non-increasing
/// in t for validated schedules.
double eval(const Schedule& schedule, std::int64_t t);

/// A step/smoothing pair that passed validation. theorem_applies is false
/// when either schedule is Constant: the constant-parameter baseline is
/// runnable but carries no diminishing-schedule convergence guarantee, and
/// the engine records that.
struct SchedulePair {
  Schedule step;
  Schedule smoothing;
  bool theorem_applies = true;
};

/// Validates a (step, smoothing) pair. Accepts PowerLaw/PowerLaw with
/// 0 < alpha < 1 and beta > 0, and any pair involving a Constant schedule
/// (baseline mode, flagged via theorem_applies = false).
/// Throws NonPositiveBase or OutOfRangeExponent otherwise.
SchedulePair validate_schedule_pair(const Schedule& step,
                                    const Schedule& smoothing);

/// The six growth regimes of the weighted gradient sum S(T) as a function
/// of the power-law exponents (alpha, beta).
enum class RateRegime {
  kPolyStepAndSmoothing,  // T^(1-2a) + T^(1-a-2b):  0 < a < 1/2, a+2b < 1
  kPolyStep,              // T^(1-2a):               0 < a < 1/2, a+2b >= 1
  kPolySmoothing,         // T^(1-a-2b):             1/2 <= a < 1, a+2b < 1
  kLogCritical,           // log T:                  a = 1/2, b >= 1/4
  kLogBoundary,           // log T:                  1/2 < a < 1, a+2b = 1
  kBounded,               // O(1):                   1/2 < a < 1, a+2b > 1
};

/// Returns the S(T) regime for power-law exponents alpha in (0,1), beta > 0.
/// Throws OutOfRangeExponent outside that range.
RateRegime predicted_rate_regime(double alpha, double beta);

/// The dominant polynomial growth exponent of S(T) in a regime: 0 for the
/// logarithmic and bounded regimes.
double regime_growth_exponent(RateRegime regime, double alpha, double beta);

std::string to_string(RateRegime regime);

}  // namespace zocoop

#endif  // ZOCOOP_SCHEDULES_HPP
