#include "zocoop/schedules.hpp"

#include <cmath>

#include "zocoop/errors.hpp"

namespace zocoop {

double eval(const Schedule& schedule, std::int64_t t) {
  if (schedule.kind == ScheduleKind::kConstant) return schedule.base;
  return schedule.base / std::pow(static_cast<double>(t) + 1.0, schedule.exponent);
}

namespace {

void require_positive_base(const Schedule& s, const char* which) {
  if (!(s.base > 0.0) || !std::isfinite(s.base)) {
    throw NonPositiveBase(std::string(which) + ": base must be positive, got " +
                          std::to_string(s.base));
  }
}

}  // namespace

SchedulePair validate_schedule_pair(const Schedule& step,
                                    const Schedule& smoothing) {
  require_positive_base(step, "step schedule");
  require_positive_base(smoothing, "smoothing schedule");

  const bool any_constant = step.kind == ScheduleKind::kConstant ||
                            smoothing.kind == ScheduleKind::kConstant;

  if (step.kind == ScheduleKind::kPowerLaw && !any_constant) {
    if (!(step.exponent > 0.0 && step.exponent < 1.0)) {
      throw OutOfRangeExponent(
          "step schedule: power-law exponent must lie in (0,1), got " +
          std::to_string(step.exponent));
    }
    if (!(smoothing.exponent > 0.0) || !std::isfinite(smoothing.exponent)) {
      throw OutOfRangeExponent(
          "smoothing schedule: power-law exponent must be positive, got " +
          std::to_string(smoothing.exponent));
    }
    return {step, smoothing, true};
  }

  // Baseline mode: any pair involving a Constant schedule is runnable, but
  // the diminishing-schedule guarantee does not apply. A PowerLaw member of
  // such a pair still has to be well-formed.
  if (step.kind == ScheduleKind::kPowerLaw &&
      !(step.exponent > 0.0 && step.exponent < 1.0)) {
    throw OutOfRangeExponent(
        "step schedule: power-law exponent must lie in (0,1), got " +
        std::to_string(step.exponent));
  }
  if (smoothing.kind == ScheduleKind::kPowerLaw &&
      (!(smoothing.exponent > 0.0) || !std::isfinite(smoothing.exponent))) {
    throw OutOfRangeExponent(
        "smoothing schedule: power-law exponent must be positive, got " +
        std::to_string(smoothing.exponent));
  }
  return {step, smoothing, false};
}

RateRegime predicted_rate_regime(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw OutOfRangeExponent("rate regime: alpha must lie in (0,1), got " +
                             std::to_string(alpha));
  }
  if (!(beta > 0.0)) {
    throw OutOfRangeExponent("rate regime: beta must be positive, got " +
                             std::to_string(beta));
  }
  const double s = alpha + 2.0 * beta;
  if (alpha < 0.5) {
    return s < 1.0 ? RateRegime::kPolyStepAndSmoothing : RateRegime::kPolyStep;
  }
  if (alpha == 0.5) {
    return beta >= 0.25 ? RateRegime::kLogCritical : RateRegime::kPolySmoothing;
  }
  // 1/2 < alpha < 1
  if (s < 1.0) return RateRegime::kPolySmoothing;
  if (s == 1.0) return RateRegime::kLogBoundary;
  return RateRegime::kBounded;
}

double regime_growth_exponent(RateRegime regime, double alpha, double beta) {
  switch (regime) {
    case RateRegime::kPolyStepAndSmoothing:
      return std::max(1.0 - 2.0 * alpha, 1.0 - alpha - 2.0 * beta);
    case RateRegime::kPolyStep:
      return 1.0 - 2.0 * alpha;
    case RateRegime::kPolySmoothing:
      return 1.0 - alpha - 2.0 * beta;
    case RateRegime::kLogCritical:
    case RateRegime::kLogBoundary:
    case RateRegime::kBounded:
      return 0.0;
  }
  return 0.0;
}

std::string to_string(RateRegime regime) {
  switch (regime) {
    case RateRegime::kPolyStepAndSmoothing:
      return "poly_step_and_smoothing";
    case RateRegime::kPolyStep:
      return "poly_step";
    case RateRegime::kPolySmoothing:
      return "poly_smoothing";
    case RateRegime::kLogCritical:
      return "log_critical";
    case RateRegime::kLogBoundary:
      return "log_boundary";
    case RateRegime::kBounded:
      return "bounded";
  }
  return "unknown";
}

}  // namespace zocoop
