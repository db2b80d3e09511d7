#ifndef ZOCOOP_METRICS_HPP
#define ZOCOOP_METRICS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "zocoop/engine.hpp"

namespace zocoop {

/// Running-average squared gradient norm M(T), weighted sum S(T), and the
/// least-squares slope of log M(T) against log(T+1) over the tail window.
/// Gradient norms are averaged across completed trials per round before the
/// prefix sums are formed. m_from_bound averages only rounds t >= B (the
/// warm-up-free convention); its first B entries are NaN.
struct ConvergenceSummary {
  std::vector<std::int64_t> t;
  std::vector<double> m;
  std::vector<double> m_from_bound;
  std::vector<double> s;
  double fitted_slope = 0.0;
};

/// window_fraction is the trailing share of rounds used for the slope fit
/// (default: last half). Throws GradientUnavailable when any round lacks a
/// gradient norm and Error when no trial completed.
ConvergenceSummary compute_summary(const std::vector<TrialResult>& trials,
                                   double window_fraction = 0.5);

/// Least-squares slope of log(m) vs log(t+1) over the trailing window;
/// non-positive m entries are skipped. NaN when fewer than two usable
/// points remain.
double fitted_log_slope(const std::vector<std::int64_t>& t,
                        const std::vector<double>& m, double window_fraction);

/// Writes rounds.csv (long format: t,trial,f_value,grad_sq_norm,eta,u,p_sq,
/// normalized_objective), one trial_XXX.csv per trial with the same header,
/// and summary.csv (T,M,S; header-only when summary is null). Unavailable
/// values are empty fields; doubles carry 17 significant digits so a
/// re-import reproduces them bit-exactly.
void export_csv(const std::vector<TrialResult>& trials,
                const ConvergenceSummary* summary, const std::string& dir);

/// Reads a rounds.csv (or trial_XXX.csv) back into per-trial metric lists,
/// ordered by (trial, t).
std::vector<TrialResult> import_rounds_csv(const std::string& path);

/// Plot-ready aggregation of a rounds.csv: one line per round with the
/// cross-trial mean and standard deviation of the normalized objective
/// (falling back to f_value when normalization is unavailable), whitespace
/// delimited: t mean std.
void write_plot_table(const std::string& rounds_csv_path, std::ostream& out);

/// 17-significant-digit decimal form whose parse returns the same double.
std::string format_double(double v);

}  // namespace zocoop

#endif  // ZOCOOP_METRICS_HPP
