#include "zocoop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "zocoop/errors.hpp"

namespace zocoop {

namespace {

constexpr const char* kRoundsHeader =
    "t,trial,f_value,grad_sq_norm,eta,u,p_sq,normalized_objective";

std::string opt_field(const std::optional<double>& v) {
  return v.has_value() ? format_double(*v) : std::string();
}

std::optional<double> parse_opt(const std::string& field) {
  if (field.empty()) return std::nullopt;
  return std::stod(field);
}

void write_round_row(std::ofstream& out, const RoundMetrics& m, int trial) {
  out << m.t << ',' << trial << ',' << format_double(m.f_value) << ','
      << opt_field(m.grad_sq_norm) << ',' << format_double(m.eta) << ','
      << format_double(m.u) << ',' << format_double(m.p_sq) << ','
      << opt_field(m.normalized_objective) << '\n';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  // Trailing empty field is dropped by getline; restore it.
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ConvergenceSummary compute_summary(const std::vector<TrialResult>& trials,
                                   double window_fraction) {
  std::vector<const TrialResult*> completed;
  for (const auto& trial : trials) {
    if (trial.status == TrialStatus::kCompleted && !trial.metrics.empty()) {
      completed.push_back(&trial);
    }
  }
  if (completed.empty()) throw Error("no completed trials to summarize");

  std::size_t rounds = completed.front()->metrics.size();
  for (const auto* trial : completed) {
    rounds = std::min(rounds, trial->metrics.size());
  }

  ConvergenceSummary summary;
  summary.t.resize(rounds);
  summary.m.resize(rounds);
  summary.m_from_bound.resize(rounds);
  summary.s.resize(rounds);
  const std::size_t bound =
      static_cast<std::size_t>(std::max(0, completed.front()->delay_bound));
  double m_acc = 0.0;
  double mb_acc = 0.0;
  double s_acc = 0.0;
  for (std::size_t t = 0; t < rounds; ++t) {
    double g = 0.0;
    for (const auto* trial : completed) {
      const auto& metric = trial->metrics[t];
      if (!metric.grad_sq_norm.has_value()) {
        throw GradientUnavailable(
            "round " + std::to_string(metric.t) +
            " has no gradient norm; summary needs an analytic oracle");
      }
      g += *metric.grad_sq_norm;
    }
    g /= static_cast<double>(completed.size());
    m_acc += g;
    s_acc += completed.front()->metrics[t].eta * g;
    summary.t[t] = completed.front()->metrics[t].t;
    summary.m[t] = m_acc / static_cast<double>(t + 1);
    if (t >= bound) {
      mb_acc += g;
      summary.m_from_bound[t] = mb_acc / static_cast<double>(t - bound + 1);
    } else {
      summary.m_from_bound[t] = std::numeric_limits<double>::quiet_NaN();
    }
    summary.s[t] = s_acc;
  }
  summary.fitted_slope = fitted_log_slope(summary.t, summary.m, window_fraction);
  return summary;
}

double fitted_log_slope(const std::vector<std::int64_t>& t,
                        const std::vector<double>& m,
                        double window_fraction) {
  if (t.size() != m.size() || t.empty() || window_fraction <= 0.0 ||
      window_fraction > 1.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const std::size_t start =
      t.size() - static_cast<std::size_t>(
                     std::ceil(window_fraction * static_cast<double>(t.size())));
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (std::size_t k = start; k < t.size(); ++k) {
    if (!(m[k] > 0.0)) continue;
    const double x = std::log(static_cast<double>(t[k] + 1));
    const double y = std::log(m[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double denom = static_cast<double>(count) * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (static_cast<double>(count) * sxy - sx * sy) / denom;
}

void export_csv(const std::vector<TrialResult>& trials,
                const ConvergenceSummary* summary, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir);

  const fs::path base(dir);
  std::ofstream rounds(base / "rounds.csv");
  if (!rounds) throw IoError("cannot write " + (base / "rounds.csv").string());
  rounds << kRoundsHeader << '\n';
  for (const auto& trial : trials) {
    char name[32];
    std::snprintf(name, sizeof(name), "trial_%03d.csv", trial.trial);
    std::ofstream per_trial(base / name);
    if (!per_trial) throw IoError("cannot write " + (base / name).string());
    per_trial << kRoundsHeader << '\n';
    for (const auto& metric : trial.metrics) {
      write_round_row(rounds, metric, trial.trial);
      write_round_row(per_trial, metric, trial.trial);
    }
  }

  std::ofstream sum(base / "summary.csv");
  if (!sum) throw IoError("cannot write " + (base / "summary.csv").string());
  sum << "T,M,S\n";
  if (summary != nullptr) {
    for (std::size_t k = 0; k < summary->t.size(); ++k) {
      sum << summary->t[k] << ',' << format_double(summary->m[k]) << ','
          << format_double(summary->s[k]) << '\n';
    }
  }
}

std::vector<TrialResult> import_rounds_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty csv: " + path);
  if (line != kRoundsHeader) {
    throw ConfigError("unexpected csv header in " + path);
  }

  std::map<int, std::vector<RoundMetrics>> by_trial;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 8) {
      throw ConfigError("line " + std::to_string(line_no) + " of " + path +
                        " has " + std::to_string(fields.size()) +
                        " fields, expected 8");
    }
    try {
      RoundMetrics m;
      m.t = std::stoll(fields[0]);
      const int trial = std::stoi(fields[1]);
      m.f_value = std::stod(fields[2]);
      m.grad_sq_norm = parse_opt(fields[3]);
      m.eta = std::stod(fields[4]);
      m.u = std::stod(fields[5]);
      m.p_sq = std::stod(fields[6]);
      m.normalized_objective = parse_opt(fields[7]);
      by_trial[trial].push_back(m);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(line_no) + " of " + path +
                        " is not numeric");
    }
  }

  std::vector<TrialResult> out;
  out.reserve(by_trial.size());
  for (auto& [trial, metrics] : by_trial) {
    std::stable_sort(metrics.begin(), metrics.end(),
                     [](const RoundMetrics& a, const RoundMetrics& b) {
                       return a.t < b.t;
                     });
    TrialResult result;
    result.trial = trial;
    result.status = TrialStatus::kCompleted;
    result.metrics = std::move(metrics);
    out.push_back(std::move(result));
  }
  return out;
}

void write_plot_table(const std::string& rounds_csv_path, std::ostream& out) {
  const auto trials = import_rounds_csv(rounds_csv_path);
  if (trials.empty()) return;

  std::map<std::int64_t, std::vector<double>> values;
  for (const auto& trial : trials) {
    for (const auto& m : trial.metrics) {
      values[m.t].push_back(m.normalized_objective.has_value()
                                ? *m.normalized_objective
                                : m.f_value);
    }
  }
  for (const auto& [t, v] : values) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double sd = 0.0;
    if (v.size() >= 2) {
      for (double x : v) sd += (x - mean) * (x - mean);
      sd = std::sqrt(sd / static_cast<double>(v.size() - 1));
    }
    out << t << ' ' << format_double(mean) << ' ' << format_double(sd) << '\n';
  }
}

}  // namespace zocoop
