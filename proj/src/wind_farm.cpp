#include "zocoop/wind_farm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "zocoop/errors.hpp"

namespace zocoop {

namespace {

constexpr std::uint64_t kOracleSeed = 0x77AE5EEDu;

double cp(double a) { return 4.0 * a * (1.0 - a) * (1.0 - a); }

double clamp_induction(double a) { return std::clamp(a, 0.0, 0.5); }

double cube(double v) { return v * v * v; }

/// Golden-section maximization of a unimodal slice on [lo, hi].
template <typename F>
double golden_max(const F& f, double lo, double hi) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

WindFarm::WindFarm(std::vector<double> positions, WindFarmParams params)
    : Problem("wind_farm",
              Partition::uniform(static_cast<int>(positions.size()), 1),
              ProblemMeta{.minimizing = false, .domain_radius = 0.5}),
      positions_(std::move(positions)),
      params_(params) {
  if (positions_.empty()) throw ConfigError("wind farm needs at least one turbine");
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    if (!(positions_[i] > positions_[i - 1])) {
      throw ConfigError("turbine positions must be strictly increasing");
    }
  }
  if (!(params_.free_speed > 0.0)) throw ConfigError("free_speed must be positive");
  if (!(params_.rotor_diameter > 0.0)) {
    throw ConfigError("rotor_diameter must be positive");
  }
  if (params_.wake_decay < 0.0) throw ConfigError("wake_decay must be non-negative");

  const int n = static_cast<int>(positions_.size());
  deficit_ = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      const double s = positions_[i] - positions_[j];
      const double r = params_.rotor_diameter /
                       (params_.rotor_diameter + 2.0 * params_.wake_decay * s);
      deficit_(i, j) = r * r;
    }
  }

  solve_optimum();
  mutable_meta().optimum_value = -p_star_;
  estimate_regularity();
}

double WindFarm::wind_speed(int turbine, const Eigen::VectorXd& a) const {
  double v = params_.free_speed;
  for (int j = 0; j < turbine; ++j) {
    v *= 1.0 - 2.0 * clamp_induction(a[j]) * deficit_(turbine, j);
  }
  return v;
}

double WindFarm::turbine_power(int turbine, const Eigen::VectorXd& a) const {
  return cp(clamp_induction(a[turbine])) * cube(wind_speed(turbine, a));
}

double WindFarm::mean_power(const Eigen::VectorXd& a) const {
  return power_vector(a).sum() / static_cast<double>(positions_.size());
}

Eigen::VectorXd WindFarm::power_vector(const Eigen::VectorXd& a) const {
  const int n = static_cast<int>(positions_.size());
  Eigen::VectorXd p(n);
  for (int i = 0; i < n; ++i) {
    double v = params_.free_speed;
    for (int j = 0; j < i; ++j) {
      v *= 1.0 - 2.0 * clamp_induction(a[j]) * deficit_(i, j);
    }
    p[i] = cp(clamp_induction(a[i])) * cube(v);
  }
  return p;
}

double WindFarm::do_evaluate_local(int agent, const Eigen::VectorXd& x) const {
  return -turbine_power(agent, x);
}

Eigen::VectorXd WindFarm::sample_domain(rng::Stream& stream) const {
  Eigen::VectorXd x(partition().total());
  for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = 0.5 * stream.uniform01();
  return x;
}

void WindFarm::solve_optimum() {
  const int n = static_cast<int>(positions_.size());
  constexpr int kStarts = 6;
  constexpr int kSweeps = 200;
  constexpr int kGrid = 128;

  double best_power = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_point = Eigen::VectorXd::Constant(n, 1.0 / 3.0);

  for (int start = 0; start < kStarts; ++start) {
    Eigen::VectorXd a(n);
    if (start == 0) {
      a.setConstant(1.0 / 3.0);
    } else {
      rng::Stream st(rng::derive_seed(kOracleSeed, static_cast<std::uint64_t>(start),
                                      rng::Purpose::kInit, 0));
      for (int k = 0; k < n; ++k) a[k] = 0.5 * st.uniform01();
    }

    double prev = mean_power(a);
    for (int sweep = 0; sweep < kSweeps; ++sweep) {
      for (int i = 0; i < n; ++i) {
        // Slice cache: powers upstream of i are unaffected by a_i; for
        // k >= i, q[k] is the wind speed at k with turbine i's factor
        // removed, so the slice evaluates in O(n - i).
        double prefix = 0.0;
        for (int k = 0; k < i; ++k) {
          double v = params_.free_speed;
          for (int j = 0; j < k; ++j) {
            v *= 1.0 - 2.0 * clamp_induction(a[j]) * deficit_(k, j);
          }
          prefix += cp(clamp_induction(a[k])) * cube(v);
        }
        Eigen::VectorXd q(n);
        for (int k = i; k < n; ++k) {
          double v = params_.free_speed;
          for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            v *= 1.0 - 2.0 * clamp_induction(a[j]) * deficit_(k, j);
          }
          q[k] = v;
        }
        const auto slice = [&](double ai) {
          const double c = clamp_induction(ai);
          double total = prefix + cp(c) * cube(q[i]);
          for (int k = i + 1; k < n; ++k) {
            const double v = q[k] * (1.0 - 2.0 * c * deficit_(k, i));
            total += cp(clamp_induction(a[k])) * cube(v);
          }
          return total / static_cast<double>(n);
        };

        int best_cell = 0;
        double best_val = -std::numeric_limits<double>::infinity();
        for (int m = 0; m <= kGrid; ++m) {
          const double val = slice(0.5 * m / kGrid);
          if (val > best_val) {
            best_val = val;
            best_cell = m;
          }
        }
        const double lo = 0.5 * std::max(0, best_cell - 1) / kGrid;
        const double hi = 0.5 * std::min(kGrid, best_cell + 1) / kGrid;
        a[i] = golden_max(slice, lo, hi);
      }
      const double cur = mean_power(a);
      if (cur - prev < 1e-13) {
        prev = cur;
        break;
      }
      prev = cur;
    }
    if (prev > best_power) {
      best_power = prev;
      best_point = a;
    }
  }

  p_star_ = best_power;
  x_star_ = best_point;
}

void WindFarm::estimate_regularity() {
  // Sampled upper bounds over the box, inflated 1.5x; estimates, not
  // certificates.
  const int n = static_cast<int>(positions_.size());
  constexpr int kPoints = 200;
  constexpr double kStep = 1e-6;

  rng::Stream st(rng::derive_seed(kOracleSeed, 0, rng::Purpose::kInit, 1));
  double max_grad = 0.0;
  double max_ratio = 0.0;
  Eigen::MatrixXd prev_grads;
  Eigen::VectorXd prev_x;

  for (int p = 0; p < kPoints; ++p) {
    Eigen::VectorXd x(n);
    for (int k = 0; k < n; ++k) x[k] = 0.5 * st.uniform01();

    Eigen::MatrixXd grads(n, n);  // row i: finite-difference grad of P_i
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    for (int k = 0; k < n; ++k) {
      xp[k] = x[k] + kStep;
      xm[k] = x[k] - kStep;
      grads.col(k) = (power_vector(xp) - power_vector(xm)) / (2.0 * kStep);
      xp[k] = x[k];
      xm[k] = x[k];
    }
    for (int i = 0; i < n; ++i) {
      max_grad = std::max(max_grad, grads.row(i).norm());
    }
    if (p > 0) {
      const double dist = (x - prev_x).norm();
      if (dist > 1e-9) {
        for (int i = 0; i < n; ++i) {
          max_ratio = std::max(
              max_ratio, (grads.row(i) - prev_grads.row(i)).norm() / dist);
        }
      }
    }
    prev_grads = grads;
    prev_x = x;
  }

  mutable_meta().lipschitz_g = 1.5 * max_grad;
  mutable_meta().smooth_l = 1.5 * max_ratio;
}

ProblemPtr make_wind_farm(int turbines, WindFarmParams params) {
  if (turbines <= 0) throw ConfigError("turbine count must be positive");
  std::vector<double> positions(turbines);
  for (int i = 0; i < turbines; ++i) positions[i] = params.spacing * i;
  return std::make_shared<WindFarm>(std::move(positions), params);
}

ProblemPtr make_wind_farm(std::vector<double> positions, WindFarmParams params) {
  return std::make_shared<WindFarm>(std::move(positions), params);
}

std::vector<double> load_turbine_layout(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open layout file: " + path);

  std::vector<std::pair<long long, double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::istringstream fields(line);
    std::string idx_field;
    std::string pos_field;
    if (!std::getline(fields, idx_field, ',') ||
        !std::getline(fields, pos_field, ',')) {
      throw ConfigError("layout line " + std::to_string(line_no) +
                        " needs index,position: " + path);
    }
    try {
      std::size_t used = 0;
      const long long idx = std::stoll(idx_field, &used);
      const double pos = std::stod(pos_field);
      (void)used;
      rows.emplace_back(idx, pos);
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // header row
      throw ConfigError("layout line " + std::to_string(line_no) +
                        " is not numeric: " + path);
    }
  }
  if (rows.empty()) throw ConfigError("layout file has no turbines: " + path);

  std::sort(rows.begin(), rows.end());
  std::vector<double> positions;
  positions.reserve(rows.size());
  for (const auto& [idx, pos] : rows) positions.push_back(pos);
  return positions;
}

}  // namespace zocoop
