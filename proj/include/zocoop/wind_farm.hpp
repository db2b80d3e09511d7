#ifndef ZOCOOP_WIND_FARM_HPP
#define ZOCOOP_WIND_FARM_HPP

#include <string>
#include <vector>

#include "zocoop/problems.hpp"

namespace zocoop {

/// Park-type wake parameters for a single row of turbines facing the wind.
struct WindFarmParams {
  double free_speed = 1.0;      // upstream wind speed V_inf
  double rotor_diameter = 1.0;  // D_r
  double wake_decay = 0.075;    // k
  double spacing = 5.0;         // default inter-turbine distance s0
};

/// Row of turbines, each controlling one axial induction factor. Turbine i
/// sees the free wind speed reduced multiplicatively by every upstream
/// turbine j < i:
///
///   V_i = V_inf * prod_{j<i} (1 - 2 a_j c_ji),
///   c_ji = (D_r / (D_r + 2 k s_ji))^2,   s_ji = position_i - position_j,
///   P_i = Cp(a_i) V_i^3,                 Cp(a) = 4 a (1 - a)^2.
///
/// Power is maximized; the local cost is -P_i so the engine always
/// descends. Inductions are clamped to [0, 1/2] inside evaluation only; the
/// stored decision vector is never projected.
class WindFarm final : public Problem {
 public:
  /// Positions must be strictly increasing; index 0 is the most upstream.
  WindFarm(std::vector<double> positions, WindFarmParams params);

  const std::vector<double>& positions() const { return positions_; }
  const WindFarmParams& params() const { return params_; }

  /// Wind speed at a turbine after upstream deficits (inductions clamped).
  double wind_speed(int turbine, const Eigen::VectorXd& a) const;

  /// Power extracted by one turbine (positive orientation).
  double turbine_power(int turbine, const Eigen::VectorXd& a) const;

  /// Mean power over the row; the minimized objective is its negation.
  double mean_power(const Eigen::VectorXd& a) const;

  /// Best mean power over the box [0, 1/2]^n and its argmax, found once at
  /// construction by a deterministic multi-start coordinate-descent oracle
  /// (fixed seed, fixed iteration budget). meta().optimum_value stores the
  /// negation of optimal_mean_power().
  double optimal_mean_power() const { return p_star_; }
  const Eigen::VectorXd& optimal_decision() const { return x_star_; }

  /// Uniform point in the box [0, 1/2]^n.
  Eigen::VectorXd sample_domain(rng::Stream& stream) const override;

 private:
  double do_evaluate_local(int agent, const Eigen::VectorXd& x) const override;

  Eigen::VectorXd power_vector(const Eigen::VectorXd& a) const;
  void solve_optimum();
  void estimate_regularity();

  std::vector<double> positions_;
  WindFarmParams params_;
  Eigen::MatrixXd deficit_;  // deficit_(i, j) = c_ji for j < i, else 0
  Eigen::VectorXd x_star_;
  double p_star_ = 0.0;
};

/// n turbines spaced params.spacing apart, most upstream at position 0.
ProblemPtr make_wind_farm(int turbines, WindFarmParams params = {});

/// Explicit layout (strictly increasing downwind positions).
ProblemPtr make_wind_farm(std::vector<double> positions,
                          WindFarmParams params = {});

/// Loads turbine positions from a CSV with columns index,position (header
/// optional). Rows are ordered by the index column.
std::vector<double> load_turbine_layout(const std::string& path);

}  // namespace zocoop

#endif  // ZOCOOP_WIND_FARM_HPP
