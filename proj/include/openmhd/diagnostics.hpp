#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "openmhd/config.hpp"
#include "openmhd/density_estimates.hpp"
#include "openmhd/field.hpp"
#include "openmhd/transport.hpp"

namespace openmhd {

struct CheckEntry {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Advisory checks are reported but do not affect the exit status.
  bool advisory = false;
  std::string note;
};

struct DiagnosticsSeries {
  std::vector<double> time;
  std::vector<double> rho_min, rho_max, rho_lower, rho_upper;
  std::vector<double> theta_min, theta_bound;
  std::vector<double> div_b_max;
  std::vector<double> mass_residual;
};

struct DiagnosticsReport {
  std::vector<CheckEntry> checks;
  DiagnosticsSeries series;

  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] const CheckEntry* find(const std::string& name) const;
};

/// Worst relative excursion outside [lower, upper] must stay within tol_h:
/// lower - tol_h |lower| <= rho <= upper + tol_h |upper| at every node and level.
CheckEntry check_density_minmax(const std::vector<ScalarField>& rho, const DensityBounds& bounds, double tol_h);

/// Lower temperature bound per level: min over theta0 e^{-I(t)/cv} and
/// theta_B(s) e^{-(I(t)-I(s))/cv} for s <= t on the boundary, with I the
/// rectangle-rule integral of sup|div u|; negative forcing lowers it by its
/// time integral. Returns the check and fills `bound` when given.
CheckEntry check_temperature_minimum(const Grid& g, const Trajectory& traj, const std::vector<ScalarField>& theta_boundary,
                                     const std::vector<double>& div_u_sup, double cv, double tol_h,
                                     const std::vector<ScalarField>* forcing = nullptr,
                                     std::vector<double>* bound = nullptr);

/// max_t max_x |div B| <= max_x |div B(0)| + tol.
CheckEntry check_divergence_b(const Grid& g, const Trajectory& traj, double tol, std::vector<double>* series = nullptr);

/// Per step |(int rho^{n+1} - int rho^n)/dt + flux - int f| <= tol, with the
/// boundary flux of rho u.n taken from rho_B on inflow faces.
CheckEntry check_mass_balance(const Grid& g, const Trajectory& traj, const std::vector<ScalarField>& rho_boundary,
                              const std::vector<ScalarField>* forcing, double tol,
                              std::vector<double>* series = nullptr);

/// min rho > 0 and min theta > 0 over the trajectory.
CheckEntry positivity_scan(const Trajectory& traj);

/// 5 (h + dt) scale.
double default_tolerance(const ScenarioConfig& c);

/// Runs every check on a full-horizon trajectory of the scenario.
DiagnosticsReport run_diagnostics(const ScenarioConfig& c, const Trajectory& traj);

void to_json(nlohmann::json& j, const CheckEntry& e);
void to_json(nlohmann::json& j, const DiagnosticsReport& r);

}  // namespace openmhd
