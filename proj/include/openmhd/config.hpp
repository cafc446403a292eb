#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "openmhd/constitutive.hpp"
#include "openmhd/manufactured.hpp"
#include "openmhd/parabolic.hpp"
#include "openmhd/profiles.hpp"

namespace openmhd {

struct GridSpec {
  int nx = 32;
  int ny = 32;
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  bool operator==(const GridSpec&) const = default;
};

struct TimeSpec {
  double horizon = 0.1;
  double dt = 1e-3;
  double window = 0.05;
  bool operator==(const TimeSpec&) const = default;
};

enum class SweepOrdering { Jacobi, GaussSeidel };

struct FixedPointSpec {
  double tol = 1e-8;
  int max_iter = 30;
  int max_shrinks = 6;
  SweepOrdering ordering = SweepOrdering::Jacobi;
  /// Ball radii; unset means twice the norms of the first sweep's output.
  std::optional<double> k_rho, k_u, k_theta, k_b;
  /// Density floor; unset means half the smallest initial or inflow density.
  std::optional<double> r0;
  double inner_tol = 1e-11;
  bool operator==(const FixedPointSpec&) const = default;
};

struct OutputSpec {
  /// Dump fields every `cadence` time steps; 0 writes only the final state.
  int cadence = 0;
  std::string dir;
  bool operator==(const OutputSpec&) const = default;
};

struct DataSpec {
  ScalarProfile rho0 = ScalarProfile::constant(1.0);
  VectorProfile u0;
  ScalarProfile theta0 = ScalarProfile::constant(1.0);
  VectorProfile b0;
  ScalarProfile rho_boundary = ScalarProfile::constant(1.0);
  VectorProfile u_boundary;
  ScalarProfile theta_boundary = ScalarProfile::constant(1.0);
  /// Full boundary field B_B; the prescribed tangential trace is b1 = B_B x n.
  VectorProfile b_boundary;
  ScalarProfile gravity;
  bool operator==(const DataSpec&) const = default;
};

/// Exact profiles used only for error reporting.
struct ReferenceSpec {
  std::optional<ScalarProfile> rho;
  std::optional<VectorProfile> u;
  std::optional<ScalarProfile> theta;
  std::optional<VectorProfile> b;
  bool operator==(const ReferenceSpec&) const = default;
};

struct ScenarioConfig {
  std::string name = "custom";
  GridSpec grid;
  MaterialParams material;
  TimeSpec time;
  FixedPointSpec fixed_point;
  double p = 4.0;
  double q = 4.0;
  double inflow_threshold = 0.1;
  std::uint64_t seed = 0;
  OutputSpec output;
  /// Lipschitz scale entering the diagnostics tolerance 5 (h + dt) scale.
  double diagnostics_scale = 1.0;
  DataSpec data;
  std::optional<ManufacturedSolution> manufactured;
  ReferenceSpec reference;
  /// Velocity is held at the u_boundary profile over the whole domain and
  /// the momentum solve is skipped.
  bool kinematic_velocity = false;
  DriftScheme drift = DriftScheme::Upwind;
  bool override_exponent_check = false;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Exponent condition q > d and max{2q/(q-1), 2q/(2q-d)} < p.
bool exponent_condition_holds(double p, double q, int d);

/// Collects every violation (ranges, exponent condition, boundary
/// classification, compatibility of initial and boundary data, div B0,
/// positivity) and throws one ConfigError listing them all.
void validate_config(const ScenarioConfig& c);

ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& c);

/// Parses and validates. Throws ParseError on unreadable input.
ScenarioConfig load_config(const std::string& path, bool override_exponent_check = false);
void write_config(const ScenarioConfig& c, const std::string& path);

Grid make_grid(const GridSpec& spec);
/// Grid with boundary faces tagged from u_B at time t.
Grid tagged_grid(const ScenarioConfig& c, double t);

}  // namespace openmhd
