#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "openmhd/config.hpp"
#include "openmhd/field.hpp"
#include "openmhd/sparse.hpp"

namespace openmhd {

/// Boundary data, potential and sources sampled at every level of one window.
struct WindowData {
  Grid grid;  ///< faces tagged from u_B at the window start
  std::vector<double> times;
  std::vector<ScalarField> rho_boundary, theta_boundary, gravity;
  std::vector<VectorField> u_boundary, b_boundary;
  /// Empty unless the scenario is manufactured.
  std::vector<ScalarField> f_rho, f_theta;
  std::vector<VectorField> f_u, f_b;
  /// Prescribed velocity snapshots in kinematic mode, empty otherwise.
  std::vector<VectorField> kinematic_u;

  [[nodiscard]] std::size_t steps() const { return times.size() - 1; }
};

/// Samples every profile of the config at times (first_step + n) dt, n = 0..steps.
WindowData sample_window(const ScenarioConfig& c, const Grid& tagged, long first_step, int steps);

/// Initial state sampled from the config's initial-data profiles.
State initial_state(const ScenarioConfig& c, const Grid& g, double t = 0.0);

struct PicardOptions {
  MaterialParams material;
  ParabolicOptions parabolic;
  SweepOrdering ordering = SweepOrdering::Jacobi;
  bool kinematic_velocity = false;
  /// Density floor; a sweep whose density dips below it throws DensityFloorViolated.
  double r0 = 0.0;
};

struct SubproblemStats {
  int iterations = 0;
  double max_residual = 0.0;
  int fallbacks = 0;
  void absorb(const SolveStats& s);
};

struct SweepStats {
  SubproblemStats momentum, temperature, induction;
};

/// Constant-in-time extension of the window's initial state (velocity
/// replaced by the prescribed field in kinematic mode).
Trajectory initial_iterate(const WindowData& w, const State& start, bool kinematic_velocity);

/// One application of the fixed-point mapping: density from the input
/// velocity, then temperature, induction and momentum against frozen input
/// fields (Jacobi), or against the fields just computed (Gauss-Seidel).
Trajectory picard_step(const WindowData& w, const Trajectory& iterate, const PicardOptions& opt,
                       SweepStats* stats = nullptr);

/// ||d rho||_{Linf(L2)} + ||d u||_{L2(H1)} + ||d theta||_{L2(H1)} + ||d B||_{L2(H1)}.
double lower_topology_distance(const Grid& g, const Trajectory& a, const Trajectory& b);

struct BallSpec {
  double k_rho = 0.0, k_u = 0.0, k_theta = 0.0, k_b = 0.0;
  double r0 = 0.0;
  double window = 0.0;
};

/// Solution-space norms: Linf(0,T; W1q) for rho; Lp(0,T; W2q) + W1p(0,T; Lq)
/// surrogates for u, theta, B.
struct SolutionNorms {
  double rho = 0.0, u = 0.0, theta = 0.0, b = 0.0;
  double min_rho = 0.0;
};

SolutionNorms solution_norms(const Grid& g, const Trajectory& traj, double p, double q);

struct BallMembership {
  bool rho = true, u = true, theta = true, b = true, density_floor = true;
  [[nodiscard]] bool all() const { return rho && u && theta && b && density_floor; }
};

BallMembership check_ball_membership(const Grid& g, const Trajectory& traj, const BallSpec& ball, double p, double q);

enum class WindowOutcome { Converged, Shrunk, Failed };
const char* to_string(WindowOutcome o);

struct IterateRecord {
  int window = 0;
  int iterate = 0;
  double distance = 0.0;
  std::optional<double> ratio;
  BallMembership ball;
  SweepStats solves;
};

struct WindowRecord {
  double start = 0.0;
  double length = 0.0;
  WindowOutcome outcome = WindowOutcome::Converged;
  int iterates = 0;
  std::string reason;
};

struct FixedPointReport {
  std::vector<IterateRecord> iterates;
  std::vector<WindowRecord> windows;
  bool converged = false;
  double final_time = 0.0;
  int total_iterates = 0;
};

void to_json(nlohmann::json& j, const FixedPointReport& r);

struct RunOptions {
  /// Relative amplitude of a seeded random perturbation added to the first
  /// window's starting iterate at interior nodes and t > t0.
  double start_perturbation = 0.0;
  std::uint64_t perturbation_seed = 0;
};

/// Advances to the horizon by concatenating converged windows. A window
/// halves after two consecutive ratios >= 1, a ball exit, a density-floor
/// violation, a failed subproblem, or max_iter iterates. Throws NoConvergence
/// (with `report` filled) once max_shrinks halvings are exhausted.
Trajectory run_fixed_point(const ScenarioConfig& c, FixedPointReport& report, const RunOptions& opts = {});

}  // namespace openmhd
