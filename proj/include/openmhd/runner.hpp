#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "openmhd/config.hpp"
#include "openmhd/diagnostics.hpp"
#include "openmhd/fixed_point.hpp"

namespace openmhd {

struct RunSettings {
  /// Output directory; empty falls back to OPENMHD_OUT, then output.dir.
  /// Nothing is written when all three are empty.
  std::string out_dir;
  RunOptions fixed_point;
};

struct ReferenceError {
  std::string field;
  double l2_final = 0.0;
  double l2_max = 0.0;
};

struct RunResult {
  int exit_code = 1;
  bool converged = false;
  FixedPointReport fixed_point;
  std::optional<DiagnosticsReport> diagnostics;
  std::vector<ReferenceError> errors;
  Trajectory trajectory;
  nlohmann::json report;
  /// Directory the report and dumps went to, empty if nothing was written.
  std::string written_to;
};

/// Resolves the output directory: explicit, then OPENMHD_OUT, then config.
std::string resolve_output_dir(const ScenarioConfig& c, const std::string& explicit_dir);

/// L2 errors against the config's reference profiles.
std::vector<ReferenceError> reference_errors(const ScenarioConfig& c, const Trajectory& traj);

/// Validates, advances to the horizon and runs the diagnostics. Writes
/// report.json and field dumps when an output directory resolves. Exit code
/// 0 iff the fixed point converged and every mandatory check passes; 2 on
/// NoConvergence (report still written), 3 on failed diagnostics.
RunResult run_scenario(const ScenarioConfig& c, const RunSettings& settings = {});

struct ConvergenceLevel {
  int nx = 0, ny = 0;
  double h = 0.0, dt = 0.0;
  std::vector<ReferenceError> errors;
};

struct ConvergenceStudy {
  std::vector<ConvergenceLevel> levels;
  /// orders[k][f] = log2(e_{k-1} / e_k) for field f of the final-time L2 error.
  std::vector<std::vector<double>> orders;
};

/// Runs the config at `levels` resolutions, halving h and dt each time
/// starting from the config's own.
ConvergenceStudy convergence_study(const ScenarioConfig& c, int levels);

nlohmann::json to_json(const ConvergenceStudy& s);

}  // namespace openmhd
