#include "openmhd/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "openmhd/error.hpp"
#include "openmhd/field_io.hpp"
#include "openmhd/norms.hpp"

namespace openmhd {

namespace {

namespace fs = std::filesystem;

std::string step_tag(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06ld", step);
  return buf;
}

void write_dumps(const fs::path& dir, const Grid& g, const Trajectory& traj, double dt, int cadence) {
  const fs::path fields = dir / "fields";
  fs::create_directories(fields);
  const std::size_t last = traj.size() - 1;
  for (std::size_t n = 0; n < traj.size(); ++n) {
    const bool due = n == last || (cadence > 0 && n % static_cast<std::size_t>(cadence) == 0);
    if (!due) continue;
    const State& s = traj[n];
    const std::string tag = step_tag(std::lround(s.time / dt));
    write_field_file((fields / ("rho_" + tag + ".txt")).string(), g, "rho", s.time, s.rho);
    write_field_file((fields / ("u_" + tag + ".txt")).string(), g, "u", s.time, s.u);
    write_field_file((fields / ("theta_" + tag + ".txt")).string(), g, "theta", s.time, s.theta);
    write_field_file((fields / ("b_" + tag + ".txt")).string(), g, "b", s.time, s.b);
  }
}

template <class Field, class Profile>
ReferenceError field_error(const std::string& name, const Grid& g, const Trajectory& traj, const Profile& p,
                           Field State::*member) {
  ReferenceError e;
  e.field = name;
  for (const State& s : traj) {
    const Field exact = sample(g, p, s.time);
    const double err = spatial_norm(g, s.*member - exact, 2.0, 0);
    e.l2_max = std::max(e.l2_max, err);
    e.l2_final = err;
  }
  return e;
}

}  // namespace

std::string resolve_output_dir(const ScenarioConfig& c, const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("OPENMHD_OUT"); env != nullptr && *env != '\0') return env;
  return c.output.dir;
}

std::vector<ReferenceError> reference_errors(const ScenarioConfig& c, const Trajectory& traj) {
  std::vector<ReferenceError> out;
  if (traj.empty()) return out;
  const Grid g = make_grid(c.grid);
  const auto& r = c.reference;
  if (r.rho) out.push_back(field_error("rho", g, traj, *r.rho, &State::rho));
  if (r.u) out.push_back(field_error("u", g, traj, *r.u, &State::u));
  if (r.theta) out.push_back(field_error("theta", g, traj, *r.theta, &State::theta));
  if (r.b) out.push_back(field_error("b", g, traj, *r.b, &State::b));
  return out;
}

RunResult run_scenario(const ScenarioConfig& c, const RunSettings& settings) {
  validate_config(c);
  RunResult res;
  try {
    res.trajectory = run_fixed_point(c, res.fixed_point, settings.fixed_point);
    res.converged = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoConvergence) throw;
    res.converged = false;
  }

  nlohmann::json j;
  j["scenario"] = c.name;
  j["config"] = config_to_json(c);
  j["fixed_point"] = res.fixed_point;
  if (res.converged) {
    res.diagnostics = run_diagnostics(c, res.trajectory);
    j["diagnostics"] = *res.diagnostics;
    res.errors = reference_errors(c, res.trajectory);
    nlohmann::json errs = nlohmann::json::object();
    for (const auto& e : res.errors) errs[e.field] = {{"l2_final", e.l2_final}, {"l2_max", e.l2_max}};
    j["errors"] = errs;
  }
  if (!res.converged) res.exit_code = 2;
  else if (!res.diagnostics->all_pass()) res.exit_code = 3;
  else res.exit_code = 0;
  j["converged"] = res.converged;
  j["exit_code"] = res.exit_code;
  res.report = j;

  const std::string dir = resolve_output_dir(c, settings.out_dir);
  if (!dir.empty()) {
    fs::create_directories(dir);
    std::ofstream os(fs::path(dir) / "report.json");
    if (!os) throw Error(ErrorCode::InvalidArgument, "cannot write report to '" + dir + "'");
    os << j.dump(2) << '\n';
    if (!res.trajectory.empty()) write_dumps(dir, make_grid(c.grid), res.trajectory, c.time.dt, c.output.cadence);
    res.written_to = dir;
  }
  return res;
}

ConvergenceStudy convergence_study(const ScenarioConfig& c, int levels) {
  if (levels < 2) throw Error(ErrorCode::InvalidArgument, "a convergence study needs at least 2 levels");
  ConvergenceStudy study;
  for (int k = 0; k < levels; ++k) {
    ScenarioConfig ck = c;
    const int f = 1 << k;
    ck.grid.nx = c.grid.nx * f;
    ck.grid.ny = c.grid.ny * f;
    ck.time.dt = c.time.dt / f;
    ck.output = {};
    FixedPointReport fp;
    validate_config(ck);
    const Trajectory traj = run_fixed_point(ck, fp);
    ConvergenceLevel lv;
    lv.nx = ck.grid.nx;
    lv.ny = ck.grid.ny;
    lv.h = std::max((ck.grid.x1 - ck.grid.x0) / ck.grid.nx, (ck.grid.y1 - ck.grid.y0) / ck.grid.ny);
    lv.dt = ck.time.dt;
    lv.errors = reference_errors(ck, traj);
    if (k > 0) {
      std::vector<double> ord;
      const auto& prev = study.levels.back().errors;
      for (std::size_t i = 0; i < lv.errors.size(); ++i) {
        const double a = prev[i].l2_final;
        const double b = lv.errors[i].l2_final;
        ord.push_back(a > 0.0 && b > 0.0 ? std::log2(a / b) : 0.0);
      }
      study.orders.push_back(ord);
    }
    study.levels.push_back(std::move(lv));
  }
  return study;
}

nlohmann::json to_json(const ConvergenceStudy& s) {
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t k = 0; k < s.levels.size(); ++k) {
    const auto& lv = s.levels[k];
    nlohmann::json row{{"nx", lv.nx}, {"ny", lv.ny}, {"h", lv.h}, {"dt", lv.dt}};
    nlohmann::json errs = nlohmann::json::object();
    for (std::size_t i = 0; i < lv.errors.size(); ++i) {
      nlohmann::json e{{"l2_final", lv.errors[i].l2_final}, {"l2_max", lv.errors[i].l2_max}};
      if (k > 0) e["order"] = s.orders[k - 1][i];
      errs[lv.errors[i].field] = e;
    }
    row["errors"] = errs;
    levels.push_back(row);
  }
  return {{"levels", levels}};
}

}  // namespace openmhd
