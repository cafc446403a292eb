#include "openmhd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "openmhd/error.hpp"
#include "openmhd/fixed_point.hpp"
#include "openmhd/operators.hpp"

namespace openmhd {

namespace {

void require_nonempty(const Trajectory& traj) {
  if (traj.empty()) throw Error(ErrorCode::EmptyTrajectory, "diagnostics need at least one state");
}

double step_dt(const Trajectory& traj) { return traj.size() > 1 ? traj[1].time - traj[0].time : 0.0; }

// Midpoint-rule integral of f (signed).
double integral(const Grid& g, const ScalarField& f) {
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      s += 0.25 * (f(i, j) + f(i + 1, j) + f(i, j + 1) + f(i + 1, j + 1));
    }
  }
  return s * g.hx() * g.hy();
}

// Trapezoid rule for the outward flux of rho u.n; inflow faces read rho_B.
double boundary_flux(const Grid& g, const ScalarField& rho, const VectorField& u, const ScalarField* rho_b) {
  double flux = 0.0;
  for (Side side : kAllSides) {
    const Vec3 n = outward_normal(side);
    const double len = g.face_length(side);
    for (int k = 0; k < g.face_count(side); ++k) {
      const bool inflow = g.tag(side, k) == FaceTag::Inflow && rho_b != nullptr;
      double face = 0.0;
      for (int e = 0; e < 2; ++e) {
        const auto [i, j] = boundary_node(g, side, k + e);
        const std::size_t id = g.index(i, j);
        const double r = inflow ? (*rho_b)[id] : rho[id];
        face += 0.5 * r * dot(u.at(id), n);
      }
      flux += len * face;
    }
  }
  return flux;
}

double boundary_min(const Grid& g, const ScalarField& f) {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.nodes_y(); ++j) {
    for (int i = 0; i < g.nodes_x(); ++i) {
      if (g.on_boundary(i, j)) m = std::min(m, f(i, j));
    }
  }
  return m;
}

CheckEntry make_entry(std::string name, double lhs, double rhs, double tol, bool pass) {
  CheckEntry e;
  e.name = std::move(name);
  e.lhs = lhs;
  e.rhs = rhs;
  e.tolerance = tol;
  e.pass = pass;
  return e;
}

CheckEntry from_estimate(std::string name, const EstimateCheck& c) {
  CheckEntry e = make_entry(std::move(name), c.lhs, c.rhs, c.tol, c.pass);
  if (!c.calibrated) e.note = "uncalibrated constant";
  return e;
}

}  // namespace

bool DiagnosticsReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckEntry& e) { return e.advisory || e.pass; });
}

const CheckEntry* DiagnosticsReport::find(const std::string& name) const {
  for (const auto& e : checks) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

CheckEntry check_density_minmax(const std::vector<ScalarField>& rho, const DensityBounds& bounds, double tol_h) {
  if (rho.empty()) throw Error(ErrorCode::EmptyTrajectory, "density trajectory is empty");
  if (bounds.lower.size() != rho.size() || bounds.upper.size() != rho.size()) {
    throw Error(ErrorCode::MismatchedSampling, "bounds and density trajectory differ in length");
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < rho.size(); ++n) {
    const double lo = bounds.lower[n];
    const double hi = bounds.upper[n];
    const double below = (lo - rho[n].min()) / std::max(std::abs(lo), std::numeric_limits<double>::min());
    const double above = (rho[n].max() - hi) / std::max(std::abs(hi), std::numeric_limits<double>::min());
    worst = std::max({worst, below, above});
  }
  return make_entry("density_minmax", worst, tol_h, tol_h, worst <= tol_h);
}

CheckEntry check_temperature_minimum(const Grid& g, const Trajectory& traj, const std::vector<ScalarField>& theta_boundary,
                                     const std::vector<double>& div_u_sup, double cv, double tol_h,
                                     const std::vector<ScalarField>* forcing, std::vector<double>* bound) {
  require_nonempty(traj);
  const std::size_t levels = traj.size();
  if (theta_boundary.size() != levels || div_u_sup.size() != levels) {
    throw Error(ErrorCode::MismatchedSampling, "temperature check inputs differ in length");
  }
  if (forcing != nullptr && !forcing->empty() && forcing->size() != levels) {
    throw Error(ErrorCode::MismatchedSampling, "temperature forcing differs in length");
  }
  if (!(cv > 0.0)) throw Error(ErrorCode::InvalidArgument, "cv must be positive");
  const double dt = step_dt(traj);

  std::vector<double> integral_div(levels, 0.0);
  for (std::size_t n = 1; n < levels; ++n) {
    integral_div[n] = integral_div[n - 1] + dt * std::max(div_u_sup[n - 1], div_u_sup[n]);
  }
  std::vector<double> boundary_mins(levels);
  for (std::size_t k = 0; k < levels; ++k) boundary_mins[k] = boundary_min(g, theta_boundary[k]);

  const double theta0_min = traj[0].theta.min();
  double sink = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  if (bound != nullptr) bound->assign(levels, 0.0);
  for (std::size_t n = 0; n < levels; ++n) {
    if (n > 0 && forcing != nullptr && !forcing->empty()) {
      sink += dt * std::max(0.0, -(*forcing)[n].min());
    }
    double b = theta0_min * std::exp(-integral_div[n] / cv);
    for (std::size_t k = 0; k <= n; ++k) {
      b = std::min(b, boundary_mins[k] * std::exp(-(integral_div[n] - integral_div[k]) / cv));
    }
    b -= sink;
    if (bound != nullptr) (*bound)[n] = b;
    worst = std::max(worst, b - traj[n].theta.min());
  }
  return make_entry("temperature_minimum", worst, tol_h, tol_h, worst <= tol_h);
}

CheckEntry check_divergence_b(const Grid& g, const Trajectory& traj, double tol, std::vector<double>* series) {
  require_nonempty(traj);
  if (series != nullptr) series->clear();
  double initial = 0.0;
  double peak = 0.0;
  for (std::size_t n = 0; n < traj.size(); ++n) {
    const double d = divergence(g, traj[n].b).max_abs();
    if (n == 0) initial = d;
    peak = std::max(peak, d);
    if (series != nullptr) series->push_back(d);
  }
  return make_entry("divergence_b", peak, initial + tol, tol, peak <= initial + tol);
}

CheckEntry check_mass_balance(const Grid& g, const Trajectory& traj, const std::vector<ScalarField>& rho_boundary,
                              const std::vector<ScalarField>* forcing, double tol, std::vector<double>* series) {
  require_nonempty(traj);
  if (!rho_boundary.empty() && rho_boundary.size() != traj.size()) {
    throw Error(ErrorCode::MismatchedSampling, "boundary density differs in length");
  }
  const bool forced = forcing != nullptr && !forcing->empty();
  if (forced && forcing->size() != traj.size()) {
    throw Error(ErrorCode::MismatchedSampling, "density forcing differs in length");
  }
  if (series != nullptr) series->assign(1, 0.0);
  const double dt = step_dt(traj);
  double worst = 0.0;
  double mass_prev = integral(g, traj[0].rho);
  for (std::size_t n = 1; n < traj.size(); ++n) {
    const double mass = integral(g, traj[n].rho);
    const ScalarField* rb = rho_boundary.empty() ? nullptr : &rho_boundary[n];
    double r = (mass - mass_prev) / dt + boundary_flux(g, traj[n].rho, traj[n].u, rb);
    if (forced) r -= integral(g, (*forcing)[n]);
    worst = std::max(worst, std::abs(r));
    if (series != nullptr) series->push_back(r);
    mass_prev = mass;
  }
  return make_entry("mass_balance", worst, tol, tol, worst <= tol);
}

CheckEntry positivity_scan(const Trajectory& traj) {
  require_nonempty(traj);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : traj) m = std::min({m, s.rho.min(), s.theta.min()});
  return make_entry("positivity", m, 0.0, 0.0, m > 0.0);
}

double default_tolerance(const ScenarioConfig& c) {
  const double h = std::max((c.grid.x1 - c.grid.x0) / c.grid.nx, (c.grid.y1 - c.grid.y0) / c.grid.ny);
  return 5.0 * (h + c.time.dt) * c.diagnostics_scale;
}

DiagnosticsReport run_diagnostics(const ScenarioConfig& c, const Trajectory& traj) {
  require_nonempty(traj);
  DiagnosticsReport report;
  const Grid g = tagged_grid(c, traj.front().time);
  const long first = std::lround(traj.front().time / c.time.dt);
  const int steps = static_cast<int>(traj.size()) - 1;
  const WindowData w = sample_window(c, g, first, steps);
  const double tol_h = default_tolerance(c);

  auto& s = report.series;
  for (const auto& st : traj) {
    s.time.push_back(st.time);
    s.rho_min.push_back(st.rho.min());
    s.rho_max.push_back(st.rho.max());
    s.theta_min.push_back(st.theta.min());
  }

  report.checks.push_back(positivity_scan(traj));

  std::vector<double> times;
  std::vector<VectorField> velocity;
  std::vector<ScalarField> rho;
  for (const auto& st : traj) {
    times.push_back(st.time);
    velocity.push_back(st.u);
    rho.push_back(st.rho);
  }
  DensityProblem problem{g, VelocityHistory(g, times, velocity), traj.front().rho, w.rho_boundary, w.f_rho};
  const std::vector<double> div_sup = divergence_sup(problem.velocity);

  if (steps > 0) {
    const DensityBounds bounds = density_minmax_bounds(problem, div_sup);
    s.rho_lower = bounds.lower;
    s.rho_upper = bounds.upper;
    report.checks.push_back(check_density_minmax(rho, bounds, tol_h));
  }
  report.checks.push_back(check_temperature_minimum(g, traj, w.theta_boundary, div_sup, c.material.cv, tol_h,
                                                    &w.f_theta, &s.theta_bound));
  report.checks.push_back(check_divergence_b(g, traj, 10.0 * g.min_spacing(), &s.div_b_max));
  if (steps > 0) {
    report.checks.push_back(check_mass_balance(g, traj, w.rho_boundary, &w.f_rho, tol_h, &s.mass_residual));

    const DensityEstimateReport lp = check_lp_estimate(rho, problem, c.p, tol_h);
    report.checks.push_back(from_estimate("lp_estimate", lp.lp));
    report.checks.push_back(from_estimate("linf_estimate", lp.linf));
    try {
      const DensityEstimateReport gr = check_gradient_estimate(rho, problem, c.p, c.q, tol_h, c.inflow_threshold);
      CheckEntry e = from_estimate("gradient_estimate", gr.gradient);
      if (!gr.cond_p_q) e.note += e.note.empty() ? "1 - 2/p + 1/q < 0" : "; 1 - 2/p + 1/q < 0";
      report.checks.push_back(e);
      CheckEntry bn = make_entry("boundary_normal_identity", gr.boundary_normal_mismatch, tol_h, tol_h,
                                 gr.boundary_normal_mismatch <= tol_h);
      bn.advisory = true;
      report.checks.push_back(bn);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::InflowSpeedBelowThreshold) throw;
      CheckEntry e = make_entry("gradient_estimate", 0.0, 0.0, tol_h, false);
      e.note = err.what();
      report.checks.push_back(e);
    }
  }
  return report;
}

void to_json(nlohmann::json& j, const CheckEntry& e) {
  j = nlohmann::json{{"name", e.name},          {"lhs", e.lhs},   {"rhs", e.rhs}, {"tolerance", e.tolerance},
                     {"pass", e.pass},          {"advisory", e.advisory}};
  if (!e.note.empty()) j["note"] = e.note;
}

void to_json(nlohmann::json& j, const DiagnosticsReport& r) {
  const auto& s = r.series;
  j = nlohmann::json{{"checks", r.checks},
                     {"all_pass", r.all_pass()},
                     {"series",
                      {{"time", s.time},
                       {"rho_min", s.rho_min},
                       {"rho_max", s.rho_max},
                       {"rho_lower", s.rho_lower},
                       {"rho_upper", s.rho_upper},
                       {"theta_min", s.theta_min},
                       {"theta_bound", s.theta_bound},
                       {"div_b_max", s.div_b_max},
                       {"mass_residual", s.mass_residual}}}};
}

}  // namespace openmhd
