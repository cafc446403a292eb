#include "openmhd/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "openmhd/error.hpp"

namespace openmhd {

using nlohmann::json;

namespace {

constexpr double kCompatibilityTol = 1e-8;

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (!allowed.contains(k)) throw Error(ErrorCode::ParseError, "unknown key '" + k + "' in " + where);
  }
}

const json& object_at(const json& j, const char* key, const std::string& where) {
  const json& o = j.at(key);
  if (!o.is_object()) throw Error(ErrorCode::ParseError, where + "." + key + " must be an object");
  return o;
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, where + "." + key + ": " + e.what());
  }
}

void read_opt(const json& j, const char* key, std::optional<double>& out, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  double v = 0.0;
  read(j, key, v, where);
  out = v;
}

template <class P>
void read_profile(const json& j, const char* key, P& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<P>();
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, where + "." + key + ": " + e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, where + "." + key + ": " + e.what());
  }
}

template <class P>
void read_opt_profile(const json& j, const char* key, std::optional<P>& out, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  P p;
  read_profile(j, key, p, where);
  out = p;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string node_name(const Grid& g, int i, int j) {
  return "(" + fmt(g.x(i)) + ", " + fmt(g.y(j)) + ")";
}

bool close(double a, double b) { return std::abs(a - b) <= kCompatibilityTol * (1.0 + std::abs(a) + std::abs(b)); }

std::vector<Side> sides_of(const Grid& g, int i, int j) {
  std::vector<Side> out;
  if (i == 0) out.push_back(Side::Left);
  if (i == g.nx()) out.push_back(Side::Right);
  if (j == 0) out.push_back(Side::Bottom);
  if (j == g.ny()) out.push_back(Side::Top);
  return out;
}

}  // namespace

bool exponent_condition_holds(double p, double q, int d) {
  if (!(q > d)) return false;
  const double a = 2.0 * q / (q - 1.0);
  const double b = 2.0 * q / (2.0 * q - d);
  return std::max(a, b) < p;
}

Grid make_grid(const GridSpec& s) { return Grid(s.nx, s.ny, s.x0, s.x1, s.y0, s.y1); }

Grid tagged_grid(const ScenarioConfig& c, double t) {
  const VectorProfile& ub = c.data.u_boundary;
  return classify_boundary(make_grid(c.grid), [&](double x, double y) { return ub(t, x, y); }, c.inflow_threshold);
}

void validate_config(const ScenarioConfig& c) {
  std::vector<std::string> general;
  std::vector<std::string> compat;
  std::vector<std::string> exponent;

  if (c.grid.nx < 4 || c.grid.ny < 4) general.emplace_back("grid needs nx, ny >= 4");
  if (!(c.grid.x1 > c.grid.x0) || !(c.grid.y1 > c.grid.y0)) general.emplace_back("grid extent must be a nonempty rectangle");
  try {
    c.material.validate();
  } catch (const ConfigError& e) {
    for (const auto& s : e.issues()) general.push_back("material: " + s);
  }
  if (!(c.time.dt > 0.0)) general.emplace_back("time.dt must be > 0");
  if (!(c.time.horizon > 0.0)) general.emplace_back("time.horizon must be > 0");
  if (!(c.time.window >= c.time.dt)) general.emplace_back("time.window must be >= time.dt");
  if (!(c.fixed_point.tol > 0.0)) general.emplace_back("fixed_point.tol must be > 0");
  if (c.fixed_point.max_iter < 1) general.emplace_back("fixed_point.max_iter must be >= 1");
  if (c.fixed_point.max_shrinks < 0) general.emplace_back("fixed_point.max_shrinks must be >= 0");
  if (!(c.fixed_point.inner_tol > 0.0)) general.emplace_back("fixed_point.inner_tol must be > 0");
  for (const auto& r : {c.fixed_point.k_rho, c.fixed_point.k_u, c.fixed_point.k_theta, c.fixed_point.k_b, c.fixed_point.r0})
    if (r && !(*r > 0.0)) general.emplace_back("fixed_point radii and r0 must be > 0");
  if (!(c.inflow_threshold > 0.0)) general.emplace_back("inflow_threshold must be > 0");
  if (c.output.cadence < 0) general.emplace_back("output.cadence must be >= 0");
  if (!(c.diagnostics_scale > 0.0)) general.emplace_back("diagnostics.scale must be > 0");
  if (!(c.p > 1.0) || !(c.q > 1.0)) general.emplace_back("norms.p and norms.q must exceed 1");

  if (!c.override_exponent_check && !exponent_condition_holds(c.p, c.q, c.material.d_eff)) {
    const double d = c.material.d_eff;
    exponent.push_back("exponent condition fails for p=" + fmt(c.p) + ", q=" + fmt(c.q) + ", d=" + fmt(d) +
                       ": need q > d and max{2q/(q-1), 2q/(2q-d)} = max{" + fmt(2 * c.q / (c.q - 1)) + ", " +
                       fmt(2 * c.q / (2 * c.q - d)) + "} < p");
  }

  if (!general.empty()) throw ConfigError(ErrorCode::InvalidArgument, general);

  Grid g;
  try {
    g = tagged_grid(c, 0.0);
  } catch (const Error& e) {
    throw ConfigError(e.code(), {e.what()});
  }

  const DataSpec& d = c.data;
  for (int j = 0; j < g.nodes_y(); ++j) {
    for (int i = 0; i < g.nodes_x(); ++i) {
      const double x = g.x(i);
      const double y = g.y(j);
      if (!(d.rho0(0.0, x, y) > 0.0)) compat.push_back("rho0 must be positive at " + node_name(g, i, j));
      if (!(d.theta0(0.0, x, y) > 0.0)) compat.push_back("theta0 must be positive at " + node_name(g, i, j));
      const auto bj = d.b0.jet(0.0, x, y);
      const double div_b = bj[0].dx + bj[1].dy;
      if (std::abs(div_b) > kCompatibilityTol * (1.0 + std::abs(bj[0].dx) + std::abs(bj[1].dy)))
        compat.push_back("div B0 = 0 fails at " + node_name(g, i, j) + " (div B0 = " + fmt(div_b) + ")");
      if (!g.on_boundary(i, j)) continue;
      const Vec3 u0 = d.u0(0.0, x, y);
      const Vec3 ub = d.u_boundary(0.0, x, y);
      for (std::size_t a = 0; a < 3; ++a)
        if (!close(u0[a], ub[a])) {
          compat.push_back("u0 = u_B(0) fails at " + node_name(g, i, j));
          break;
        }
      if (!close(d.theta0(0.0, x, y), d.theta_boundary(0.0, x, y)))
        compat.push_back("theta0 = theta_B(0) fails at " + node_name(g, i, j));
      if (g.is_inflow_node(i, j) && !close(d.rho0(0.0, x, y), d.rho_boundary(0.0, x, y)))
        compat.push_back("rho0 = rho_B(0) fails on inflow node " + node_name(g, i, j));
      const Vec3 b0 = d.b0(0.0, x, y);
      const Vec3 bb = d.b_boundary(0.0, x, y);
      for (Side s : sides_of(g, i, j)) {
        const Vec3 n = outward_normal(s);
        const Vec3 lhs = cross(b0, n);
        const Vec3 rhs = cross(bb, n);
        if (!close(lhs[0], rhs[0]) || !close(lhs[1], rhs[1]) || !close(lhs[2], rhs[2])) {
          compat.push_back("B0 x n = b1(0) fails at " + node_name(g, i, j) + " on the " + to_string(s) + " side");
          break;
        }
      }
    }
  }

  // Positivity of boundary data over the horizon.
  const auto steps = static_cast<long>(std::ceil(c.time.horizon / c.time.dt - 1e-9));
  bool rho_b_bad = false;
  bool theta_b_bad = false;
  for (long n = 0; n <= steps; ++n) {
    const double t = std::min(c.time.horizon, static_cast<double>(n) * c.time.dt);
    for (int j = 0; j < g.nodes_y(); ++j)
      for (int i = 0; i < g.nodes_x(); ++i) {
        if (!g.on_boundary(i, j)) continue;
        if (!(d.theta_boundary(t, g.x(i), g.y(j)) > 0.0)) theta_b_bad = true;
        if (g.is_inflow_node(i, j) && !(d.rho_boundary(t, g.x(i), g.y(j)) > 0.0)) rho_b_bad = true;
      }
  }
  if (rho_b_bad) compat.emplace_back("rho_B must stay positive on inflow faces over the horizon");
  if (theta_b_bad) compat.emplace_back("theta_B must stay positive on the boundary over the horizon");

  std::vector<std::string> all = compat;
  all.insert(all.end(), exponent.begin(), exponent.end());
  if (!compat.empty()) throw ConfigError(ErrorCode::CompatibilityViolated, all);
  if (!exponent.empty()) throw ConfigError(ErrorCode::ExponentConditionViolated, all);
}

ScenarioConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");
  check_keys(j, "config",
             {"name", "description", "grid", "material", "time", "fixed_point", "norms", "inflow_threshold", "seed", "output",
              "diagnostics", "data", "manufactured", "reference", "kinematic_velocity", "drift", "override_exponent_check"});
  ScenarioConfig c;
  read(j, "name", c.name, "config");
  read(j, "inflow_threshold", c.inflow_threshold, "config");
  read(j, "seed", c.seed, "config");
  read(j, "kinematic_velocity", c.kinematic_velocity, "config");
  read(j, "override_exponent_check", c.override_exponent_check, "config");
  if (j.contains("drift")) {
    std::string s;
    read(j, "drift", s, "config");
    if (s == "upwind") c.drift = DriftScheme::Upwind;
    else if (s == "central") c.drift = DriftScheme::Central;
    else throw Error(ErrorCode::ParseError, "drift must be 'upwind' or 'central'");
  }

  if (j.contains("grid")) {
    const json& g = object_at(j, "grid", "config");
    check_keys(g, "grid", {"nx", "ny", "extent"});
    read(g, "nx", c.grid.nx, "grid");
    read(g, "ny", c.grid.ny, "grid");
    if (g.contains("extent")) {
      std::vector<double> e;
      read(g, "extent", e, "grid");
      if (e.size() != 4) throw Error(ErrorCode::ParseError, "grid.extent must be [x0, x1, y0, y1]");
      c.grid.x0 = e[0];
      c.grid.x1 = e[1];
      c.grid.y0 = e[2];
      c.grid.y1 = e[3];
    }
  }
  if (j.contains("material")) {
    const json& m = object_at(j, "material", "config");
    check_keys(m, "material", {"mu", "lambda", "kappa", "cv", "xi", "d_eff"});
    read(m, "mu", c.material.mu, "material");
    read(m, "lambda", c.material.lambda, "material");
    read(m, "kappa", c.material.kappa, "material");
    read(m, "cv", c.material.cv, "material");
    read(m, "xi", c.material.xi, "material");
    read(m, "d_eff", c.material.d_eff, "material");
  }
  if (j.contains("time")) {
    const json& t = object_at(j, "time", "config");
    check_keys(t, "time", {"horizon", "dt", "window"});
    read(t, "horizon", c.time.horizon, "time");
    read(t, "dt", c.time.dt, "time");
    read(t, "window", c.time.window, "time");
  }
  if (j.contains("fixed_point")) {
    const json& f = object_at(j, "fixed_point", "config");
    check_keys(f, "fixed_point", {"tol", "max_iter", "max_shrinks", "ordering", "radii", "r0", "inner_tol"});
    read(f, "tol", c.fixed_point.tol, "fixed_point");
    read(f, "max_iter", c.fixed_point.max_iter, "fixed_point");
    read(f, "max_shrinks", c.fixed_point.max_shrinks, "fixed_point");
    read(f, "inner_tol", c.fixed_point.inner_tol, "fixed_point");
    read_opt(f, "r0", c.fixed_point.r0, "fixed_point");
    if (f.contains("ordering")) {
      std::string s;
      read(f, "ordering", s, "fixed_point");
      if (s == "jacobi") c.fixed_point.ordering = SweepOrdering::Jacobi;
      else if (s == "gauss-seidel") c.fixed_point.ordering = SweepOrdering::GaussSeidel;
      else throw Error(ErrorCode::ParseError, "fixed_point.ordering must be 'jacobi' or 'gauss-seidel'");
    }
    if (f.contains("radii")) {
      const json& r = object_at(f, "radii", "fixed_point");
      check_keys(r, "fixed_point.radii", {"rho", "u", "theta", "b"});
      read_opt(r, "rho", c.fixed_point.k_rho, "radii");
      read_opt(r, "u", c.fixed_point.k_u, "radii");
      read_opt(r, "theta", c.fixed_point.k_theta, "radii");
      read_opt(r, "b", c.fixed_point.k_b, "radii");
    }
  }
  if (j.contains("norms")) {
    const json& n = object_at(j, "norms", "config");
    check_keys(n, "norms", {"p", "q"});
    read(n, "p", c.p, "norms");
    read(n, "q", c.q, "norms");
  }
  if (j.contains("output")) {
    const json& o = object_at(j, "output", "config");
    check_keys(o, "output", {"cadence", "dir"});
    read(o, "cadence", c.output.cadence, "output");
    read(o, "dir", c.output.dir, "output");
  }
  if (j.contains("diagnostics")) {
    const json& d = object_at(j, "diagnostics", "config");
    check_keys(d, "diagnostics", {"scale"});
    read(d, "scale", c.diagnostics_scale, "diagnostics");
  }
  if (j.contains("manufactured")) {
    const json& m = object_at(j, "manufactured", "config");
    check_keys(m, "manufactured", {"rho", "u", "theta", "b"});
    ManufacturedSolution ms;
    ms.rho = ScalarProfile::constant(1.0);
    ms.theta = ScalarProfile::constant(1.0);
    read_profile(m, "rho", ms.rho, "manufactured");
    read_profile(m, "u", ms.u, "manufactured");
    read_profile(m, "theta", ms.theta, "manufactured");
    read_profile(m, "b", ms.b, "manufactured");
    c.manufactured = ms;
    c.data.rho0 = c.data.rho_boundary = ms.rho;
    c.data.u0 = c.data.u_boundary = ms.u;
    c.data.theta0 = c.data.theta_boundary = ms.theta;
    c.data.b0 = c.data.b_boundary = ms.b;
  }
  if (j.contains("data")) {
    const json& d = object_at(j, "data", "config");
    check_keys(d, "data",
               {"rho0", "u0", "theta0", "b0", "rho_boundary", "u_boundary", "theta_boundary", "b_boundary", "gravity"});
    read_profile(d, "rho0", c.data.rho0, "data");
    read_profile(d, "u0", c.data.u0, "data");
    read_profile(d, "theta0", c.data.theta0, "data");
    read_profile(d, "b0", c.data.b0, "data");
    read_profile(d, "rho_boundary", c.data.rho_boundary, "data");
    read_profile(d, "u_boundary", c.data.u_boundary, "data");
    read_profile(d, "theta_boundary", c.data.theta_boundary, "data");
    read_profile(d, "b_boundary", c.data.b_boundary, "data");
    read_profile(d, "gravity", c.data.gravity, "data");
  }
  if (j.contains("reference")) {
    const json& r = object_at(j, "reference", "config");
    check_keys(r, "reference", {"rho", "u", "theta", "b"});
    read_opt_profile(r, "rho", c.reference.rho, "reference");
    read_opt_profile(r, "u", c.reference.u, "reference");
    read_opt_profile(r, "theta", c.reference.theta, "reference");
    read_opt_profile(r, "b", c.reference.b, "reference");
  }
  return c;
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["grid"] = {{"nx", c.grid.nx}, {"ny", c.grid.ny}, {"extent", {c.grid.x0, c.grid.x1, c.grid.y0, c.grid.y1}}};
  j["material"] = {{"mu", c.material.mu},       {"lambda", c.material.lambda}, {"kappa", c.material.kappa},
                   {"cv", c.material.cv},       {"xi", c.material.xi},         {"d_eff", c.material.d_eff}};
  j["time"] = {{"horizon", c.time.horizon}, {"dt", c.time.dt}, {"window", c.time.window}};
  json fp = {{"tol", c.fixed_point.tol},
             {"max_iter", c.fixed_point.max_iter},
             {"max_shrinks", c.fixed_point.max_shrinks},
             {"ordering", c.fixed_point.ordering == SweepOrdering::Jacobi ? "jacobi" : "gauss-seidel"},
             {"inner_tol", c.fixed_point.inner_tol}};
  json radii = json::object();
  if (c.fixed_point.k_rho) radii["rho"] = *c.fixed_point.k_rho;
  if (c.fixed_point.k_u) radii["u"] = *c.fixed_point.k_u;
  if (c.fixed_point.k_theta) radii["theta"] = *c.fixed_point.k_theta;
  if (c.fixed_point.k_b) radii["b"] = *c.fixed_point.k_b;
  fp["radii"] = radii;
  if (c.fixed_point.r0) fp["r0"] = *c.fixed_point.r0;
  j["fixed_point"] = fp;
  j["norms"] = {{"p", c.p}, {"q", c.q}};
  j["inflow_threshold"] = c.inflow_threshold;
  j["seed"] = c.seed;
  j["output"] = {{"cadence", c.output.cadence}, {"dir", c.output.dir}};
  j["diagnostics"] = {{"scale", c.diagnostics_scale}};
  if (c.manufactured) {
    j["manufactured"] = {{"rho", c.manufactured->rho}, {"u", c.manufactured->u}, {"theta", c.manufactured->theta},
                         {"b", c.manufactured->b}};
  }
  j["data"] = {{"rho0", c.data.rho0},
               {"u0", c.data.u0},
               {"theta0", c.data.theta0},
               {"b0", c.data.b0},
               {"rho_boundary", c.data.rho_boundary},
               {"u_boundary", c.data.u_boundary},
               {"theta_boundary", c.data.theta_boundary},
               {"b_boundary", c.data.b_boundary},
               {"gravity", c.data.gravity}};
  json ref = json::object();
  if (c.reference.rho) ref["rho"] = *c.reference.rho;
  if (c.reference.u) ref["u"] = *c.reference.u;
  if (c.reference.theta) ref["theta"] = *c.reference.theta;
  if (c.reference.b) ref["b"] = *c.reference.b;
  j["reference"] = ref;
  j["kinematic_velocity"] = c.kinematic_velocity;
  j["drift"] = c.drift == DriftScheme::Upwind ? "upwind" : "central";
  j["override_exponent_check"] = c.override_exponent_check;
  return j;
}

ScenarioConfig load_config(const std::string& path, bool override_exponent_check) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  ScenarioConfig c = config_from_json(j);
  if (override_exponent_check) c.override_exponent_check = true;
  validate_config(c);
  return c;
}

void write_config(const ScenarioConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write config file '" + path + "'");
  out << config_to_json(c).dump(2) << '\n';
}

}  // namespace openmhd
