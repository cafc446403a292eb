#include "openmhd/profiles.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "openmhd/error.hpp"

namespace openmhd {

Jet& Jet::operator+=(const Jet& o) {
  v += o.v;
  dt += o.dt;
  dx += o.dx;
  dy += o.dy;
  dxx += o.dxx;
  dxy += o.dxy;
  dyy += o.dyy;
  return *this;
}

namespace {

constexpr double kPi = std::numbers::pi;

struct JetVisitor {
  double t, x, y;

  Jet operator()(const profile::Constant& p) const { return Jet{p.value}; }

  Jet operator()(const profile::Affine& p) const {
    Jet j;
    j.v = p.c0 + p.cx * x + p.cy * y + p.ct * t;
    j.dt = p.ct;
    j.dx = p.cx;
    j.dy = p.cy;
    return j;
  }

  Jet operator()(const profile::Quadratic& p) const {
    Jet j;
    j.v = p.c0 + p.cx * x + p.cy * y + p.cxx * x * x + p.cxy * x * y + p.cyy * y * y;
    j.dx = p.cx + 2.0 * p.cxx * x + p.cxy * y;
    j.dy = p.cy + p.cxy * x + 2.0 * p.cyy * y;
    j.dxx = 2.0 * p.cxx;
    j.dxy = p.cxy;
    j.dyy = 2.0 * p.cyy;
    return j;
  }

  Jet operator()(const profile::Mode& p) const {
    const double ax = kPi * p.kx;
    const double ay = kPi * p.ky;
    const double sx = std::sin(ax * x + p.phase_x);
    const double cx = std::cos(ax * x + p.phase_x);
    const double sy = std::sin(ay * y + p.phase_y);
    const double cy = std::cos(ay * y + p.phase_y);
    const double e = std::exp(-p.decay * t);
    const double ct = std::cos(p.omega * t + p.time_phase);
    const double st = std::sin(p.omega * t + p.time_phase);
    const double time = e * ct;
    const double dtime = -p.decay * e * ct - p.omega * e * st;
    const double a = p.amplitude;
    Jet j;
    j.v = p.offset + a * sx * sy * time;
    j.dt = a * sx * sy * dtime;
    j.dx = a * ax * cx * sy * time;
    j.dy = a * ay * sx * cy * time;
    j.dxx = -a * ax * ax * sx * sy * time;
    j.dxy = a * ax * ay * cx * cy * time;
    j.dyy = -a * ay * ay * sx * sy * time;
    return j;
  }

  Jet operator()(const profile::Front& p) const {
    const double arg = t - (x - p.origin) / p.speed;
    Jet j;
    j.v = p.base;
    if (arg > 0.0) {
      j.v += p.slope * arg;
      j.dt = p.slope;
      j.dx = -p.slope / p.speed;
    }
    return j;
  }

  Jet operator()(const ScalarProfile::Sum& p) const {
    Jet j;
    for (const auto& term : p.terms) j += term.jet(t, x, y);
    return j;
  }
};

double get_or(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw Error(ErrorCode::ParseError, std::string("profile parameter '") + key + "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace

Jet ScalarProfile::jet(double t, double x, double y) const { return std::visit(JetVisitor{t, x, y}, v_); }

ScalarField sample(const Grid& g, const ScalarProfile& p, double t) {
  ScalarField out(g);
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i) out(i, j) = p(t, g.x(i), g.y(j));
  return out;
}

VectorField sample(const Grid& g, const VectorProfile& p, double t) {
  VectorField out;
  for (std::size_t d = 0; d < 3; ++d) out.c[d] = sample(g, p.c[d], t);
  return out;
}

void to_json(nlohmann::json& j, const ScalarProfile& p) {
  std::visit(
      [&j](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, profile::Constant>) {
          j = {{"family", "constant"}, {"value", v.value}};
        } else if constexpr (std::is_same_v<T, profile::Affine>) {
          j = {{"family", "affine"}, {"c0", v.c0}, {"cx", v.cx}, {"cy", v.cy}, {"ct", v.ct}};
        } else if constexpr (std::is_same_v<T, profile::Quadratic>) {
          j = {{"family", "quadratic"}, {"c0", v.c0}, {"cx", v.cx}, {"cy", v.cy}, {"cxx", v.cxx}, {"cxy", v.cxy}, {"cyy", v.cyy}};
        } else if constexpr (std::is_same_v<T, profile::Mode>) {
          j = {{"family", "mode"},       {"offset", v.offset},   {"amplitude", v.amplitude}, {"kx", v.kx},
               {"ky", v.ky},             {"phase_x", v.phase_x}, {"phase_y", v.phase_y},     {"decay", v.decay},
               {"omega", v.omega},       {"time_phase", v.time_phase}};
        } else if constexpr (std::is_same_v<T, profile::Front>) {
          j = {{"family", "front"}, {"base", v.base}, {"slope", v.slope}, {"speed", v.speed}, {"origin", v.origin}};
        } else {
          nlohmann::json terms = nlohmann::json::array();
          for (const auto& term : v.terms) terms.push_back(term);
          j = {{"family", "sum"}, {"terms", terms}};
        }
      },
      p.variant());
}

void from_json(const nlohmann::json& j, ScalarProfile& p) {
  if (j.is_number()) {
    p = ScalarProfile::constant(j.get<double>());
    return;
  }
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw Error(ErrorCode::ParseError, "scalar profile must be a number or an object with a 'family' string");
  const auto family = j.at("family").get<std::string>();
  if (family == "constant") {
    p = profile::Constant{get_or(j, "value", 0.0)};
  } else if (family == "affine") {
    p = profile::Affine{get_or(j, "c0", 0.0), get_or(j, "cx", 0.0), get_or(j, "cy", 0.0), get_or(j, "ct", 0.0)};
  } else if (family == "quadratic") {
    p = profile::Quadratic{get_or(j, "c0", 0.0),  get_or(j, "cx", 0.0),  get_or(j, "cy", 0.0),
                           get_or(j, "cxx", 0.0), get_or(j, "cxy", 0.0), get_or(j, "cyy", 0.0)};
  } else if (family == "mode") {
    profile::Mode m;
    m.offset = get_or(j, "offset", 0.0);
    m.amplitude = get_or(j, "amplitude", 1.0);
    m.kx = get_or(j, "kx", 0.0);
    m.ky = get_or(j, "ky", 0.0);
    m.phase_x = get_or(j, "phase_x", 0.0);
    m.phase_y = get_or(j, "phase_y", 0.0);
    m.decay = get_or(j, "decay", 0.0);
    m.omega = get_or(j, "omega", 0.0);
    m.time_phase = get_or(j, "time_phase", 0.0);
    p = m;
  } else if (family == "front") {
    profile::Front f{get_or(j, "base", 1.0), get_or(j, "slope", 1.0), get_or(j, "speed", 1.0), get_or(j, "origin", 0.0)};
    if (!(f.speed > 0.0)) throw Error(ErrorCode::ParseError, "front profile needs speed > 0");
    p = f;
  } else if (family == "sum") {
    if (!j.contains("terms") || !j.at("terms").is_array()) throw Error(ErrorCode::ParseError, "sum profile needs a 'terms' array");
    ScalarProfile::Sum s;
    for (const auto& t : j.at("terms")) s.terms.push_back(t.get<ScalarProfile>());
    p = s;
  } else {
    throw Error(ErrorCode::ParseError, "unknown profile family '" + family + "'");
  }
}

void to_json(nlohmann::json& j, const VectorProfile& p) { j = nlohmann::json::array({p.c[0], p.c[1], p.c[2]}); }

void from_json(const nlohmann::json& j, VectorProfile& p) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::ParseError, "vector profile must be an array of three scalar profiles");
  for (std::size_t d = 0; d < 3; ++d) p.c[d] = j.at(d).get<ScalarProfile>();
}

}  // namespace openmhd
