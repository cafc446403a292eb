#include "openmhd/scenarios.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numbers>

#include "openmhd/error.hpp"

namespace openmhd {

namespace {

constexpr double kPi = std::numbers::pi;

ScalarProfile mode(double offset, double amplitude, double kx, double ky, double phase_x, double phase_y,
                   double decay = 0.0, double omega = 0.0, double time_phase = 0.0) {
  return profile::Mode{offset, amplitude, kx, ky, phase_x, phase_y, decay, omega, time_phase};
}

ScalarProfile affine(double c0, double cx, double cy, double ct = 0.0) { return profile::Affine{c0, cx, cy, ct}; }

VectorProfile vec(ScalarProfile x, ScalarProfile y, ScalarProfile z = ScalarProfile::constant(0.0)) {
  return {{std::move(x), std::move(y), std::move(z)}};
}

void use_manufactured(ScenarioConfig& c, const ManufacturedSolution& ms) {
  c.manufactured = ms;
  c.data.rho0 = c.data.rho_boundary = ms.rho;
  c.data.u0 = c.data.u_boundary = ms.u;
  c.data.theta0 = c.data.theta_boundary = ms.theta;
  c.data.b0 = c.data.b_boundary = ms.b;
  c.reference = {ms.rho, ms.u, ms.theta, ms.b};
}

ScenarioConfig stationary() {
  ScenarioConfig c;
  c.name = "stationary";
  c.time = {0.05, 1e-3, 0.05};
  c.data.b0 = c.data.b_boundary = VectorProfile::constant({0.0, 0.0, 0.5});
  c.reference = {c.data.rho0, c.data.u0, c.data.theta0, c.data.b0};
  return c;
}

// u = (a x / 2, a y / 2, 0) with div u = a; rho = e^{-a t} sits on the
// lower min/max envelope. G = a^2 (x^2 + y^2) / 8 balances u.grad u.
ScenarioConfig uniform_divergence() {
  constexpr double a = 1.0;
  ScenarioConfig c;
  c.name = "uniform-divergence";
  c.grid = {32, 32, -0.5, 0.5, -0.5, 0.5};
  c.time = {0.2, 1e-3, 0.05};
  ManufacturedSolution ms;
  ms.rho = mode(0.0, 1.0, 0.0, 0.0, kPi / 2, kPi / 2, a);
  ms.u = vec(affine(0.0, a / 2, 0.0), affine(0.0, 0.0, a / 2));
  ms.theta = ScalarProfile::constant(1.0);
  ms.b = VectorProfile::constant({0.0, 0.0, 0.0});
  use_manufactured(c, ms);
  c.data.gravity = profile::Quadratic{0.0, 0.0, 0.0, a * a / 8, 0.0, a * a / 8};
  return c;
}

// Constant drift u = (1, 0, 0) through [0,1]^2 with rho_B = 1 + t on the
// left edge; the exact density is the ramp 1 + max(0, t - x).
ScenarioConfig translation_inflow() {
  ScenarioConfig c;
  c.name = "translation-inflow";
  c.time = {0.25, 1e-3, 0.05};
  c.kinematic_velocity = true;
  const ScalarProfile front = profile::Front{1.0, 1.0, 1.0, 0.0};
  c.data.rho0 = c.data.rho_boundary = front;
  c.data.u0 = c.data.u_boundary = VectorProfile::constant({1.0, 0.0, 0.0});
  c.reference.rho = front;
  c.reference.u = c.data.u0;
  c.reference.theta = c.data.theta0;
  c.reference.b = c.data.b0;
  return c;
}

// Closed box with a divergence-free magnetic vortex B = curl(psi z),
// psi = a sin(pi x) sin(pi y); Lorentz force stirs the fluid and Joule
// heating warms it.
ScenarioConfig joule_box() {
  constexpr double a = 0.1;
  ScenarioConfig c;
  c.name = "joule-box";
  c.time = {0.1, 1e-3, 0.05};
  const double decay = 2.0 * kPi * kPi * c.material.xi;
  const VectorProfile b = vec(mode(0.0, a * kPi, 1.0, 1.0, 0.0, kPi / 2, decay),
                              mode(0.0, -a * kPi, 1.0, 1.0, kPi / 2, 0.0, decay));
  c.data.b0 = c.data.b_boundary = b;
  return c;
}

// Sheared inflow through the left edge, walls top and bottom, outflow on
// the right, a transverse magnetic field and a pulsating inflow density.
ScenarioConfig inflow_channel() {
  ScenarioConfig c;
  c.name = "inflow-channel";
  c.time = {0.5, 1e-3, 0.05};
  c.material.mu = 0.1;
  c.material.kappa = 0.1;
  c.material.xi = 0.1;
  c.data.u0 = c.data.u_boundary = vec(mode(1.0, 0.2, 0.0, 1.0, kPi / 2, 0.0), ScalarProfile::constant(0.0));
  c.data.rho_boundary = mode(1.0, 0.1, 0.0, 1.0, kPi / 2, 0.0, 0.0, 2.0 * kPi, -kPi / 2);
  c.data.b0 = c.data.b_boundary = VectorProfile::constant({0.0, 1.0, 0.0});
  return c;
}

// Smooth forced solution for all four fields; inflow on the left edge,
// walls top and bottom.
ScenarioConfig manufactured_full() {
  ScenarioConfig c;
  c.name = "manufactured-full";
  c.time = {0.1, 1e-3, 0.05};
  ManufacturedSolution ms;
  ms.rho = mode(1.0, 0.1, 1.0, 1.0, 0.3, 0.7, 0.0, 1.0);
  ms.u = vec(mode(1.0, 0.1, 1.0, 1.0, kPi / 2, 0.0, 0.0, 1.0), mode(0.0, 0.1, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0));
  ms.theta = mode(1.0, 0.1, 1.0, 1.0, 0.5, 0.2, 0.5);
  ms.b = vec(mode(0.3, 0.1, 1.0, 1.0, 0.0, kPi / 2, 0.0, 1.0), mode(0.2, -0.1, 1.0, 1.0, kPi / 2, 0.0, 0.0, 1.0),
             mode(0.0, 0.1, 1.0, 1.0, 0.0, 0.0, 1.0));
  use_manufactured(c, ms);
  return c;
}

const std::map<std::string, std::function<ScenarioConfig()>>& registry() {
  static const std::map<std::string, std::function<ScenarioConfig()>> r{
      {"inflow-channel", inflow_channel},   {"joule-box", joule_box},
      {"manufactured-full", manufactured_full}, {"stationary", stationary},
      {"translation-inflow", translation_inflow}, {"uniform-divergence", uniform_divergence},
  };
  return r;
}

}  // namespace

std::vector<std::string> scenario_library() {
  std::vector<std::string> names;
  for (const auto& [name, make] : registry()) names.push_back(name);
  return names;
}

ScenarioConfig builtin_scenario(const std::string& name) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) {
    throw Error(ErrorCode::UnknownScenario, name.empty() ? "empty scenario name" : "no built-in scenario '" + name + "'");
  }
  return it->second();
}

}  // namespace openmhd
