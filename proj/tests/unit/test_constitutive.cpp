#include <doctest.h>

#include <cmath>
#include <random>

#include "openmhd/constitutive.hpp"
#include "openmhd/error.hpp"
#include "openmhd/operators.hpp"
#include "support.hpp"

using namespace openmhd;
using testing_support::interior_max_diff;
using testing_support::unit_grid;

namespace {

Mat3 identity() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

double max_abs(const Mat3& m) {
  double a = 0.0;
  for (double v : m) a = std::max(a, std::abs(v));
  return a;
}

Mat3 sym(const Mat3& g) {
  Mat3 d{};
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) d[static_cast<std::size_t>(3 * r + s)] = 0.5 * (g[static_cast<std::size_t>(3 * r + s)] + g[static_cast<std::size_t>(3 * s + r)]);
  return d;
}

}  // namespace

TEST_CASE("pressure is rho theta") {
  CHECK(pressure(2.0, 3.0) == 6.0);
  CHECK(pressure(0.0, 5.0) == 0.0);
  const Grid g = unit_grid(8);
  const ScalarField x = sample(g, [](double x, double) { return x; });
  const ScalarField p = pressure(x, x);
  CHECK(testing_support::all_max_diff(g, p, [](double x, double) { return x * x; }) < 1e-15);
  CHECK(pressure(1.5 * 2.0, 4.0 * 0.7) == doctest::Approx(1.5 * 4.0 * pressure(2.0, 0.7)));
}

TEST_CASE("stress of the identity gradient") {
  MaterialParams m;
  m.mu = 1.0;
  m.lambda = 0.0;
  CHECK(max_abs(stress(identity(), m)) < 1e-15);
  m.mu = 0.0;
  m.lambda = 1.0;
  const Mat3 s = stress(identity(), m);
  CHECK(s[0] == doctest::Approx(3.0));
  CHECK(s[4] == doctest::Approx(3.0));
  CHECK(s[8] == doctest::Approx(3.0));
  CHECK(std::abs(s[1]) + std::abs(s[5]) < 1e-15);
}

TEST_CASE("antisymmetric gradient has no stress") {
  MaterialParams m;
  m.lambda = 0.7;
  const Mat3 w{0, 2, -1, -2, 0, 3, 1, -3, 0};
  CHECK(max_abs(stress(w, m)) < 1e-15);
}

TEST_CASE("viscous dissipation examples") {
  MaterialParams m;
  m.mu = 1.0;
  m.lambda = 0.0;
  const Mat3 zero{};
  CHECK(double_contraction(stress(zero, m), zero) == 0.0);
  const Mat3 g{1, 0, 0, 0, -1, 0, 0, 0, 0};
  CHECK(double_contraction(stress(g, m), sym(g)) == doctest::Approx(4.0));
  CHECK(double_contraction(stress(identity(), m), identity()) == doctest::Approx(0.0));
}

TEST_CASE("dissipation is nonnegative and the deviatoric part is traceless") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  MaterialParams m;
  for (int trial = 0; trial < 200; ++trial) {
    Mat3 g;
    for (double& v : g) v = u(rng);
    m.mu = 0.1 + std::abs(u(rng));
    m.lambda = std::abs(u(rng));
    CHECK(double_contraction(stress(g, m), sym(g)) >= -1e-13);
    m.lambda = 0.0;
    const Mat3 s = stress(g, m);
    CHECK(std::abs(s[0] + s[4] + s[8]) < 1e-12);
  }
}

TEST_CASE("Lorentz force and Joule heating of B = (0, x, 0)") {
  const Grid g = unit_grid(8);
  const VectorField b = sample_vector(g, [](double x, double) { return Vec3{0.0, x, 0.0}; });
  const VectorField f = lorentz_force(g, b);
  CHECK(interior_max_diff(g, f.c[0], [](double x, double) { return -x; }) < 1e-13);
  CHECK(interior_max_diff(g, f.c[1], [](double, double) { return 0.0; }) < 1e-13);
  MaterialParams m;
  m.xi = 1.0;
  const ScalarField j1 = joule_heating(g, b, m);
  CHECK(interior_max_diff(g, j1, [](double, double) { return 1.0; }) < 1e-13);
  m.xi = 2.0;
  const ScalarField j2 = joule_heating(g, b, m);
  for (std::size_t k = 0; k < j1.size(); ++k) CHECK(j2[k] == doctest::Approx(2.0 * j1[k]));
}

TEST_CASE("uniform and zero fields produce no force or heating") {
  const Grid g = unit_grid(6);
  MaterialParams m;
  for (const Vec3& c : {Vec3{0.3, -1.0, 2.0}, Vec3{0.0, 0.0, 0.0}}) {
    const VectorField b(g, c);
    CHECK(lorentz_force(g, b).max_abs() < 1e-14);
    CHECK(joule_heating(g, b, m).max_abs() < 1e-14);
  }
}

TEST_CASE("Lorentz force is orthogonal to B") {
  const Grid g = unit_grid(10);
  const VectorField b = sample_vector(g, [](double x, double y) { return Vec3{std::sin(3 * y), x * x * y, std::cos(x + y)}; });
  const VectorField f = lorentz_force(g, b);
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(std::abs(dot(f.at(k), b.at(k))) < 1e-12);
}

TEST_CASE("heat flux is -kappa grad theta") {
  const Grid g = unit_grid(6);
  MaterialParams m;
  CHECK(heat_flux(g, ScalarField(g, 3.0), m).max_abs() == 0.0);
  const VectorField q = heat_flux(g, sample(g, [](double x, double) { return x; }), m);
  CHECK(testing_support::all_max_diff(g, q.c[0], [](double, double) { return -1.0; }) < 1e-12);
  CHECK(q.c[1].max_abs() < 1e-12);
}

TEST_CASE("material validation") {
  MaterialParams m;
  CHECK_NOTHROW(m.validate());
  m.kappa = 0.0;
  CHECK_THROWS_AS(m.validate(), Error);
  m.kappa = 1.0;
  m.lambda = -0.1;
  CHECK_THROWS_AS(m.validate(), Error);
}

TEST_CASE("div S matches the stress of an analytic field") {
  // u = (x^2 y, x y^2, 0): div S = mu lap u + (mu (1 - 2/3) + lambda) grad div u.
  const Grid g = unit_grid(16);
  MaterialParams m;
  m.mu = 0.7;
  m.lambda = 0.2;
  const VectorField u = sample_vector(g, [](double x, double y) { return Vec3{x * x * y, x * y * y, 0.0}; });
  const VectorField d = div_stress(g, u, m);
  const double c = m.mu / 3.0 + m.lambda;
  // lap u = (2y, 2x); div u = 4xy, grad div u = (4y, 4x).
  CHECK(interior_max_diff(g, d.c[0], [&](double, double y) { return m.mu * 2 * y + c * 4 * y; }) < 1e-11);
  CHECK(interior_max_diff(g, d.c[1], [&](double x, double) { return m.mu * 2 * x + c * 4 * x; }) < 1e-11);
}
