#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "openmhd/error.hpp"
#include "openmhd/operators.hpp"
#include "openmhd/parabolic.hpp"
#include "support.hpp"

using namespace openmhd;
using testing_support::unit_grid;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd dense(const CsrMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.rows);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t r = 0; r < a.rows; ++r)
    for (std::size_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(a.col[p])) += a.val[p];
  return m;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double rel_diff(const std::vector<double>& x, const Eigen::VectorXd& y) {
  return (to_eigen(x) - y).norm() / std::max(1e-300, y.norm());
}

// Coefficient bundle that owns its fields.
struct Frozen {
  ScalarField rho;
  VectorField v;
  ScalarField theta;
  VectorField b;
  ScalarField gravity;
  explicit Frozen(const Grid& g) : rho(g, 1.0), v(g), theta(g, 1.0), b(g), gravity(g) {}
  [[nodiscard]] LinearizedCoefficients c() const { return {&rho, &v, &theta, &b, &gravity}; }
};

// Dense (I/dt - a lap) with homogeneous Dirichlet rows, built node by node.
Eigen::MatrixXd heat_matrix(const Grid& g, double dt, double a) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const double cx = a / (g.hx() * g.hx());
  const double cy = a / (g.hy() * g.hy());
  for (int j = 0; j <= g.ny(); ++j) {
    for (int i = 0; i <= g.nx(); ++i) {
      const auto k = static_cast<Eigen::Index>(g.index(i, j));
      if (g.on_boundary(i, j)) {
        m(k, k) = 1.0;
        continue;
      }
      m(k, k) = 1.0 / dt + 2.0 * cx + 2.0 * cy;
      m(k, static_cast<Eigen::Index>(g.index(i + 1, j))) = -cx;
      m(k, static_cast<Eigen::Index>(g.index(i - 1, j))) = -cx;
      m(k, static_cast<Eigen::Index>(g.index(i, j + 1))) = -cy;
      m(k, static_cast<Eigen::Index>(g.index(i, j - 1))) = -cy;
    }
  }
  return m;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an openmhd::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("momentum with all couplings zero stays at rest") {
  const Grid g = unit_grid(8);
  Frozen f(g);
  MaterialParams m;
  m.lambda = 0.5;
  const VectorField u = solve_momentum(g, m, f.c(), VectorField(g), VectorField(g), 0.1, {});
  CHECK(u.max_abs() < 1e-14);
}

TEST_CASE("momentum driven by theta = x matches an independent dense solve") {
  // (I/dt - mu lap - (mu/3 + lambda) grad div) u = -(1, 0, 0) in the interior, u = 0 on the boundary.
  const Grid g = unit_grid(8);
  Frozen f(g);
  f.theta = sample(g, [](double x, double) { return x; });
  MaterialParams m;
  m.mu = 0.8;
  m.lambda = 0.3;
  const double dt = 0.05;
  const VectorField u = solve_momentum(g, m, f.c(), VectorField(g), VectorField(g), dt, {1e-13, 4000});

  const auto nn = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3 * nn, 3 * nn);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(3 * nn);
  const double h = g.hx();
  const double gd = m.mu / 3.0 + m.lambda;
  auto id = [&](int comp, int i, int j) { return comp * nn + static_cast<Eigen::Index>(g.index(i, j)); };
  for (int j = 0; j <= g.ny(); ++j) {
    for (int i = 0; i <= g.nx(); ++i) {
      for (int d = 0; d < 3; ++d) {
        const auto r = id(d, i, j);
        if (g.on_boundary(i, j)) {
          a(r, r) = 1.0;
          continue;
        }
        a(r, r) += 1.0 / dt + 4.0 * m.mu / (h * h);
        for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) a(r, id(d, i + di, j + dj)) -= m.mu / (h * h);
        rhs(r) = d == 0 ? -1.0 : 0.0;
      }
      if (g.on_boundary(i, j)) continue;
      const double dxx = gd / (h * h);
      const double dxy = gd / (4.0 * h * h);
      const auto rx = id(0, i, j);
      const auto ry = id(1, i, j);
      a(rx, id(0, i, j)) += 2.0 * dxx;
      a(rx, id(0, i + 1, j)) -= dxx;
      a(rx, id(0, i - 1, j)) -= dxx;
      a(ry, id(1, i, j)) += 2.0 * dxx;
      a(ry, id(1, i, j + 1)) -= dxx;
      a(ry, id(1, i, j - 1)) -= dxx;
      for (auto [row, comp] : {std::pair{rx, 1}, {ry, 0}}) {
        a(row, id(comp, i + 1, j + 1)) -= dxy;
        a(row, id(comp, i - 1, j - 1)) -= dxy;
        a(row, id(comp, i + 1, j - 1)) += dxy;
        a(row, id(comp, i - 1, j + 1)) += dxy;
      }
    }
  }
  const Eigen::VectorXd ex = a.partialPivLu().solve(rhs);
  CHECK(rel_diff(pack(u), ex) < 1e-10);
  CHECK(u.c[0].min() < 0.0);
}

TEST_CASE("temperature with Joule heating 1 matches an independent dense solve") {
  const Grid g = unit_grid(8);
  Frozen f(g);
  f.b = sample_vector(g, [](double x, double) { return Vec3{0.0, x, 0.0}; });
  MaterialParams m;
  const double dt = 0.1;
  const ScalarField th = solve_temperature(g, m, f.c(), ScalarField(g), ScalarField(g), dt, {1e-13, 4000});
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(g.size()));
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i)
      if (g.on_boundary(i, j)) rhs(static_cast<Eigen::Index>(g.index(i, j))) = 0.0;
  const Eigen::VectorXd ex = heat_matrix(g, dt, 1.0).partialPivLu().solve(rhs);
  CHECK(rel_diff(th.values, ex) < 1e-10);
}

TEST_CASE("constant temperature is preserved exactly") {
  const Grid g = unit_grid(10);
  Frozen f(g);
  MaterialParams m;
  const ScalarField c(g, 2.5);
  const ScalarField th = solve_temperature(g, m, f.c(), c, c, 0.2, {});
  CHECK((th - c).max_abs() < 1e-12);
}

TEST_CASE("uniform magnetic field is preserved exactly") {
  const Grid g = unit_grid(10);
  Frozen f(g);
  MaterialParams m;
  const VectorField b(g, Vec3{0.3, -0.7, 1.1});
  const VectorField out = solve_induction(g, m, f.c(), b, b, 0.1, {});
  CHECK((out - b).max_abs() < 1e-12);
}

TEST_CASE("induction decays a sine mode at the discrete eigenvalue") {
  const int n = 32;
  const Grid g = unit_grid(n);
  Frozen f(g);
  MaterialParams m;
  const double dt = 0.01;
  const VectorField b = sample_vector(g, [](double x, double) { return Vec3{0.0, std::sin(kPi * x), 0.0}; });
  const VectorField out = solve_induction(g, m, f.c(), b, b, dt, {1e-13, 4000});
  const double h = g.hx();
  const double lam_h = 4.0 / (h * h) * std::pow(std::sin(kPi * h / 2.0), 2);
  const double factor = 1.0 / (1.0 + dt * lam_h);
  for (int j = 0; j <= n; ++j)
    for (int i = 1; i < n; ++i) CHECK(out.c[1](i, j) == doctest::Approx(factor * b.c[1](i, j)).epsilon(1e-9));
  CHECK(std::abs(factor - 1.0 / (1.0 + dt * kPi * kPi)) < 5.0 * h * h);
  CHECK(out.c[0].max_abs() < 1e-12);
}

TEST_CASE("induction keeps the divergence at the truncation level") {
  auto run = [](int n) {
    const Grid g = unit_grid(n);
    Frozen f(g);
    f.v = sample_vector(g, [](double x, double y) { return Vec3{0.5 * std::sin(kPi * y), 0.3 * x * x, 0.0}; });
    MaterialParams m;
    m.xi = 0.5;
    VectorField b = sample_vector(g, [](double x, double y) {
      return Vec3{std::sin(kPi * x) * std::cos(kPi * y), -std::cos(kPi * x) * std::sin(kPi * y), 0.2};
    });
    const VectorField bb = b;
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      b = solve_induction(g, m, f.c(), b, bb, 0.01, {1e-12, 4000});
      worst = std::max(worst, divergence(g, b).max_abs());
    }
    return worst;
  };
  const double d16 = run(16);
  const double d32 = run(32);
  CHECK(d32 < d16);
  CHECK(d32 < 10.0 / 32.0);
}

TEST_CASE("oracle equivalence of all three solves on a 10x10 grid") {
  const Grid g = unit_grid(10);
  Frozen f(g);
  f.rho = sample(g, [](double x, double y) { return 1.0 + 0.5 * x * y; });
  f.v = sample_vector(g, [](double x, double y) { return Vec3{1.0 - y, 0.5 * x, 0.1}; });
  f.theta = sample(g, [](double x, double y) { return 1.0 + x - 0.3 * y * y; });
  f.b = sample_vector(g, [](double x, double y) { return Vec3{y, 0.5 + x * x, 0.2}; });
  f.gravity = sample(g, [](double, double y) { return -y; });
  MaterialParams m;
  m.mu = 0.4;
  m.lambda = 0.1;
  m.kappa = 0.7;
  m.cv = 1.5;
  m.xi = 0.3;
  const ParabolicOptions opt{1e-13, 4000};
  const double dt = 0.02;
  {
    const VectorField up = sample_vector(g, [](double x, double y) { return Vec3{x * (1 - x), y, 0.0}; });
    const SparseSystem s = assemble_momentum(g, m, f.c(), up, up, dt, opt);
    const VectorField u = solve_momentum(g, m, f.c(), up, up, dt, opt);
    CHECK(rel_diff(pack(u), dense(s.a).partialPivLu().solve(to_eigen(s.rhs))) < 1e-10);
  }
  {
    const ScalarField tp = f.theta;
    const SparseSystem s = assemble_temperature(g, m, f.c(), tp, tp, dt, opt);
    const ScalarField t = solve_temperature(g, m, f.c(), tp, tp, dt, opt);
    CHECK(rel_diff(t.values, dense(s.a).partialPivLu().solve(to_eigen(s.rhs))) < 1e-10);
  }
  {
    const SparseSystem s = assemble_induction(g, m, f.c(), f.b, f.b, dt, opt);
    const VectorField b = solve_induction(g, m, f.c(), f.b, f.b, dt, opt);
    CHECK(rel_diff(pack(b), dense(s.a).partialPivLu().solve(to_eigen(s.rhs))) < 1e-10);
  }
}

TEST_CASE("Dirichlet values and residual contract") {
  const Grid g = unit_grid(12);
  Frozen f(g);
  f.v = sample_vector(g, [](double x, double y) { return Vec3{y, -x, 0.0}; });
  MaterialParams m;
  const ParabolicOptions opt{1e-11, 4000};
  const ScalarField tb = sample(g, [](double x, double y) { return 1.0 + x + 2.0 * y * y; });
  const SparseSystem s = assemble_temperature(g, m, f.c(), ScalarField(g, 1.0), tb, 0.05, opt);
  const ScalarField t = solve_temperature(g, m, f.c(), ScalarField(g, 1.0), tb, 0.05, opt);
  CHECK(relative_residual(s, t.values) <= 10.0 * opt.tol);
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i)
      if (g.on_boundary(i, j)) CHECK(std::abs(t(i, j) - tb(i, j)) < 1e-13);

  const VectorField ub = sample_vector(g, [](double x, double y) { return Vec3{x * y, 1.0 - x, 0.5}; });
  const SparseSystem sm = assemble_momentum(g, m, f.c(), VectorField(g), ub, 0.05, opt);
  const VectorField u = solve_momentum(g, m, f.c(), VectorField(g), ub, 0.05, opt);
  CHECK(relative_residual(sm, pack(u)) <= 10.0 * opt.tol);
  for (int d = 0; d < 3; ++d)
    for (int j = 0; j <= g.ny(); ++j)
      for (int i = 0; i <= g.nx(); ++i)
        if (g.on_boundary(i, j))
          CHECK(std::abs(u.c[static_cast<std::size_t>(d)](i, j) - ub.c[static_cast<std::size_t>(d)](i, j)) < 1e-13);

  // Tangential components of B follow the trace; the normal one is closed separately.
  const VectorField bb = sample_vector(g, [](double x, double y) { return Vec3{y, x, 0.3}; });
  const VectorField b = solve_induction(g, m, f.c(), bb, bb, 0.05, opt);
  for (int k = 0; k <= g.ny(); ++k) {
    CHECK(std::abs(b.c[1](0, k) - bb.c[1](0, k)) < 1e-13);
    CHECK(std::abs(b.c[1](g.nx(), k) - bb.c[1](g.nx(), k)) < 1e-13);
    CHECK(std::abs(b.c[2](0, k) - 0.3) < 1e-13);
  }
  for (int k = 0; k <= g.nx(); ++k) CHECK(std::abs(b.c[0](k, 0) - bb.c[0](k, 0)) < 1e-13);
}

TEST_CASE("discrete maximum principle for source-free heat conduction") {
  const Grid g = unit_grid(12);
  Frozen f(g);
  MaterialParams m;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(1.0, 2.0);
  ScalarField prev(g);
  for (double& x : prev.values) x = u(rng);
  const ScalarField tb = sample(g, [](double x, double y) { return 0.5 + 2.5 * x * y; });
  double lo = 1e300;
  double hi = -1e300;
  for (int j = 0; j <= g.ny(); ++j) {
    for (int i = 0; i <= g.nx(); ++i) {
      if (g.on_boundary(i, j)) {
        lo = std::min(lo, tb(i, j));
        hi = std::max(hi, tb(i, j));
      } else {
        lo = std::min(lo, prev(i, j));
        hi = std::max(hi, prev(i, j));
      }
    }
  }
  for (double dt : {1e-3, 0.1, 10.0}) {
    const ScalarField t = solve_temperature(g, m, f.c(), prev, tb, dt, {1e-13, 4000});
    CHECK(t.min() >= lo - 1e-12);
    CHECK(t.max() <= hi + 1e-12);
  }
}

TEST_CASE("invalid coefficients are rejected") {
  const Grid g = unit_grid(6);
  Frozen f(g);
  MaterialParams m;
  CHECK(code_of([&] { (void)solve_temperature(g, m, f.c(), f.theta, f.theta, 0.0, {}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { (void)solve_momentum(g, m, f.c(), f.b, f.b, -1.0, {}); }) == ErrorCode::InvalidArgument);
  f.rho[7] = 0.0;
  CHECK(code_of([&] { (void)solve_momentum(g, m, f.c(), f.b, f.b, 0.1, {}); }) == ErrorCode::NonPositiveDensityCoefficient);
  f.rho[7] = 0.05;
  ParabolicOptions opt;
  opt.rho_floor = 0.1;
  CHECK(code_of([&] { (void)solve_temperature(g, m, f.c(), f.theta, f.theta, 0.1, opt); }) ==
        ErrorCode::NonPositiveDensityCoefficient);
}

TEST_CASE("manufactured heat conduction: second order in space with central drift") {
  // theta* = 1 + sin(pi x) sin(pi y), steady; v = (1, 0.5, 0); f = v.grad theta* - lap theta*.
  auto err = [](int n) {
    const Grid g = unit_grid(n);
    Frozen f(g);
    f.v = VectorField(g, Vec3{1.0, 0.5, 0.0});
    MaterialParams m;
    auto exact = [](double x, double y) { return 1.0 + std::sin(kPi * x) * std::sin(kPi * y); };
    const ScalarField th_exact = sample(g, exact);
    const ScalarField src = sample(g, [](double x, double y) {
      const double sx = std::sin(kPi * x), cx = std::cos(kPi * x), sy = std::sin(kPi * y), cy = std::cos(kPi * y);
      return kPi * cx * sy + 0.5 * kPi * sx * cy + 2.0 * kPi * kPi * sx * sy;
    });
    ParabolicOptions opt{1e-11, 4000};
    opt.drift = DriftScheme::Central;
    ScalarField th = th_exact;
    for (int s = 0; s < 3; ++s) th = solve_temperature(g, m, f.c(), th, th_exact, 10.0, opt, &src);
    double e = 0.0;
    for (std::size_t k = 0; k < th.size(); ++k) e = std::max(e, std::abs(th[k] - th_exact[k]));
    return e;
  };
  const double e16 = err(16);
  const double e32 = err(32);
  const double e64 = err(64);
  CHECK(std::log2(e16 / e32) >= 1.8);
  CHECK(std::log2(e32 / e64) >= 1.8);
}

TEST_CASE("manufactured heat conduction: first order in time") {
  // theta* = e^t (1 + x^2 + y^2) is reproduced exactly in space by the stencils.
  auto err = [](double dt) {
    const Grid g = unit_grid(8);
    Frozen f(g);
    f.v = VectorField(g, Vec3{1.0, 0.5, 0.0});
    MaterialParams m;
    ParabolicOptions opt{1e-13, 4000};
    opt.drift = DriftScheme::Central;
    auto exact = [](double t) { return [t](double x, double y) { return std::exp(t) * (1.0 + x * x + y * y); }; };
    ScalarField th = sample(g, exact(0.0));
    const int steps = static_cast<int>(std::lround(1.0 / dt));
    for (int s = 1; s <= steps; ++s) {
      const double t = s * dt;
      const ScalarField src = sample(g, [t](double x, double y) {
        return std::exp(t) * ((1.0 + x * x + y * y) + 2.0 * x + y - 4.0);
      });
      th = solve_temperature(g, m, f.c(), th, sample(g, exact(t)), dt, opt, &src);
    }
    return (th - sample(g, exact(1.0))).max_abs();
  };
  const double e1 = err(0.1);
  const double e2 = err(0.05);
  const double e3 = err(0.025);
  CHECK(std::log2(e1 / e2) >= 0.9);
  CHECK(std::log2(e2 / e3) >= 0.9);
}

TEST_CASE("manufactured momentum: first order in time") {
  // u* = e^t (x^2, y^2, 0), rho = theta = 1, B = 0, v = (1, 0.5, 0).
  auto err = [](double dt) {
    const Grid g = unit_grid(8);
    Frozen f(g);
    f.v = VectorField(g, Vec3{1.0, 0.5, 0.0});
    MaterialParams m;
    m.mu = 0.5;
    m.lambda = 0.2;
    const double c = 2.0 * (m.mu + m.mu / 3.0 + m.lambda);
    ParabolicOptions opt{1e-13, 4000};
    opt.drift = DriftScheme::Central;
    auto exact = [](double t) { return [t](double x, double y) { return Vec3{std::exp(t) * x * x, std::exp(t) * y * y, 0.0}; }; };
    VectorField u = sample_vector(g, exact(0.0));
    const int steps = static_cast<int>(std::lround(1.0 / dt));
    for (int s = 1; s <= steps; ++s) {
      const double t = s * dt;
      const VectorField src = sample_vector(g, [t, c](double x, double y) {
        return Vec3{std::exp(t) * (x * x + 2.0 * x - c), std::exp(t) * (y * y + y - c), 0.0};
      });
      u = solve_momentum(g, m, f.c(), u, sample_vector(g, exact(t)), dt, opt, &src);
    }
    return (u - sample_vector(g, exact(1.0))).max_abs();
  };
  const double e1 = err(0.1);
  const double e2 = err(0.05);
  const double e3 = err(0.025);
  CHECK(e3 > 0.0);
  CHECK(std::log2(e1 / e2) >= 0.9);
  CHECK(std::log2(e2 / e3) >= 0.9);
}
