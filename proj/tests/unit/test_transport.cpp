#include <doctest.h>

#include <cmath>
#include <functional>

#include "openmhd/density_estimates.hpp"
#include "openmhd/error.hpp"
#include "openmhd/norms.hpp"
#include "openmhd/transport.hpp"
#include "support.hpp"

using namespace openmhd;
using testing_support::unit_grid;

namespace {

using VelocityFn = std::function<Vec3(double, double, double)>;
using ScalarFn = std::function<double(double, double, double)>;

DensityProblem make_problem(Grid g, const VelocityFn& v, const ScalarFn& rho0, const ScalarFn& rho_b, int steps,
                            double dt, double threshold = 0.1) {
  g = classify_boundary(g, [&](double x, double y) { return v(0.0, x, y); }, threshold);
  std::vector<double> times;
  std::vector<VectorField> vs;
  std::vector<ScalarField> rb;
  for (int n = 0; n <= steps; ++n) {
    const double t = n * dt;
    times.push_back(t);
    vs.push_back(sample_vector(g, [&](double x, double y) { return v(t, x, y); }));
    rb.push_back(sample(g, [&](double x, double y) { return rho_b(t, x, y); }));
  }
  return DensityProblem{g, VelocityHistory(g, times, vs), sample(g, [&](double x, double y) { return rho0(0.0, x, y); }), rb, {}};
}

VelocityHistory constant_history(const Grid& g, Vec3 v, double t0, double t1) {
  return VelocityHistory(g, {t0, t1}, {VectorField(g, v), VectorField(g, v)});
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

double ramp(double t, double x) { return 1.0 + std::max(0.0, t - x); }

DensityProblem translation(int n, double dt, double horizon) {
  return make_problem(
      unit_grid(n), [](double, double, double) { return Vec3{1.0, 0.0, 0.0}; },
      [](double t, double x, double) { return ramp(t, x); }, [](double t, double x, double) { return ramp(t, x); },
      static_cast<int>(std::lround(horizon / dt)), dt);
}

double translation_error(int n, double dt, double horizon) {
  const DensityProblem p = translation(n, dt, horizon);
  const auto rho = solve_continuity(p);
  const ScalarField exact = sample(p.grid, [&](double x, double) { return ramp(horizon, x); });
  return spatial_norm(p.grid, rho.back() - exact, 2.0, 0);
}

}  // namespace

TEST_CASE("backtracking with zero velocity stays put") {
  const Grid g = unit_grid(10);
  const auto foot = backtrack_characteristic(0.3, 0.7, 0.5, constant_history(g, {0, 0, 0}, 0.0, 1.0), 0.1);
  REQUIRE(std::holds_alternative<InteriorFoot>(foot));
  CHECK(std::get<InteriorFoot>(foot).x == doctest::Approx(0.3));
  CHECK(std::get<InteriorFoot>(foot).y == doctest::Approx(0.7));
}

TEST_CASE("backtracking along a constant drift") {
  const Grid g = unit_grid(10);
  const auto v = constant_history(g, {1, 0, 0}, 0.0, 1.0);
  const auto foot = backtrack_characteristic(0.5, 0.5, 0.5, v, 0.1);
  REQUIRE(std::holds_alternative<InteriorFoot>(foot));
  CHECK(std::get<InteriorFoot>(foot).x == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(std::get<InteriorFoot>(foot).y == doctest::Approx(0.5).epsilon(1e-12));

  const auto cross = backtrack_characteristic(0.05, 0.5, 0.5, v, 0.1);
  REQUIRE(std::holds_alternative<BoundaryCrossing>(cross));
  const auto& c = std::get<BoundaryCrossing>(cross);
  CHECK(c.side == Side::Left);
  CHECK(c.time == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(c.y == doctest::Approx(0.5));
  CHECK(c.face == 5);
}

TEST_CASE("backtracking outside the velocity window") {
  const Grid g = unit_grid(10);
  const auto v = constant_history(g, {1, 0, 0}, 0.0, 1.0);
  CHECK(code_of([&] { (void)backtrack_characteristic(0.5, 0.5, 0.05, v, 0.1); }) == ErrorCode::VelocityNotInterpolable);
}

TEST_CASE("zero velocity keeps the density exactly") {
  const DensityProblem p = make_problem(
      unit_grid(12), [](double, double, double) { return Vec3{0, 0, 0}; },
      [](double, double x, double y) { return 1.0 + x * y + 0.3 * std::sin(5 * x); }, [](double, double, double) { return 1.0; },
      20, 0.01);
  const auto rho = solve_continuity(p);
  REQUIRE(rho.size() == 21);
  for (const auto& r : rho) CHECK(r == p.rho0);
}

TEST_CASE("uniform divergence decays the density as exp(-alpha t)") {
  const double alpha = 1.0;
  const double r = 1.7;
  const DensityProblem p = make_problem(
      Grid(16, 16, -0.5, 0.5, -0.5, 0.5), [&](double, double x, double y) { return Vec3{alpha * x / 2, alpha * y / 2, 0}; },
      [&](double, double, double) { return r; }, [&](double, double, double) { return r; }, 100, 2e-3);
  const auto rho = solve_continuity(p);
  for (std::size_t n = 0; n < rho.size(); ++n) {
    const double exact = r * std::exp(-alpha * p.velocity.times()[n]);
    CHECK(rho[n].max() == doctest::Approx(exact).epsilon(1e-10));
    CHECK(rho[n].min() == doctest::Approx(exact).epsilon(1e-10));
  }
  const DensityBounds b = density_minmax_bounds(p, divergence_sup(p.velocity));
  for (std::size_t n = 0; n < rho.size(); ++n) {
    CHECK(b.lower[n] == doctest::Approx(r * std::exp(-alpha * p.velocity.times()[n])).epsilon(1e-12));
    CHECK(b.upper[n] == doctest::Approx(r * std::exp(alpha * p.velocity.times()[n])).epsilon(1e-12));
    CHECK(rho[n].min() == doctest::Approx(b.lower[n]).epsilon(1e-10));
  }
}

TEST_CASE("translation with boundary emission is first-order accurate") {
  const double e1 = translation_error(16, 2e-3, 0.25);
  const double e2 = translation_error(32, 1e-3, 0.25);
  const double e3 = translation_error(64, 5e-4, 0.25);
  CHECK(e2 <= 0.1 * (1.0 / 32 + 1e-3));
  CHECK(std::log2(e1 / e2) >= 0.9);
  CHECK(std::log2(e2 / e3) >= 0.9);
}

TEST_CASE("upwind cross-check agrees with the characteristic solver") {
  const DensityProblem p = translation(32, 1e-3, 0.2);
  const auto sl = solve_continuity(p);
  const auto up = solve_continuity_upwind(p);
  REQUIRE(up.size() == sl.size());
  const ScalarField exact = sample(p.grid, [](double x, double) { return ramp(0.2, x); });
  const double e_up = spatial_norm(p.grid, up.back() - exact, 2.0, 0);
  const double diff = spatial_norm(p.grid, up.back() - sl.back(), 2.0, 0);
  CHECK(diff <= e_up + translation_error(32, 1e-3, 0.2));
  CHECK(e_up < 0.02);
}

TEST_CASE("large steps sub-cycle the characteristics") {
  // CFL 8: the scheme stays stable and positive.
  const DensityProblem p = translation(32, 0.25, 0.5);
  const auto rho = solve_continuity(p);
  for (const auto& r : rho) CHECK(r.min() > 0.0);
  const ScalarField exact = sample(p.grid, [](double x, double) { return ramp(0.5, x); });
  CHECK(spatial_norm(p.grid, rho.back() - exact, 2.0, 0) < 0.05);
}

TEST_CASE("density problem validation") {
  auto zero = [](double, double, double) { return Vec3{0, 0, 0}; };
  auto one = [](double, double, double) { return 1.0; };
  {
    DensityProblem p = make_problem(unit_grid(8), zero, one, one, 1, 0.1);
    p.rho0[5] = -1.0;
    CHECK(code_of([&] { p.validate(); }) == ErrorCode::NonPositiveData);
  }
  {
    DensityProblem p = make_problem(unit_grid(8), zero, one, one, 2, 0.1);
    p.rho_boundary.pop_back();
    CHECK(code_of([&] { p.validate(); }) == ErrorCode::MismatchedSampling);
  }
  {
    const Grid g = unit_grid(8);
    DensityProblem p{g, VelocityHistory(g, {0.0}, {VectorField(g)}), ScalarField(g, 1.0), {ScalarField(g, 1.0)}, {}};
    CHECK(code_of([&] { p.validate(); }) == ErrorCode::EmptyTrajectory);
  }
  {
    auto drift = [](double, double, double) { return Vec3{1, 0, 0}; };
    DensityProblem p = make_problem(unit_grid(8), drift, one, [](double, double, double) { return 2.0; }, 2, 0.1);
    CHECK(code_of([&] { p.validate(); }) == ErrorCode::CompatibilityViolated);
  }
  {
    auto drift = [](double, double, double) { return Vec3{1, 0, 0}; };
    DensityProblem p = make_problem(unit_grid(8), drift, one, one, 2, 0.1);
    p.rho_boundary[1][p.grid.index(0, 3)] = 0.0;
    CHECK(code_of([&] { p.validate(); }) == ErrorCode::NonPositiveData);
  }
}

TEST_CASE("characteristic leaving through a face without data") {
  const Grid g = unit_grid(8);  // untagged: every face is a wall
  DensityProblem p{g, constant_history(g, {1, 0, 0}, 0.0, 0.1), ScalarField(g, 1.0), {ScalarField(g, 1.0), ScalarField(g, 1.0)}, {}};
  CHECK(code_of([&] { (void)solve_continuity(p); }) == ErrorCode::CharacteristicEntersThroughNonInflow);
}

TEST_CASE("min/max bounds without divergence are constant") {
  const DensityProblem p = make_problem(
      unit_grid(10), [](double, double, double) { return Vec3{1, 0, 0}; },
      [](double, double x, double y) { return y < 1e-12 || x > 0 ? 2.0 + x * (1 - x) : 2.0; },
      [](double t, double, double) { return 2.0 + 0.5 * std::sin(10 * t); }, 20, 0.01);
  const DensityBounds b = density_minmax_bounds(p, divergence_sup(p.velocity));
  double lo = p.rho0.min();
  double hi = p.rho0.max();
  for (std::size_t n = 0; n < b.lower.size(); ++n) {
    lo = std::min(lo, 2.0 + 0.5 * std::sin(10 * 0.01 * n));
    hi = std::max(hi, 2.0 + 0.5 * std::sin(10 * 0.01 * n));
    CHECK(b.lower[n] == doctest::Approx(lo));
    CHECK(b.upper[n] == doctest::Approx(hi));
  }
  const auto rho = solve_continuity(p);
  for (std::size_t n = 0; n < rho.size(); ++n) {
    CHECK(rho[n].min() >= b.lower[n] - 1e-12);
    CHECK(rho[n].max() <= b.upper[n] + 1e-12);
  }
}

TEST_CASE("Lp estimate with zero velocity") {
  const DensityProblem p = make_problem(
      unit_grid(10), [](double, double, double) { return Vec3{0, 0, 0}; },
      [](double, double x, double) { return 1.0 + x; }, [](double, double, double) { return 1.0; }, 10, 0.01);
  const auto rho = solve_continuity(p);
  const auto rep = check_lp_estimate(rho, p, 4.0, 1e-12);
  CHECK(rep.lp.pass);
  CHECK(rep.lp.lhs == doctest::Approx(spatial_norm(p.grid, p.rho0, 4.0, 0)));
  CHECK(rep.lp.rhs >= rep.lp.lhs * (1.0 - 1e-12));
  CHECK(rep.linf.pass);
  CHECK(rep.linf.lhs == doctest::Approx(2.0));

  auto corrupted = rho;
  corrupted.back() *= 10.0;
  const auto bad = check_lp_estimate(corrupted, p, 4.0, 1e-12);
  CHECK_FALSE(bad.lp.pass);
  CHECK_FALSE(bad.linf.pass);
}

TEST_CASE("Lp estimate under uniform divergence") {
  const double r = 1.5;
  const DensityProblem p = make_problem(
      Grid(12, 12, -0.5, 0.5, -0.5, 0.5), [](double, double x, double y) { return Vec3{x / 2, y / 2, 0}; },
      [&](double, double, double) { return r; }, [&](double, double, double) { return r; }, 50, 2e-3);
  const auto rho = solve_continuity(p);
  const auto rep = check_lp_estimate(rho, p, 3.0, 0.0);
  // |Omega| = 1, so sup_t ||rho||_3 is attained at t = 0 and equals r.
  CHECK(rep.lp.lhs == doctest::Approx(r).epsilon(1e-12));
  CHECK(rep.lp.pass);
  CHECK(rep.linf.pass);
}

TEST_CASE("gradient estimate monitors") {
  SUBCASE("uniform density at rest") {
    const DensityProblem p = make_problem(
        unit_grid(8), [](double, double, double) { return Vec3{0, 0, 0}; }, [](double, double, double) { return 1.0; },
        [](double, double, double) { return 1.0; }, 5, 0.01);
    const auto rho = solve_continuity(p);
    const auto rep = check_gradient_estimate(rho, p, 4.0, 4.0, 0.0, 0.1);
    CHECK(rep.gradient.lhs == 0.0);
    CHECK(rep.gradient.pass);
  }
  SUBCASE("translation passes and tenfold gradient corruption fails") {
    const DensityProblem p = translation(32, 1e-3, 0.25);
    const auto rho = solve_continuity(p);
    const auto rep = check_gradient_estimate(rho, p, 4.0, 4.0, 1e-3, 0.1);
    CHECK(rep.gradient.pass);
    auto corrupted = rho;
    for (auto& r : corrupted) {
      double mean = 0.0;
      for (double v : r.values) mean += v;
      mean /= static_cast<double>(r.size());
      for (double& v : r.values) v = mean + 10.0 * (v - mean);
    }
    CHECK_FALSE(check_gradient_estimate(corrupted, p, 4.0, 4.0, 1e-3, 0.1).gradient.pass);
  }
  SUBCASE("slow inflow is rejected") {
    const DensityProblem p = make_problem(
        unit_grid(8), [](double, double, double) { return Vec3{0.2, 0, 0}; }, [](double, double, double) { return 1.0; },
        [](double, double, double) { return 1.0; }, 4, 0.01, 0.1);
    const auto rho = solve_continuity(p);
    CHECK(code_of([&] { (void)check_gradient_estimate(rho, p, 4.0, 4.0, 0.0, 0.5); }) ==
          ErrorCode::InflowSpeedBelowThreshold);
  }
  SUBCASE("the cond_p_q flag is recorded, not enforced") {
    const DensityProblem p = translation(16, 2e-3, 0.05);
    const auto rho = solve_continuity(p);
    CHECK(check_gradient_estimate(rho, p, 1.5, 4.0, 1e-3, 0.1).cond_p_q == false);
    CHECK(check_gradient_estimate(rho, p, 4.0, 4.0, 1e-3, 0.1).cond_p_q == true);
  }
}

TEST_CASE("boundary normal-derivative identity improves under refinement") {
  // Exact inflow trace: d rho / dx = -1 once the ramp has entered.
  auto mismatch = [](int n) {
    const DensityProblem p = translation(n, 0.032 / n, 0.25);
    const auto rho = solve_continuity(p);
    return check_gradient_estimate(rho, p, 4.0, 4.0, 0.0, 0.1).boundary_normal_mismatch;
  };
  const double m16 = mismatch(16);
  const double m64 = mismatch(64);
  CHECK(m64 < m16);
}

TEST_CASE("positive data and zero forcing keep the density positive") {
  const DensityProblem p = make_problem(
      unit_grid(16), [](double t, double x, double y) { return Vec3{1.0 + 0.5 * y * x, 0.3 * std::sin(3 * x) * y * (1 - y) * (1 + t), 0}; },
      [](double, double, double) { return 0.01; }, [](double t, double, double y) { return 0.01 + 5 * t * y; }, 50, 4e-3);
  for (const auto& r : solve_continuity(p)) CHECK(r.min() > 0.0);
}
