#include "openmhd/norms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "openmhd/error.hpp"
#include "openmhd/operators.hpp"

namespace openmhd {

void NormSpec::validate() const {
  if (!(p > 1.0) || !(q > 1.0)) throw Error(ErrorCode::InvalidArgument, "norm exponents must lie in (1, inf]");
  if (order < 0 || order > 2) throw Error(ErrorCode::InvalidArgument, "derivative order must be 0, 1 or 2");
}

double integral_pow(const Grid& g, const ScalarField& f, double q) {
  const double cell = g.hx() * g.hy();
  double sum = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double mid = 0.25 * (f(i, j) + f(i + 1, j) + f(i, j + 1) + f(i + 1, j + 1));
      const double a = std::abs(mid);
      sum += (q == 2.0 ? a * a : std::pow(a, q)) * cell;
    }
  }
  return sum;
}

namespace {

std::vector<ScalarField> derivatives_of_order(const Grid& g, const ScalarField& f, int order) {
  switch (order) {
    case 0: return {f};
    case 1: return {d_dx(g, f), d_dy(g, f)};
    case 2: return {d2_dx2(g, f), d2_dxdy(g, f), d2_dy2(g, f)};
    default: throw Error(ErrorCode::InvalidArgument, "derivative order must be 0, 1 or 2");
  }
}

// Accumulates either sum of integrals of |.|^q, or the max magnitude for q = inf.
struct Accumulator {
  double q;
  double value = 0.0;

  void add(const Grid& g, const ScalarField& f) {
    if (std::isinf(q)) {
      value = std::max(value, f.max_abs());
    } else {
      value += integral_pow(g, f, q);
    }
  }
  [[nodiscard]] double result() const { return std::isinf(q) ? value : std::pow(value, 1.0 / q); }
};

}  // namespace

double spatial_norm(const Grid& g, const ScalarField& f, double q, int order) {
  Accumulator acc{q};
  for (int k = 0; k <= order; ++k)
    for (const auto& d : derivatives_of_order(g, f, k)) acc.add(g, d);
  return acc.result();
}

double spatial_norm(const Grid& g, const VectorField& v, double q, int order) {
  Accumulator acc{q};
  for (const auto& comp : v.c)
    for (int k = 0; k <= order; ++k)
      for (const auto& d : derivatives_of_order(g, comp, k)) acc.add(g, d);
  return acc.result();
}

double spatial_seminorm(const Grid& g, const ScalarField& f, double q, int order) {
  Accumulator acc{q};
  for (const auto& d : derivatives_of_order(g, f, order)) acc.add(g, d);
  return acc.result();
}

double spatial_seminorm(const Grid& g, const VectorField& v, double q, int order) {
  Accumulator acc{q};
  for (const auto& comp : v.c)
    for (const auto& d : derivatives_of_order(g, comp, order)) acc.add(g, d);
  return acc.result();
}

double discrete_norm(const Grid& g, const State& s, const NormSpec& spec) {
  spec.validate();
  switch (spec.field) {
    case FieldSelector::Rho: return spatial_norm(g, s.rho, spec.q, spec.order);
    case FieldSelector::U: return spatial_norm(g, s.u, spec.q, spec.order);
    case FieldSelector::Theta: return spatial_norm(g, s.theta, spec.q, spec.order);
    case FieldSelector::B: return spatial_norm(g, s.b, spec.q, spec.order);
  }
  return 0.0;
}

double discrete_space_time_norm(const Grid& g, const Trajectory& traj, const NormSpec& spec) {
  spec.validate();
  if (traj.empty()) throw Error(ErrorCode::EmptyTrajectory, "cannot take a space-time norm of an empty trajectory");
  if (spec.aggregation == TimeAggregation::SupTime || std::isinf(spec.p)) {
    double m = 0.0;
    for (const auto& s : traj) m = std::max(m, discrete_norm(g, s, spec));
    return m;
  }
  // Rectangle rule with right endpoints; the initial snapshot carries no weight.
  double sum = 0.0;
  for (std::size_t n = 1; n < traj.size(); ++n) {
    const double dt = traj[n].time - traj[n - 1].time;
    sum += dt * std::pow(discrete_norm(g, traj[n], spec), spec.p);
  }
  return std::pow(sum, 1.0 / spec.p);
}

}  // namespace openmhd
