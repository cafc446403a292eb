#include "openmhd/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "openmhd/error.hpp"
#include "openmhd/operators.hpp"
#include "openmhd/parallel.hpp"

namespace openmhd {

namespace {

constexpr double kTimeSlack = 1e-9;

struct CellCoord {
  int i;
  double s;
};

CellCoord locate(double p, double p0, double h, int n) {
  const double r = (p - p0) / h;
  int i = static_cast<int>(std::floor(r));
  i = std::clamp(i, 0, n - 1);
  return {i, std::clamp(r - i, 0.0, 1.0)};
}

std::array<double, 4> cubic_weights(double p) {
  return {-(p - 1.0) * (p - 2.0) * (p - 3.0) / 6.0, p * (p - 2.0) * (p - 3.0) / 2.0, -p * (p - 1.0) * (p - 3.0) / 2.0,
          p * (p - 1.0) * (p - 2.0) / 6.0};
}

double lerp(double a, double b, double w) { return a + w * (b - a); }

}  // namespace

double interpolate_bilinear(const Grid& g, const ScalarField& f, double x, double y) {
  const CellCoord cx = locate(x, g.x0(), g.hx(), g.nx());
  const CellCoord cy = locate(y, g.y0(), g.hy(), g.ny());
  const double f00 = f(cx.i, cy.i);
  const double f10 = f(cx.i + 1, cy.i);
  const double f01 = f(cx.i, cy.i + 1);
  const double f11 = f(cx.i + 1, cy.i + 1);
  return lerp(lerp(f00, f10, cx.s), lerp(f01, f11, cx.s), cy.s);
}

double interpolate_cubic_clipped(const Grid& g, const ScalarField& f, double x, double y) {
  const CellCoord cx = locate(x, g.x0(), g.hx(), g.nx());
  const CellCoord cy = locate(y, g.y0(), g.hy(), g.ny());
  const int bx = std::clamp(cx.i - 1, 0, g.nx() - 3);
  const int by = std::clamp(cy.i - 1, 0, g.ny() - 3);
  const auto wx = cubic_weights(cx.s + (cx.i - bx));
  const auto wy = cubic_weights(cy.s + (cy.i - by));
  double acc = 0.0;
  for (int b = 0; b < 4; ++b) {
    double row = 0.0;
    for (int a = 0; a < 4; ++a) row += wx[static_cast<std::size_t>(a)] * f(bx + a, by + b);
    acc += wy[static_cast<std::size_t>(b)] * row;
  }
  const double f00 = f(cx.i, cy.i);
  const double f10 = f(cx.i + 1, cy.i);
  const double f01 = f(cx.i, cy.i + 1);
  const double f11 = f(cx.i + 1, cy.i + 1);
  const double lo = std::min({f00, f10, f01, f11});
  const double hi = std::max({f00, f10, f01, f11});
  return std::clamp(acc, lo, hi);
}

VelocityHistory::VelocityHistory(const Grid& g, std::vector<double> times, std::vector<VectorField> v)
    : grid_(g), times_(std::move(times)), v_(std::move(v)) {
  if (times_.empty()) throw Error(ErrorCode::EmptyTrajectory, "velocity history has no snapshots");
  if (times_.size() != v_.size()) throw Error(ErrorCode::MismatchedSampling, "velocity snapshots and times differ in length");
  for (std::size_t n = 1; n < times_.size(); ++n)
    if (!(times_[n] > times_[n - 1])) throw Error(ErrorCode::MismatchedSampling, "velocity times must increase");
  div_.reserve(v_.size());
  for (const auto& f : v_) {
    if (!f.matches(g)) throw Error(ErrorCode::MismatchedSampling, "velocity snapshot does not match the grid");
    if (!f.all_finite()) throw Error(ErrorCode::NonFiniteValue, "velocity snapshot has non-finite values");
    div_.push_back(openmhd::divergence(g, f));
    for (std::size_t k = 0; k < f.size(); ++k) max_speed_ = std::max(max_speed_, norm2(f.at(k)));
  }
}

bool VelocityHistory::covers(double t) const noexcept {
  const double slack = kTimeSlack * std::max(1.0, std::abs(times_.back()));
  return t >= times_.front() - slack && t <= times_.back() + slack;
}

VelocityHistory::Bracket VelocityHistory::bracket(double t) const {
  if (!covers(t)) throw Error(ErrorCode::VelocityNotInterpolable, "time " + std::to_string(t) + " lies outside the velocity window");
  if (times_.size() == 1) return {0, 0.0};
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t n = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  n = std::min(n, times_.size() - 2);
  const double w = std::clamp((t - times_[n]) / (times_[n + 1] - times_[n]), 0.0, 1.0);
  return {n, w};
}

Vec3 VelocityHistory::velocity(double t, double x, double y) const {
  const Bracket b = bracket(t);
  Vec3 out{};
  for (std::size_t d = 0; d < 3; ++d) {
    const double a = interpolate_bilinear(grid_, v_[b.n].c[d], x, y);
    if (b.w == 0.0) {
      out[d] = a;
    } else {
      out[d] = lerp(a, interpolate_bilinear(grid_, v_[b.n + 1].c[d], x, y), b.w);
    }
  }
  return out;
}

double VelocityHistory::divergence(double t, double x, double y) const {
  const Bracket b = bracket(t);
  const double a = interpolate_bilinear(grid_, div_[b.n], x, y);
  if (b.w == 0.0) return a;
  return lerp(a, interpolate_bilinear(grid_, div_[b.n + 1], x, y), b.w);
}

namespace {

struct Trace {
  CharacteristicFoot foot;
  double div_integral = 0.0;
  double source = 0.0;
};

double forcing_at(const DensityProblem* p, double t, double x, double y) {
  if (p == nullptr || p->forcing.empty()) return 0.0;
  const auto& times = p->velocity.times();
  if (times.size() == 1) return interpolate_bilinear(p->grid, p->forcing[0], x, y);
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t n = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  n = std::min(n, times.size() - 2);
  const double w = std::clamp((t - times[n]) / (times[n + 1] - times[n]), 0.0, 1.0);
  return lerp(interpolate_bilinear(p->grid, p->forcing[n], x, y), interpolate_bilinear(p->grid, p->forcing[n + 1], x, y), w);
}

int substeps(const VelocityHistory& v, double dt) {
  const double cfl = v.max_speed() * dt / v.grid().min_spacing();
  return cfl > 2.0 ? static_cast<int>(std::ceil(cfl / 2.0)) : 1;
}

// Walks back from (x, t) over dt; accumulates the divergence integral and,
// when a problem is given, the exponentially weighted source integral.
Trace trace_back(double x, double y, double t, const VelocityHistory& v, double dt, const DensityProblem* problem) {
  const Grid& g = v.grid();
  if (!v.covers(t) || !v.covers(t - dt))
    throw Error(ErrorCode::VelocityNotInterpolable, "backtracking interval leaves the velocity window");
  const int m = substeps(v, dt);
  const double delta = dt / m;
  const double slack = 1e-12 * std::max({1.0, std::abs(g.x1() - g.x0()), std::abs(g.y1() - g.y0())});

  Trace out;
  double px = x;
  double py = y;
  double tau = t;
  for (int k = 0; k < m; ++k) {
    const Vec3 v1 = v.velocity(tau, px, py);
    const double mx = px - 0.5 * delta * v1[0];
    const double my = py - 0.5 * delta * v1[1];
    const Vec3 v2 = v.velocity(tau - 0.5 * delta, mx, my);
    const double qx = px - delta * v2[0];
    const double qy = py - delta * v2[1];

    if (g.contains(qx, qy, slack)) {
      const double d = v.divergence(tau - 0.5 * delta, mx, my);
      out.source += delta * forcing_at(problem, tau - 0.5 * delta, mx, my) * std::exp(-(out.div_integral + 0.5 * delta * d));
      out.div_integral += delta * d;
      px = std::clamp(qx, g.x0(), g.x1());
      py = std::clamp(qy, g.y0(), g.y1());
      tau -= delta;
      continue;
    }

    double s = 2.0;
    Side side = Side::Left;
    auto consider = [&](double from, double to, double bound, Side sd) {
      const double frac = std::clamp((from - bound) / (from - to), 0.0, 1.0);
      if (frac < s) {
        s = frac;
        side = sd;
      }
    };
    if (qx < g.x0()) consider(px, qx, g.x0(), Side::Left);
    if (qx > g.x1()) consider(px, qx, g.x1(), Side::Right);
    if (qy < g.y0()) consider(py, qy, g.y0(), Side::Bottom);
    if (qy > g.y1()) consider(py, qy, g.y1(), Side::Top);
    s = std::min(s, 1.0);

    const double part = s * delta;
    const double cx = std::clamp(px + s * (qx - px), g.x0(), g.x1());
    const double cy = std::clamp(py + s * (qy - py), g.y0(), g.y1());
    const double hx = 0.5 * (px + cx);
    const double hy = 0.5 * (py + cy);
    const double d = part > 0.0 ? v.divergence(tau - 0.5 * part, hx, hy) : 0.0;
    out.source += part * forcing_at(problem, tau - 0.5 * part, hx, hy) * std::exp(-(out.div_integral + 0.5 * part * d));
    out.div_integral += part * d;
    BoundaryCrossing bc;
    bc.side = side;
    bc.face = g.face_at(side, cx, cy);
    bc.time = tau - part;
    bc.x = cx;
    bc.y = cy;
    out.foot = bc;
    return out;
  }
  out.foot = InteriorFoot{px, py};
  return out;
}

double boundary_density(const DensityProblem& p, const BoundaryCrossing& bc, std::size_t n) {
  const Grid& g = p.grid;
  const auto a = boundary_node(g, bc.side, bc.face);
  const auto b = boundary_node(g, bc.side, bc.face + 1);
  const bool vertical = bc.side == Side::Left || bc.side == Side::Right;
  const double s = vertical ? (bc.y - g.y(a[1])) / g.hy() : (bc.x - g.x(a[0])) / g.hx();
  const auto& times = p.velocity.times();
  const double w = std::clamp((bc.time - times[n]) / (times[n + 1] - times[n]), 0.0, 1.0);
  const double r0 = lerp(p.rho_boundary[n](a[0], a[1]), p.rho_boundary[n](b[0], b[1]), s);
  const double r1 = lerp(p.rho_boundary[n + 1](a[0], a[1]), p.rho_boundary[n + 1](b[0], b[1]), s);
  return lerp(r0, r1, w);
}

}  // namespace

CharacteristicFoot backtrack_characteristic(double x, double y, double t, const VelocityHistory& v, double dt) {
  return trace_back(x, y, t, v, dt, nullptr).foot;
}

double DensityProblem::dt() const {
  const auto& t = velocity.times();
  return t.size() > 1 ? t[1] - t[0] : 0.0;
}

void DensityProblem::validate() const {
  const std::size_t levels = velocity.size();
  if (levels < 2) throw Error(ErrorCode::EmptyTrajectory, "density problem needs at least one time step");
  if (!(grid == velocity.grid())) throw Error(ErrorCode::MismatchedSampling, "velocity history uses a different grid");
  if (!rho0.matches(grid)) throw Error(ErrorCode::MismatchedSampling, "rho0 does not match the grid");
  if (rho_boundary.size() != levels)
    throw Error(ErrorCode::MismatchedSampling, "rho_boundary needs one snapshot per velocity time level");
  if (!forcing.empty() && forcing.size() != levels)
    throw Error(ErrorCode::MismatchedSampling, "forcing needs one snapshot per velocity time level");
  for (const auto& f : rho_boundary)
    if (!f.matches(grid)) throw Error(ErrorCode::MismatchedSampling, "rho_boundary snapshot does not match the grid");
  for (const auto& f : forcing)
    if (!f.matches(grid)) throw Error(ErrorCode::MismatchedSampling, "forcing snapshot does not match the grid");
  if (!rho0.all_finite()) throw Error(ErrorCode::NonFiniteValue, "rho0 has non-finite values");
  if (!(rho0.min() > 0.0)) throw Error(ErrorCode::NonPositiveData, "rho0 must be positive");
  for (int j = 0; j < grid.nodes_y(); ++j) {
    for (int i = 0; i < grid.nodes_x(); ++i) {
      if (!grid.on_boundary(i, j) || !grid.is_inflow_node(i, j)) continue;
      for (const auto& f : rho_boundary)
        if (!(f(i, j) > 0.0)) throw Error(ErrorCode::NonPositiveData, "rho_B must be positive on inflow faces");
      const double gap = std::abs(rho0(i, j) - rho_boundary[0](i, j));
      if (gap > compatibility_tol * (1.0 + std::abs(rho0(i, j))))
        throw Error(ErrorCode::CompatibilityViolated, "rho0 differs from rho_B at the window start on an inflow node");
    }
  }
}

std::vector<ScalarField> solve_continuity(const DensityProblem& p) {
  p.validate();
  const Grid& g = p.grid;
  const auto& times = p.velocity.times();
  const std::size_t steps = p.steps();
  std::vector<ScalarField> out;
  out.reserve(steps + 1);
  out.push_back(p.rho0);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = times[n + 1];
    const double dt = times[n + 1] - times[n];
    const ScalarField& prev = out.back();
    ScalarField next(g);
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        const int i = static_cast<int>(k % static_cast<std::size_t>(g.nodes_x()));
        const int j = static_cast<int>(k / static_cast<std::size_t>(g.nodes_x()));
        if (g.on_boundary(i, j) && g.is_inflow_node(i, j)) {
          next[k] = p.rho_boundary[n + 1][k];
          continue;
        }
        const Trace tr = trace_back(g.x(i), g.y(j), t, p.velocity, dt, &p);
        double foot = 0.0;
        if (const auto* in = std::get_if<InteriorFoot>(&tr.foot)) {
          foot = in->x == g.x(i) && in->y == g.y(j) ? prev[k] : interpolate_cubic_clipped(g, prev, in->x, in->y);
        } else {
          const auto& bc = std::get<BoundaryCrossing>(tr.foot);
          if (g.tag(bc.side, bc.face) != FaceTag::Inflow)
            throw Error(ErrorCode::CharacteristicEntersThroughNonInflow,
                        std::string("characteristic from node (") + std::to_string(i) + ", " + std::to_string(j) +
                            ") leaves through a " + to_string(g.tag(bc.side, bc.face)) + " face on the " +
                            to_string(bc.side) + " side");
          foot = boundary_density(p, bc, n);
        }
        next[k] = foot * std::exp(-tr.div_integral) + tr.source;
      }
    });
    if (!next.all_finite()) throw Error(ErrorCode::NonFiniteValue, "density update produced non-finite values");
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<ScalarField> solve_continuity_upwind(const DensityProblem& p) {
  p.validate();
  const Grid& g = p.grid;
  const auto& times = p.velocity.times();
  std::vector<ScalarField> out;
  out.push_back(p.rho0);
  double max_div = 0.0;
  for (std::size_t n = 0; n < times.size(); ++n) max_div = std::max(max_div, p.velocity.divergence_at(n).max_abs());

  for (std::size_t n = 0; n + 1 < times.size(); ++n) {
    const double dt = times[n + 1] - times[n];
    const double rate = p.velocity.max_speed() / g.min_spacing() + max_div;
    const int m = std::max(1, static_cast<int>(std::ceil(dt * rate / 0.5)));
    const double delta = dt / m;
    ScalarField rho = out.back();
    for (int s = 0; s < m; ++s) {
      const double w0 = static_cast<double>(s) / m;
      const double w1 = static_cast<double>(s + 1) / m;
      ScalarField next(g);
      for (int j = 0; j < g.nodes_y(); ++j) {
        for (int i = 0; i < g.nodes_x(); ++i) {
          const std::size_t k = g.index(i, j);
          if (g.on_boundary(i, j) && g.is_inflow_node(i, j)) {
            next[k] = lerp(p.rho_boundary[n][k], p.rho_boundary[n + 1][k], w1);
            continue;
          }
          const double vx = lerp(p.velocity.at(n).c[0][k], p.velocity.at(n + 1).c[0][k], w0);
          const double vy = lerp(p.velocity.at(n).c[1][k], p.velocity.at(n + 1).c[1][k], w0);
          const double dv = lerp(p.velocity.divergence_at(n)[k], p.velocity.divergence_at(n + 1)[k], w0);
          double rx = 0.0;
          if ((vx > 0.0 && i > 0) || i == g.nx()) {
            rx = (rho(i, j) - rho(i - 1, j)) / g.hx();
          } else {
            rx = (rho(i + 1, j) - rho(i, j)) / g.hx();
          }
          double ry = 0.0;
          if ((vy > 0.0 && j > 0) || j == g.ny()) {
            ry = (rho(i, j) - rho(i, j - 1)) / g.hy();
          } else {
            ry = (rho(i, j + 1) - rho(i, j)) / g.hy();
          }
          double f = 0.0;
          if (!p.forcing.empty()) f = lerp(p.forcing[n][k], p.forcing[n + 1][k], w0);
          next[k] = rho[k] + delta * (-vx * rx - vy * ry - rho[k] * dv + f);
        }
      }
      rho = std::move(next);
    }
    out.push_back(std::move(rho));
  }
  return out;
}

std::vector<double> divergence_sup(const VelocityHistory& v) {
  std::vector<double> out(v.size());
  for (std::size_t n = 0; n < v.size(); ++n) out[n] = v.divergence_at(n).max_abs();
  return out;
}

DensityBounds density_minmax_bounds(const DensityProblem& p, const std::vector<double>& div_sup) {
  const std::size_t levels = p.velocity.size();
  if (div_sup.size() != levels) throw Error(ErrorCode::MismatchedSampling, "div_sup needs one entry per time level");
  const Grid& g = p.grid;
  const auto& times = p.velocity.times();

  double m = p.rho0.min();
  double big = p.rho0.max();
  auto absorb_boundary = [&](std::size_t n) {
    for (int j = 0; j < g.nodes_y(); ++j)
      for (int i = 0; i < g.nodes_x(); ++i)
        if (g.on_boundary(i, j) && g.is_inflow_node(i, j)) {
          m = std::min(m, p.rho_boundary[n](i, j));
          big = std::max(big, p.rho_boundary[n](i, j));
        }
  };

  std::vector<double> integral(levels, 0.0);
  std::vector<double> fpos(levels, 0.0);
  std::vector<double> fneg(levels, 0.0);
  for (std::size_t n = 1; n < levels; ++n) {
    const double dt = times[n] - times[n - 1];
    integral[n] = integral[n - 1] + dt * std::max(div_sup[n - 1], div_sup[n]);
    if (!p.forcing.empty()) {
      fpos[n] = std::max({0.0, p.forcing[n - 1].max(), p.forcing[n].max()});
      fneg[n] = std::max({0.0, -p.forcing[n - 1].min(), -p.forcing[n].min()});
    }
  }

  DensityBounds out;
  out.lower.resize(levels);
  out.upper.resize(levels);
  for (std::size_t n = 0; n < levels; ++n) {
    absorb_boundary(n);
    double up = big * std::exp(integral[n]);
    double lo = m * std::exp(-integral[n]);
    for (std::size_t k = 1; k <= n; ++k) {
      const double dt = times[k] - times[k - 1];
      const double growth = std::exp(integral[n] - integral[k - 1]);
      up += dt * fpos[k] * growth;
      lo -= dt * fneg[k] * growth;
    }
    out.lower[n] = lo;
    out.upper[n] = up;
  }
  return out;
}

}  // namespace openmhd
