#include "openmhd/density_estimates.hpp"

#include <algorithm>
#include <cmath>

#include "openmhd/error.hpp"
#include "openmhd/norms.hpp"

namespace openmhd {

namespace {

struct InflowFace {
  Side side;
  std::array<int, 2> a;
  std::array<int, 2> b;
  double length;
};

std::vector<InflowFace> inflow_faces(const Grid& g) {
  std::vector<InflowFace> out;
  for (Side side : kAllSides)
    for (int k = 0; k < g.face_count(side); ++k)
      if (g.tag(side, k) == FaceTag::Inflow)
        out.push_back({side, boundary_node(g, side, k), boundary_node(g, side, k + 1), g.face_length(side)});
  return out;
}

double node_flux_weight(const Grid& g, const VectorField& v, Side side, const std::array<int, 2>& node) {
  const Vec3 n = outward_normal(side);
  return std::max(0.0, -dot(v.at(g.index(node[0], node[1])), n));
}

double time_integral_exponent(const DensityProblem& p) {
  const auto sup = divergence_sup(p.velocity);
  const auto& times = p.velocity.times();
  double acc = 0.0;
  for (std::size_t n = 1; n < times.size(); ++n) acc += (times[n] - times[n - 1]) * std::max(sup[n - 1], sup[n]);
  return acc;
}

void check_trajectory(const std::vector<ScalarField>& rho, const DensityProblem& p) {
  if (rho.empty()) throw Error(ErrorCode::EmptyTrajectory, "density trajectory is empty");
  if (rho.size() != p.velocity.size())
    throw Error(ErrorCode::MismatchedSampling, "density trajectory and velocity history differ in length");
  for (const auto& r : rho)
    if (!r.matches(p.grid)) throw Error(ErrorCode::MismatchedSampling, "density snapshot does not match the grid");
}

void finish(EstimateCheck& c, double tol) {
  c.tol = tol;
  c.pass = c.lhs <= c.rhs * (1.0 + tol);
}

}  // namespace

DensityEstimateReport check_lp_estimate(const std::vector<ScalarField>& rho, const DensityProblem& p, double exponent,
                                        double tol) {
  check_trajectory(rho, p);
  const Grid& g = p.grid;
  const auto& times = p.velocity.times();
  const auto faces = inflow_faces(g);
  const double growth = std::exp(time_integral_exponent(p));

  DensityEstimateReport rep;
  rep.p = exponent;

  double boundary_pow = 0.0;
  double boundary_sup = 0.0;
  double k1_p = 0.0;
  double k1_inf = 0.0;
  for (std::size_t n = 1; n < times.size(); ++n) {
    const double dt = times[n] - times[n - 1];
    const ScalarField& rb = p.rho_boundary[n];
    for (const auto& f : faces) {
      const double wa = node_flux_weight(g, p.velocity.at(n), f.side, f.a);
      const double wb = node_flux_weight(g, p.velocity.at(n), f.side, f.b);
      const double ra = std::abs(rb(f.a[0], f.a[1]));
      const double rbv = std::abs(rb(f.b[0], f.b[1]));
      boundary_pow += dt * f.length * 0.5 * (std::pow(ra, exponent) * wa + std::pow(rbv, exponent) * wb);
      if (wa > 0.0) boundary_sup = std::max(boundary_sup, ra);
      if (wb > 0.0) boundary_sup = std::max(boundary_sup, rbv);
    }
    if (!p.forcing.empty()) {
      k1_p += dt * spatial_norm(g, p.forcing[n], exponent, 0);
      k1_inf += dt * p.forcing[n].max_abs();
    }
  }

  for (const auto& r : rho) {
    rep.lp.lhs = std::max(rep.lp.lhs, spatial_norm(g, r, exponent, 0));
    rep.linf.lhs = std::max(rep.linf.lhs, r.max_abs());
  }
  rep.lp.rhs = (spatial_norm(g, p.rho0, exponent, 0) + std::pow(boundary_pow, 1.0 / exponent) + k1_p) * growth;
  rep.linf.rhs = (p.rho0.max_abs() + boundary_sup + k1_inf) * growth;
  finish(rep.lp, tol);
  finish(rep.linf, tol);
  return rep;
}

DensityEstimateReport check_gradient_estimate(const std::vector<ScalarField>& rho, const DensityProblem& p,
                                              double exponent_p, double q, double tol, double inflow_threshold,
                                              double constant) {
  check_trajectory(rho, p);
  const Grid& g = p.grid;
  const auto& times = p.velocity.times();
  const auto faces = inflow_faces(g);

  for (std::size_t n = 0; n < times.size(); ++n) {
    for (const auto& f : faces) {
      for (const auto& node : {f.a, f.b}) {
        if (node_flux_weight(g, p.velocity.at(n), f.side, node) < inflow_threshold)
          throw Error(ErrorCode::InflowSpeedBelowThreshold,
                      "inflow speed below threshold at node (" + std::to_string(node[0]) + ", " + std::to_string(node[1]) + ")");
      }
    }
  }

  DensityEstimateReport rep;
  rep.p = exponent_p;
  rep.q = q;
  rep.cond_p_q = 1.0 - 2.0 / exponent_p + 1.0 / q >= 0.0;

  double exponent = 0.0;
  // rho grad(div v) source; it survives even when the brace data vanish.
  double source = 0.0;
  for (std::size_t n = 1; n < times.size(); ++n) {
    const double dt = times[n] - times[n - 1];
    const VectorField& v = p.velocity.at(n);
    const double w2 = dt * spatial_seminorm(g, v, q, 2) * rho[n].max_abs();
    exponent += dt * (p.velocity.divergence_at(n).max_abs() + spatial_seminorm(g, v, kInfinity, 1)) + w2;
    source += w2;
  }

  double vn_sup = 0.0;
  double v_sup = 0.0;
  double rb_sup = 0.0;
  double rb_q = 0.0;
  double rbt_q = 0.0;
  double rb_w1q = 0.0;
  double div_q = 0.0;
  for (std::size_t n = 0; n < times.size(); ++n) {
    const VectorField& v = p.velocity.at(n);
    const ScalarField& rb = p.rho_boundary[n];
    const ScalarField& dv = p.velocity.divergence_at(n);
    for (const auto& f : faces) {
      const Vec3 nrm = outward_normal(f.side);
      for (const auto& node : {f.a, f.b}) {
        const std::size_t k = g.index(node[0], node[1]);
        vn_sup = std::max(vn_sup, std::abs(dot(v.at(k), nrm)));
        v_sup = std::max(v_sup, norm2(v.at(k)));
        rb_sup = std::max(rb_sup, std::abs(rb[k]));
      }
      if (n == 0) continue;
      const double dt = times[n] - times[n - 1];
      const ScalarField& rb_prev = p.rho_boundary[n - 1];
      const std::size_t ka = g.index(f.a[0], f.a[1]);
      const std::size_t kb = g.index(f.b[0], f.b[1]);
      auto trap = [&](double xa, double xb) { return dt * f.length * 0.5 * (std::pow(std::abs(xa), q) + std::pow(std::abs(xb), q)); };
      rb_q += trap(rb[ka], rb[kb]);
      rbt_q += trap((rb[ka] - rb_prev[ka]) / dt, (rb[kb] - rb_prev[kb]) / dt);
      rb_w1q += trap(rb[ka], rb[kb]) + dt * f.length * std::pow(std::abs((rb[kb] - rb[ka]) / f.length), q);
      div_q += trap(dv[ka], dv[kb]);
    }
  }

  const double rho0_semi = spatial_seminorm(g, p.rho0, q, 1);
  const double brace = std::pow(rho0_semi, q) + vn_sup * rb_q + rbt_q + std::pow(v_sup, q) * rb_w1q +
                       div_q * std::pow(rb_sup, q) + std::pow(source, q);
  const double c = constant > 0.0 ? constant : kGradientEstimateConstant;

  for (const auto& r : rho) rep.gradient.lhs = std::max(rep.gradient.lhs, std::pow(spatial_seminorm(g, r, q, 1), q));
  rep.gradient.rhs = c * std::exp(exponent) * brace;
  rep.gradient.calibrated = !(constant > 0.0);
  finish(rep.gradient, tol);

  // Normal derivative reconstructed from the boundary data versus one-sided
  // differences of the computed density, on inflow nodes away from corners.
  double norm_acc = 0.0;
  double err_acc = 0.0;
  for (Side side : kAllSides) {
    const int count = g.face_count(side);
    const bool vertical = side == Side::Left || side == Side::Right;
    const double h_n = vertical ? g.hx() : g.hy();
    const double h_t = vertical ? g.hy() : g.hx();
    const Vec3 nrm = outward_normal(side);
    std::array<int, 2> step{0, 0};
    if (side == Side::Left) step = {1, 0};
    if (side == Side::Right) step = {-1, 0};
    if (side == Side::Bottom) step = {0, 1};
    if (side == Side::Top) step = {0, -1};
    for (int k = 1; k < count; ++k) {
      if (g.tag(side, k - 1) != FaceTag::Inflow || g.tag(side, k) != FaceTag::Inflow) continue;
      const auto nd = boundary_node(g, side, k);
      const auto prev_node = boundary_node(g, side, k - 1);
      const auto next_node = boundary_node(g, side, k + 1);
      for (std::size_t n = 1; n < times.size(); ++n) {
        const double dt = times[n] - times[n - 1];
        const ScalarField& rb = p.rho_boundary[n];
        const std::size_t kk = g.index(nd[0], nd[1]);
        const Vec3 v = p.velocity.at(n).at(kk);
        const double vn = dot(v, nrm);
        const double vt = vertical ? v[1] : v[0];
        const double drb_t = (rb(next_node[0], next_node[1]) - rb(prev_node[0], prev_node[1])) / (2.0 * h_t);
        const double drb_dt = (rb[kk] - p.rho_boundary[n - 1][kk]) / dt;
        const double predicted = -(drb_dt + rb[kk] * p.velocity.divergence_at(n)[kk] + vt * drb_t) / vn;
        const double r0 = rho[n](nd[0], nd[1]);
        const double r1 = rho[n](nd[0] + step[0], nd[1] + step[1]);
        const double r2 = rho[n](nd[0] + 2 * step[0], nd[1] + 2 * step[1]);
        const double measured = -(-3.0 * r0 + 4.0 * r1 - r2) / (2.0 * h_n);
        norm_acc += dt * h_t * std::pow(std::abs(predicted), q);
        err_acc += dt * h_t * std::pow(std::abs(predicted - measured), q);
      }
    }
  }
  rep.boundary_normal_norm = std::pow(norm_acc, 1.0 / q);
  rep.boundary_normal_mismatch = norm_acc > 0.0 ? std::pow(err_acc / norm_acc, 1.0 / q) : std::pow(err_acc, 1.0 / q);
  return rep;
}

}  // namespace openmhd
