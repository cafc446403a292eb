#include "openmhd/manufactured.hpp"

namespace openmhd {

PointResiduals manufactured_residuals(const ManufacturedSolution& ms, const ScalarProfile& gravity,
                                      const MaterialParams& m, double t, double x, double y) {
  const Jet r = ms.rho.jet(t, x, y);
  const auto u = ms.u.jet(t, x, y);
  const Jet th = ms.theta.jet(t, x, y);
  const auto b = ms.b.jet(t, x, y);
  const Jet gj = gravity.jet(t, x, y);

  const double div_u = u[0].dx + u[1].dy;
  auto adv = [&](const Jet& f) { return u[0].v * f.dx + u[1].v * f.dy; };
  auto lap = [](const Jet& f) { return f.dxx + f.dyy; };

  PointResiduals out;
  out.rho = r.dt + adv(r) + r.v * div_u;

  // grad u entry (a, s) = d u_a / d x_s, with d/dz = 0.
  Mat3 grad{};
  for (std::size_t a = 0; a < 3; ++a) {
    grad[3 * a + 0] = u[a].dx;
    grad[3 * a + 1] = u[a].dy;
  }
  const Mat3 s = stress(grad, m);
  Mat3 d{};
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t c = 0; c < 3; ++c) d[3 * a + c] = 0.5 * (grad[3 * a + c] + grad[3 * c + a]);

  const double grad_div = m.mu * (1.0 - 2.0 / m.d_eff) + m.lambda;
  const Vec3 ddiv{u[0].dxx + u[1].dxy, u[0].dxy + u[1].dyy, 0.0};
  const Vec3 curl_b{b[2].dy, -b[2].dx, b[1].dx - b[0].dy};
  const Vec3 bv{b[0].v, b[1].v, b[2].v};
  const Vec3 lorentz = cross(curl_b, bv);
  const Vec3 grad_theta{th.dx, th.dy, 0.0};
  const Vec3 grad_log_rho{r.dx / r.v, r.dy / r.v, 0.0};
  const Vec3 grad_g{gj.dx, gj.dy, 0.0};
  for (std::size_t a = 0; a < 3; ++a) {
    const double div_s = m.mu * lap(u[a]) + grad_div * ddiv[a];
    out.u[a] = u[a].dt + adv(u[a]) - (div_s + lorentz[a]) / r.v + grad_theta[a] + th.v * grad_log_rho[a] - grad_g[a];
  }

  const double w = 1.0 / (r.v * m.cv);
  out.theta = th.dt + adv(th) - m.kappa * w * lap(th) - w * (double_contraction(s, d) + m.xi * dot(curl_b, curl_b)) +
              th.v * div_u / m.cv;

  // curl(u x B) = u div B - B div u + (B.grad) u - (u.grad) B
  const double div_b = b[0].dx + b[1].dy;
  for (std::size_t a = 0; a < 3; ++a) {
    const double b_grad_u = b[0].v * u[a].dx + b[1].v * u[a].dy;
    const double curl_uxb = u[a].v * div_b - b[a].v * div_u + b_grad_u - adv(b[a]);
    out.b[a] = b[a].dt - m.xi * lap(b[a]) - curl_uxb;
  }
  return out;
}

}  // namespace openmhd
