#include "openmhd/constitutive.hpp"

#include <string>
#include <vector>

#include "openmhd/error.hpp"
#include "openmhd/operators.hpp"

namespace openmhd {

void MaterialParams::validate() const {
  std::vector<std::string> bad;
  if (!(mu > 0.0)) bad.emplace_back("mu must be > 0");
  if (!(lambda >= 0.0)) bad.emplace_back("lambda must be >= 0");
  if (!(kappa > 0.0)) bad.emplace_back("kappa must be > 0");
  if (!(cv > 0.0)) bad.emplace_back("cv must be > 0");
  if (!(xi > 0.0)) bad.emplace_back("xi must be > 0");
  if (d_eff < 1) bad.emplace_back("d_eff must be >= 1");
  if (!bad.empty()) throw ConfigError(ErrorCode::InvalidArgument, bad);
}

double pressure(double rho, double theta) { return rho * theta; }

Mat3 stress(const Mat3& grad_u, const MaterialParams& params) {
  const double div = grad_u[0] + grad_u[4] + grad_u[8];
  const double iso = (params.lambda - 2.0 * params.mu / params.d_eff) * div;
  Mat3 s{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const auto rc = static_cast<std::size_t>(3 * r + c);
      const auto cr = static_cast<std::size_t>(3 * c + r);
      s[rc] = params.mu * (grad_u[rc] + grad_u[cr]);
      if (r == c) s[rc] += iso;
    }
  }
  return s;
}

double double_contraction(const Mat3& s, const Mat3& d) {
  double acc = 0.0;
  for (std::size_t k = 0; k < 9; ++k) acc += s[k] * d[k];
  return acc;
}

ScalarField pressure(const ScalarField& rho, const ScalarField& theta) {
  ScalarField p = rho;
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = pressure(rho[k], theta[k]);
  return p;
}

TensorField stress(const TensorField& grad_u, const MaterialParams& params) {
  TensorField s = grad_u;
  for (std::size_t k = 0; k < grad_u.size(); ++k) {
    const Mat3 m = stress(tensor_at(grad_u, k), params);
    for (std::size_t r = 0; r < 9; ++r) s.c[r][k] = m[r];
  }
  return s;
}

ScalarField viscous_dissipation(const TensorField& s, const TensorField& d) {
  ScalarField out = s.c[0];
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = double_contraction(tensor_at(s, k), tensor_at(d, k));
  return out;
}

ScalarField viscous_dissipation(const Grid& g, const VectorField& u, const MaterialParams& params) {
  const TensorField grad = grad_tensor(g, u);
  return viscous_dissipation(stress(grad, params), sym_grad(g, u));
}

VectorField lorentz_force(const Grid& g, const VectorField& b) { return cross(curl(g, b), b); }

ScalarField joule_heating(const Grid& g, const VectorField& b, const MaterialParams& params) {
  const VectorField j = curl(g, b);
  ScalarField out(g);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Vec3 jk = j.at(k);
    out[k] = params.xi * dot(jk, jk);
  }
  return out;
}

VectorField heat_flux(const Grid& g, const ScalarField& theta, const MaterialParams& params) {
  return -params.kappa * gradient(g, theta);
}

VectorField div_stress(const Grid& g, const VectorField& u, const MaterialParams& params) {
  const double grad_div = params.mu * (1.0 - 2.0 / params.d_eff) + params.lambda;
  const ScalarField uxx = d2_dx2(g, u.c[0]);
  const ScalarField uxy = d2_dxdy(g, u.c[0]);
  const ScalarField vxy = d2_dxdy(g, u.c[1]);
  const ScalarField vyy = d2_dy2(g, u.c[1]);
  VectorField out = params.mu * laplacian(g, u);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.c[0][k] += grad_div * (uxx[k] + vxy[k]);
    out.c[1][k] += grad_div * (uxy[k] + vyy[k]);
  }
  return out;
}

}  // namespace openmhd
