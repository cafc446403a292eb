#pragma once

#include "openmhd/field.hpp"

namespace openmhd {

/// Material constants of the fluid. d_eff is the dimension entering the
/// deviatoric factor 2/d of the viscous stress; vectors carry three
/// components, so it stays 3 on the 2D grid.
struct MaterialParams {
  double mu = 1.0;      // shear viscosity
  double lambda = 0.0;  // bulk viscosity
  double kappa = 1.0;   // heat conductivity
  double cv = 1.0;      // specific heat at constant volume
  double xi = 1.0;      // magnetic resistivity
  int d_eff = 3;

  /// Throws InvalidArgument listing every violated bound.
  void validate() const;

  bool operator==(const MaterialParams&) const = default;
};

// Pointwise laws.
double pressure(double rho, double theta);
/// S = mu (2 D - (2/d) div u I) + lambda div u I, with D = sym(grad_u).
Mat3 stress(const Mat3& grad_u, const MaterialParams& params);
/// Frobenius product S : D.
double double_contraction(const Mat3& s, const Mat3& d);

// Field versions.
ScalarField pressure(const ScalarField& rho, const ScalarField& theta);
TensorField stress(const TensorField& grad_u, const MaterialParams& params);
ScalarField viscous_dissipation(const TensorField& s, const TensorField& d);
/// S(u) : D(u) computed from a velocity field.
ScalarField viscous_dissipation(const Grid& g, const VectorField& u, const MaterialParams& params);
/// curl B x B
VectorField lorentz_force(const Grid& g, const VectorField& b);
/// xi |curl B|^2
ScalarField joule_heating(const Grid& g, const VectorField& b, const MaterialParams& params);
/// q = -kappa grad theta
VectorField heat_flux(const Grid& g, const ScalarField& theta, const MaterialParams& params);
/// div S(u) = mu lap u + (mu (1 - 2/d) + lambda) grad div u, using compact
/// second-derivative stencils (the same ones the implicit momentum matrix uses).
VectorField div_stress(const Grid& g, const VectorField& u, const MaterialParams& params);

}  // namespace openmhd
