#pragma once

#include "openmhd/constitutive.hpp"
#include "openmhd/profiles.hpp"

namespace openmhd {

/// Analytic fields substituted into the full system; the residuals become
/// source terms so that the fields solve the forced problem exactly.
struct ManufacturedSolution {
  ScalarProfile rho;
  VectorProfile u;
  ScalarProfile theta;
  VectorProfile b;

  bool operator==(const ManufacturedSolution&) const = default;
};

struct PointResiduals {
  double rho = 0.0;
  Vec3 u{};
  double theta = 0.0;
  Vec3 b{};
};

/// PDE residuals of the exact fields at (t, x, y):
///   rho:   rho_t + u.grad rho + rho div u
///   u:     u_t + u.grad u - (div S(u) + curl B x B)/rho + grad theta + theta grad log rho - grad G
///   theta: theta_t + u.grad theta - kappa/(rho cv) lap theta - (S(u):D(u) + xi |curl B|^2)/(rho cv) + theta div u / cv
///   B:     B_t - xi lap B - curl(u x B)
PointResiduals manufactured_residuals(const ManufacturedSolution& ms, const ScalarProfile& gravity,
                                      const MaterialParams& m, double t, double x, double y);

}  // namespace openmhd
