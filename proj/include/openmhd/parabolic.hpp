#pragma once

#include "openmhd/constitutive.hpp"
#include "openmhd/field.hpp"
#include "openmhd/sparse.hpp"

namespace openmhd {

enum class DriftScheme { Upwind, Central };

struct ParabolicOptions {
  double tol = 1e-11;
  int max_iter = 4000;
  DriftScheme drift = DriftScheme::Upwind;
  /// Smallest admissible density in a 1/rho coefficient.
  double rho_floor = 0.0;
};

/// Frozen fields for one backward-Euler step, all taken at the new time level.
/// `gravity` is the potential G (force +grad G); forcing fields are optional.
struct LinearizedCoefficients {
  const ScalarField* rho = nullptr;
  const VectorField* v = nullptr;
  const ScalarField* theta = nullptr;
  const VectorField* b = nullptr;
  const ScalarField* gravity = nullptr;
};

/// Momentum: u/dt + v.grad u - (1/rho) div S(u) = u_prev/dt + (1/rho) curl B x B
/// - grad theta - theta grad log rho + grad G + f, Dirichlet u_B on the boundary.
SparseSystem assemble_momentum(const Grid& g, const MaterialParams& m, const LinearizedCoefficients& c,
                               const VectorField& u_prev, const VectorField& u_boundary, double dt,
                               const ParabolicOptions& opt, const VectorField* forcing = nullptr);

/// Temperature: theta/dt + v.grad theta - kappa/(rho cv) lap theta + (div v / cv) theta
/// = theta_prev/dt + (S(v):D(v) + xi |curl B|^2)/(rho cv) + f, Dirichlet theta_B.
SparseSystem assemble_temperature(const Grid& g, const MaterialParams& m, const LinearizedCoefficients& c,
                                  const ScalarField& theta_prev, const ScalarField& theta_boundary, double dt,
                                  const ParabolicOptions& opt, const ScalarField* forcing = nullptr);

/// Induction: B/dt - xi lap B = B_prev/dt + curl(v x B_prev) + f. Boundary
/// nodes take their tangential components from n x b1 and close the normal
/// component so that the discrete div B vanishes (one-sided normal difference
/// against the tangential difference of B_B along the side); corners are Dirichlet
/// in every component using the boundary field B_B, where b1 = B_B x n.
SparseSystem assemble_induction(const Grid& g, const MaterialParams& m, const LinearizedCoefficients& c,
                                const VectorField& b_prev, const VectorField& b_boundary, double dt,
                                const ParabolicOptions& opt, const VectorField* forcing = nullptr);

VectorField solve_momentum(const Grid& g, const MaterialParams& m, const LinearizedCoefficients& c,
                           const VectorField& u_prev, const VectorField& u_boundary, double dt,
                           const ParabolicOptions& opt, const VectorField* forcing = nullptr,
                           SolveStats* stats = nullptr);

ScalarField solve_temperature(const Grid& g, const MaterialParams& m, const LinearizedCoefficients& c,
                              const ScalarField& theta_prev, const ScalarField& theta_boundary, double dt,
                              const ParabolicOptions& opt, const ScalarField* forcing = nullptr,
                              SolveStats* stats = nullptr);

VectorField solve_induction(const Grid& g, const MaterialParams& m, const LinearizedCoefficients& c,
                            const VectorField& b_prev, const VectorField& b_boundary, double dt,
                            const ParabolicOptions& opt, const VectorField* forcing = nullptr,
                            SolveStats* stats = nullptr);

/// Packs and unpacks fields in the UnknownLayout order.
std::vector<double> pack(const ScalarField& f);
std::vector<double> pack(const VectorField& f);
ScalarField unpack_scalar(const Grid& g, const std::vector<double>& x);
VectorField unpack_vector(const Grid& g, const std::vector<double>& x);

}  // namespace openmhd
