#pragma once

#include "openmhd/field.hpp"
#include "openmhd/grid.hpp"

namespace openmhd {

// Finite-difference operators on the node grid. Interior nodes use
// second-order central differences; boundary nodes use second-order
// one-sided stencils. Derivatives along z vanish identically.

ScalarField d_dx(const Grid& g, const ScalarField& f);
ScalarField d_dy(const Grid& g, const ScalarField& f);
ScalarField d2_dx2(const Grid& g, const ScalarField& f);
ScalarField d2_dy2(const Grid& g, const ScalarField& f);
ScalarField d2_dxdy(const Grid& g, const ScalarField& f);

VectorField gradient(const Grid& g, const ScalarField& f);
ScalarField divergence(const Grid& g, const VectorField& v);
VectorField curl(const Grid& g, const VectorField& v);
ScalarField laplacian(const Grid& g, const ScalarField& f);
VectorField laplacian(const Grid& g, const VectorField& v);

/// Full velocity gradient, entry (r, s) = d u_r / d x_s.
TensorField grad_tensor(const Grid& g, const VectorField& v);
/// Symmetric part of the velocity gradient.
TensorField sym_grad(const Grid& g, const VectorField& v);

/// Pointwise cross product a x b.
VectorField cross(const VectorField& a, const VectorField& b);
/// Pointwise a . grad(f) for every component of f.
VectorField advect(const Grid& g, const VectorField& a, const VectorField& f);

}  // namespace openmhd
