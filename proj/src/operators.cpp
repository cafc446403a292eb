#include "openmhd/operators.hpp"

#include "openmhd/error.hpp"

namespace openmhd {

namespace {

void require(const Grid& g, const ScalarField& f) {
  if (!f.matches(g)) throw Error(ErrorCode::InvalidArgument, "field does not match grid");
}

// First derivative along a line of n+1 samples f(0..n) with spacing h.
template <typename Get>
double first_diff(Get f, int k, int n, double h) {
  if (k == 0) return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
  if (k == n) return (3.0 * f(n) - 4.0 * f(n - 1) + f(n - 2)) / (2.0 * h);
  return (f(k + 1) - f(k - 1)) / (2.0 * h);
}

template <typename Get>
double second_diff(Get f, int k, int n, double h) {
  const double h2 = h * h;
  if (k == 0) return (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / h2;
  if (k == n) return (2.0 * f(n) - 5.0 * f(n - 1) + 4.0 * f(n - 2) - f(n - 3)) / h2;
  return (f(k + 1) - 2.0 * f(k) + f(k - 1)) / h2;
}

}  // namespace

ScalarField d_dx(const Grid& g, const ScalarField& f) {
  require(g, f);
  ScalarField out(g);
  const int n = g.nx();
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i)
      out(i, j) = first_diff([&](int k) { return f(k, j); }, i, n, g.hx());
  return out;
}

ScalarField d_dy(const Grid& g, const ScalarField& f) {
  require(g, f);
  ScalarField out(g);
  const int n = g.ny();
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i)
      out(i, j) = first_diff([&](int k) { return f(i, k); }, j, n, g.hy());
  return out;
}

ScalarField d2_dx2(const Grid& g, const ScalarField& f) {
  require(g, f);
  ScalarField out(g);
  const int n = g.nx();
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i)
      out(i, j) = second_diff([&](int k) { return f(k, j); }, i, n, g.hx());
  return out;
}

ScalarField d2_dy2(const Grid& g, const ScalarField& f) {
  require(g, f);
  ScalarField out(g);
  const int n = g.ny();
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i)
      out(i, j) = second_diff([&](int k) { return f(i, k); }, j, n, g.hy());
  return out;
}

ScalarField d2_dxdy(const Grid& g, const ScalarField& f) { return d_dy(g, d_dx(g, f)); }

VectorField gradient(const Grid& g, const ScalarField& f) {
  VectorField out;
  out.c[0] = d_dx(g, f);
  out.c[1] = d_dy(g, f);
  out.c[2] = ScalarField(g);
  return out;
}

ScalarField divergence(const Grid& g, const VectorField& v) { return d_dx(g, v.c[0]) + d_dy(g, v.c[1]); }

VectorField curl(const Grid& g, const VectorField& v) {
  VectorField out;
  out.c[0] = d_dy(g, v.c[2]);
  out.c[1] = -1.0 * d_dx(g, v.c[2]);
  out.c[2] = d_dx(g, v.c[1]) - d_dy(g, v.c[0]);
  return out;
}

ScalarField laplacian(const Grid& g, const ScalarField& f) { return d2_dx2(g, f) + d2_dy2(g, f); }

VectorField laplacian(const Grid& g, const VectorField& v) {
  VectorField out;
  for (std::size_t d = 0; d < 3; ++d) out.c[d] = laplacian(g, v.c[d]);
  return out;
}

TensorField grad_tensor(const Grid& g, const VectorField& v) {
  TensorField t;
  for (std::size_t r = 0; r < 3; ++r) {
    t.c[3 * r + 0] = d_dx(g, v.c[r]);
    t.c[3 * r + 1] = d_dy(g, v.c[r]);
    t.c[3 * r + 2] = ScalarField(g);
  }
  return t;
}

TensorField sym_grad(const Grid& g, const VectorField& v) {
  const TensorField grad = grad_tensor(g, v);
  TensorField d(g);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t s = 0; s < 3; ++s)
      for (std::size_t k = 0; k < grad.size(); ++k)
        d.c[3 * r + s][k] = 0.5 * (grad.c[3 * r + s][k] + grad.c[3 * s + r][k]);
  return d;
}

VectorField cross(const VectorField& a, const VectorField& b) {
  VectorField out = a;
  for (std::size_t k = 0; k < a.size(); ++k) out.set(k, cross(a.at(k), b.at(k)));
  return out;
}

VectorField advect(const Grid& g, const VectorField& a, const VectorField& f) {
  VectorField out = f;
  for (std::size_t d = 0; d < 3; ++d) {
    const ScalarField fx = d_dx(g, f.c[d]);
    const ScalarField fy = d_dy(g, f.c[d]);
    for (std::size_t k = 0; k < f.size(); ++k) out.c[d][k] = a.c[0][k] * fx[k] + a.c[1][k] * fy[k];
  }
  return out;
}

}  // namespace openmhd
