#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "openmhd/grid.hpp"

namespace openmhd {

/// Nodal scalar values in row-major order (i fastest).
struct ScalarField {
  int nodes_x = 0;
  int nodes_y = 0;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : nodes_x(g.nodes_x()), nodes_y(g.nodes_y()), values(g.size(), fill) {}

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t k) noexcept { return values[k]; }
  double operator[](std::size_t k) const noexcept { return values[k]; }
  double& operator()(int i, int j) noexcept { return values[static_cast<std::size_t>(j * nodes_x + i)]; }
  double operator()(int i, int j) const noexcept { return values[static_cast<std::size_t>(j * nodes_x + i)]; }

  [[nodiscard]] bool matches(const Grid& g) const noexcept {
    return nodes_x == g.nodes_x() && nodes_y == g.nodes_y() && values.size() == g.size();
  }
  [[nodiscard]] bool all_finite() const noexcept;
  [[nodiscard]] double min() const;
  [[nodiscard]] double max() const;
  [[nodiscard]] double max_abs() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);

  bool operator==(const ScalarField&) const = default;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Three-component vector field on the 2D grid; the z component is carried
/// so that curl, cross products and B x n keep their three-dimensional form.
struct VectorField {
  std::array<ScalarField, 3> c;

  VectorField() = default;
  explicit VectorField(const Grid& g, Vec3 fill = {0.0, 0.0, 0.0})
      : c{ScalarField(g, fill[0]), ScalarField(g, fill[1]), ScalarField(g, fill[2])} {}

  [[nodiscard]] Vec3 at(std::size_t k) const noexcept { return {c[0][k], c[1][k], c[2][k]}; }
  void set(std::size_t k, const Vec3& v) noexcept {
    c[0][k] = v[0];
    c[1][k] = v[1];
    c[2][k] = v[2];
  }
  [[nodiscard]] std::size_t size() const noexcept { return c[0].size(); }
  [[nodiscard]] bool matches(const Grid& g) const noexcept {
    return c[0].matches(g) && c[1].matches(g) && c[2].matches(g);
  }
  [[nodiscard]] bool all_finite() const noexcept {
    return c[0].all_finite() && c[1].all_finite() && c[2].all_finite();
  }
  [[nodiscard]] double max_abs() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double a);

  bool operator==(const VectorField&) const = default;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// 3x3 tensor per node, row-major: t[3*r + s] holds entry (r, s).
struct TensorField {
  std::array<ScalarField, 9> c;

  TensorField() = default;
  explicit TensorField(const Grid& g) {
    for (auto& f : c) f = ScalarField(g);
  }
  [[nodiscard]] std::size_t size() const noexcept { return c[0].size(); }
};

using Mat3 = std::array<double, 9>;

inline Mat3 tensor_at(const TensorField& t, std::size_t k) {
  Mat3 m{};
  for (int r = 0; r < 9; ++r) m[static_cast<std::size_t>(r)] = t.c[static_cast<std::size_t>(r)][k];
  return m;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm2(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Samples f(x, y) at every node.
ScalarField sample(const Grid& g, const std::function<double(double, double)>& f);
VectorField sample_vector(const Grid& g, const std::function<Vec3(double, double)>& f);

/// Snapshot of the four unknowns at one time level.
struct State {
  double time = 0.0;
  ScalarField rho;
  VectorField u;
  ScalarField theta;
  VectorField b;

  bool operator==(const State&) const = default;
};

/// Uniformly sampled sequence of states; element 0 is the window's initial state.
using Trajectory = std::vector<State>;

}  // namespace openmhd
