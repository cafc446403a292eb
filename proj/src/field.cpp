#include "openmhd/field.hpp"

#include <algorithm>

#include "openmhd/error.hpp"

namespace openmhd {

bool ScalarField::all_finite() const noexcept {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::min() const {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "min of empty field");
  return *std::min_element(values.begin(), values.end());
}

double ScalarField::max() const {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "max of empty field");
  return *std::max_element(values.begin(), values.end());
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  for (std::size_t k = 0; k < values.size(); ++k) values[k] += o.values[k];
  return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& o) {
  for (std::size_t k = 0; k < values.size(); ++k) values[k] -= o.values[k];
  return *this;
}
ScalarField& ScalarField::operator*=(double a) {
  for (double& v : values) v *= a;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

double VectorField::max_abs() const {
  double m = 0.0;
  for (std::size_t k = 0; k < size(); ++k) m = std::max(m, norm2(at(k)));
  return m;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (int d = 0; d < 3; ++d) c[static_cast<std::size_t>(d)] += o.c[static_cast<std::size_t>(d)];
  return *this;
}
VectorField& VectorField::operator-=(const VectorField& o) {
  for (int d = 0; d < 3; ++d) c[static_cast<std::size_t>(d)] -= o.c[static_cast<std::size_t>(d)];
  return *this;
}
VectorField& VectorField::operator*=(double a) {
  for (auto& f : c) f *= a;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

ScalarField sample(const Grid& g, const std::function<double(double, double)>& f) {
  ScalarField out(g);
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i) out(i, j) = f(g.x(i), g.y(j));
  return out;
}

VectorField sample_vector(const Grid& g, const std::function<Vec3(double, double)>& f) {
  VectorField out(g);
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 0; i < g.nodes_x(); ++i) out.set(g.index(i, j), f(g.x(i), g.y(j)));
  return out;
}

}  // namespace openmhd
