#pragma once

#include <array>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "openmhd/field.hpp"

namespace openmhd {

/// Value and derivatives of a scalar function of (t, x, y) at one point.
struct Jet {
  double v = 0.0;
  double dt = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double dxx = 0.0;
  double dxy = 0.0;
  double dyy = 0.0;

  Jet& operator+=(const Jet& o);
};

namespace profile {

struct Constant {
  double value = 0.0;
  bool operator==(const Constant&) const = default;
};

/// c0 + cx x + cy y + ct t
struct Affine {
  double c0 = 0.0, cx = 0.0, cy = 0.0, ct = 0.0;
  bool operator==(const Affine&) const = default;
};

/// c0 + cx x + cy y + cxx x^2 + cxy x y + cyy y^2
struct Quadratic {
  double c0 = 0.0, cx = 0.0, cy = 0.0, cxx = 0.0, cxy = 0.0, cyy = 0.0;
  bool operator==(const Quadratic&) const = default;
};

/// offset + amplitude sin(pi kx x + phase_x) sin(pi ky y + phase_y) exp(-decay t) cos(omega t + time_phase)
struct Mode {
  double offset = 0.0, amplitude = 1.0;
  double kx = 0.0, ky = 0.0, phase_x = 0.0, phase_y = 0.0;
  double decay = 0.0, omega = 0.0, time_phase = 0.0;
  bool operator==(const Mode&) const = default;
};

/// base + slope max(0, t - (x - origin) / speed): a linear ramp emitted from
/// the line x = origin and carried along +x at the given speed.
struct Front {
  double base = 1.0, slope = 1.0, speed = 1.0, origin = 0.0;
  bool operator==(const Front&) const = default;
};

}  // namespace profile

/// Named analytic function family with numeric parameters; `sum` composes.
class ScalarProfile {
 public:
  struct Sum {
    std::vector<ScalarProfile> terms;
    bool operator==(const Sum&) const = default;
  };
  using Variant = std::variant<profile::Constant, profile::Affine, profile::Quadratic, profile::Mode, profile::Front, Sum>;

  ScalarProfile() : v_(profile::Constant{}) {}
  template <class T>
    requires(!std::is_same_v<std::decay_t<T>, ScalarProfile> && std::is_constructible_v<Variant, T>)
  ScalarProfile(T&& v) : v_(std::forward<T>(v)) {}  // NOLINT(google-explicit-constructor)
  static ScalarProfile constant(double c) { return ScalarProfile(profile::Constant{c}); }

  [[nodiscard]] Jet jet(double t, double x, double y) const;
  [[nodiscard]] double operator()(double t, double x, double y) const { return jet(t, x, y).v; }
  [[nodiscard]] const Variant& variant() const noexcept { return v_; }

  bool operator==(const ScalarProfile&) const = default;

 private:
  Variant v_;
};

struct VectorProfile {
  std::array<ScalarProfile, 3> c;

  static VectorProfile constant(const Vec3& v) {
    return {{ScalarProfile::constant(v[0]), ScalarProfile::constant(v[1]), ScalarProfile::constant(v[2])}};
  }
  [[nodiscard]] Vec3 operator()(double t, double x, double y) const { return {c[0](t, x, y), c[1](t, x, y), c[2](t, x, y)}; }
  [[nodiscard]] std::array<Jet, 3> jet(double t, double x, double y) const {
    return {c[0].jet(t, x, y), c[1].jet(t, x, y), c[2].jet(t, x, y)};
  }

  bool operator==(const VectorProfile&) const = default;
};

ScalarField sample(const Grid& g, const ScalarProfile& p, double t);
VectorField sample(const Grid& g, const VectorProfile& p, double t);

void to_json(nlohmann::json& j, const ScalarProfile& p);
void from_json(const nlohmann::json& j, ScalarProfile& p);
void to_json(nlohmann::json& j, const VectorProfile& p);
void from_json(const nlohmann::json& j, VectorProfile& p);

}  // namespace openmhd
