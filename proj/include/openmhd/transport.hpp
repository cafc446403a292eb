#pragma once

#include <variant>
#include <vector>

#include "openmhd/field.hpp"
#include "openmhd/grid.hpp"

namespace openmhd {

/// Velocity snapshots on a uniform time axis, interpolated bilinearly in
/// space and linearly in time. Divergence snapshots are precomputed.
class VelocityHistory {
 public:
  VelocityHistory(const Grid& g, std::vector<double> times, std::vector<VectorField> v);

  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
  [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
  [[nodiscard]] const VectorField& at(std::size_t n) const { return v_[n]; }
  [[nodiscard]] const ScalarField& divergence_at(std::size_t n) const { return div_[n]; }

  /// Positions outside the rectangle are clamped onto it.
  [[nodiscard]] Vec3 velocity(double t, double x, double y) const;
  [[nodiscard]] double divergence(double t, double x, double y) const;
  [[nodiscard]] bool covers(double t) const noexcept;
  /// Largest nodal speed over all snapshots.
  [[nodiscard]] double max_speed() const noexcept { return max_speed_; }

 private:
  struct Bracket {
    std::size_t n;
    double w;
  };
  [[nodiscard]] Bracket bracket(double t) const;

  Grid grid_;
  std::vector<double> times_;
  std::vector<VectorField> v_;
  std::vector<ScalarField> div_;
  double max_speed_ = 0.0;
};

/// Bilinear interpolation of nodal values; the point is clamped onto the grid.
double interpolate_bilinear(const Grid& g, const ScalarField& f, double x, double y);
/// Tensor-product cubic Lagrange interpolation (stencil shifted inward near
/// the boundary), clipped to the range of the four enclosing nodes.
double interpolate_cubic_clipped(const Grid& g, const ScalarField& f, double x, double y);

struct InteriorFoot {
  double x = 0.0;
  double y = 0.0;
};

struct BoundaryCrossing {
  Side side = Side::Left;
  int face = 0;
  double time = 0.0;
  double x = 0.0;
  double y = 0.0;
};

using CharacteristicFoot = std::variant<InteriorFoot, BoundaryCrossing>;

/// Follows dX/ds = v(s, X) backward from (x, t) over dt with explicit
/// midpoint steps (one step unless max|v| dt exceeds 2 min(h)). A path that
/// leaves the rectangle stops at the first boundary face it crosses; the
/// crossing time is interpolated linearly along the step.
CharacteristicFoot backtrack_characteristic(double x, double y, double t, const VelocityHistory& v, double dt);

struct DensityProblem {
  Grid grid;  ///< carries the inflow/outflow/wall face tags
  VelocityHistory velocity;
  ScalarField rho0;
  /// Boundary density snapshots, one per velocity time level; only values
  /// at inflow nodes are read.
  std::vector<ScalarField> rho_boundary;
  /// Source snapshots; empty means f = 0.
  std::vector<ScalarField> forcing;
  double compatibility_tol = 1e-8;

  [[nodiscard]] double dt() const;
  [[nodiscard]] std::size_t steps() const { return velocity.size() - 1; }
  void validate() const;
};

/// Semi-Lagrangian solve. Returns one density field per time level,
/// element 0 being rho0.
std::vector<ScalarField> solve_continuity(const DensityProblem& problem);

/// Explicit first-order upwind finite differences with internal sub-steps
/// (CFL 0.5). Independent cross-check for solve_continuity.
std::vector<ScalarField> solve_continuity_upwind(const DensityProblem& problem);

/// Per-level supremum of |div v| for each velocity snapshot.
std::vector<double> divergence_sup(const VelocityHistory& v);

struct DensityBounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Streamline min/max envelope: m exp(-int ||div v||) and M exp(int ||div v||),
/// where m, M range over rho0 and the inflow data seen so far. Nonzero
/// forcing widens each side by the accumulated sup of its sign part.
DensityBounds density_minmax_bounds(const DensityProblem& problem, const std::vector<double>& div_sup);

}  // namespace openmhd
