#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace openmhd {

using Vec3 = std::array<double, 3>;

enum class FaceTag { Inflow, Outflow, Wall };
enum class Side { Left = 0, Right = 1, Bottom = 2, Top = 3 };

inline constexpr std::array<Side, 4> kAllSides{Side::Left, Side::Right, Side::Bottom, Side::Top};

const char* to_string(FaceTag tag);
const char* to_string(Side side);

/// Outward unit normal of a side of the rectangle.
Vec3 outward_normal(Side side);

/// Uniform node-centred mesh over a rectangle. Values live on the
/// (nx+1) x (ny+1) nodes, so boundary nodes carry Dirichlet data directly.
/// Boundary faces are the edges between consecutive boundary nodes; each one
/// carries a FaceTag fixed for the duration of a fixed-point window.
class Grid {
 public:
  Grid() = default;
  Grid(int nx, int ny, double x0, double x1, double y0, double y1);

  [[nodiscard]] int nx() const noexcept { return nx_; }
  [[nodiscard]] int ny() const noexcept { return ny_; }
  [[nodiscard]] int nodes_x() const noexcept { return nx_ + 1; }
  [[nodiscard]] int nodes_y() const noexcept { return ny_ + 1; }
  [[nodiscard]] std::size_t size() const noexcept {
    return static_cast<std::size_t>(nx_ + 1) * static_cast<std::size_t>(ny_ + 1);
  }
  [[nodiscard]] double hx() const noexcept { return hx_; }
  [[nodiscard]] double hy() const noexcept { return hy_; }
  [[nodiscard]] double x0() const noexcept { return x0_; }
  [[nodiscard]] double x1() const noexcept { return x0_ + nx_ * hx_; }
  [[nodiscard]] double y0() const noexcept { return y0_; }
  [[nodiscard]] double y1() const noexcept { return y0_ + ny_ * hy_; }
  [[nodiscard]] double area() const noexcept { return (x1() - x0_) * (y1() - y0_); }
  [[nodiscard]] double min_spacing() const noexcept { return hx_ < hy_ ? hx_ : hy_; }

  [[nodiscard]] std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_ + 1) + static_cast<std::size_t>(i);
  }
  [[nodiscard]] double x(int i) const noexcept { return x0_ + i * hx_; }
  [[nodiscard]] double y(int j) const noexcept { return y0_ + j * hy_; }
  [[nodiscard]] bool on_boundary(int i, int j) const noexcept {
    return i == 0 || j == 0 || i == nx_ || j == ny_;
  }
  [[nodiscard]] bool contains(double px, double py, double slack = 0.0) const noexcept {
    return px >= x0_ - slack && px <= x1() + slack && py >= y0_ - slack && py <= y1() + slack;
  }

  // Boundary faces. Left/Right sides have ny faces indexed by j, Bottom/Top
  // have nx faces indexed by i; face k spans nodes k and k+1 along the side.
  [[nodiscard]] int face_count(Side side) const noexcept {
    return (side == Side::Left || side == Side::Right) ? ny_ : nx_;
  }
  [[nodiscard]] std::array<double, 2> face_midpoint(Side side, int k) const noexcept;
  [[nodiscard]] double face_length(Side side) const noexcept {
    return (side == Side::Left || side == Side::Right) ? hy_ : hx_;
  }
  [[nodiscard]] FaceTag tag(Side side, int k) const { return tags_[static_cast<int>(side)][static_cast<std::size_t>(k)]; }
  void set_tag(Side side, int k, FaceTag tag) { tags_[static_cast<int>(side)][static_cast<std::size_t>(k)] = tag; }

  /// Node-level tag. A node adjacent to any inflow face is an inflow node
  /// (corner nodes take the inflow tag when one of their faces is inflow),
  /// otherwise outflow if any adjacent face is outflow, otherwise wall.
  /// Interior nodes return Wall and should not be queried.
  [[nodiscard]] FaceTag node_tag(int i, int j) const;
  [[nodiscard]] bool is_inflow_node(int i, int j) const { return on_boundary(i, j) && node_tag(i, j) == FaceTag::Inflow; }
  [[nodiscard]] bool has_inflow() const;

  /// Boundary faces in counter-clockwise order starting at the bottom-left corner.
  [[nodiscard]] std::vector<std::pair<Side, int>> faces_ccw() const;

  /// Side and face index containing boundary point (px, py); the point is
  /// assumed to lie on the given side.
  [[nodiscard]] int face_at(Side side, double px, double py) const noexcept;

  bool operator==(const Grid&) const = default;

 private:
  int nx_ = 0;
  int ny_ = 0;
  double x0_ = 0.0;
  double y0_ = 0.0;
  double hx_ = 0.0;
  double hy_ = 0.0;
  std::array<std::vector<FaceTag>, 4> tags_;
};

/// Node (i, j) number k along a side, counted in the face-index direction.
std::array<int, 2> boundary_node(const Grid& g, Side side, int k);

using BoundaryVelocitySampler = std::function<Vec3(double x, double y)>;

/// Tags every boundary face from u_B . n at the face midpoint: inflow iff
/// u_B.n <= -c, outflow iff u_B.n > 0, wall iff u_B.n == 0 (to 1e-12 |u_B|).
/// Throws AmbiguousInflow for -c < u_B.n < 0 and DisconnectedInflow when the
/// inflow faces are not one contiguous run along the boundary loop.
Grid classify_boundary(Grid grid, const BoundaryVelocitySampler& u_boundary, double threshold);

}  // namespace openmhd
