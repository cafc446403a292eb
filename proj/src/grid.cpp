#include "openmhd/grid.hpp"

#include <cmath>
#include <sstream>

#include "openmhd/error.hpp"

namespace openmhd {

const char* to_string(FaceTag tag) {
  switch (tag) {
    case FaceTag::Inflow: return "INFLOW";
    case FaceTag::Outflow: return "OUTFLOW";
    case FaceTag::Wall: return "WALL";
  }
  return "?";
}

const char* to_string(Side side) {
  switch (side) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Bottom: return "bottom";
    case Side::Top: return "top";
  }
  return "?";
}

Vec3 outward_normal(Side side) {
  switch (side) {
    case Side::Left: return {-1.0, 0.0, 0.0};
    case Side::Right: return {1.0, 0.0, 0.0};
    case Side::Bottom: return {0.0, -1.0, 0.0};
    case Side::Top: return {0.0, 1.0, 0.0};
  }
  return {0.0, 0.0, 0.0};
}

Grid::Grid(int nx, int ny, double x0, double x1, double y0, double y1)
    : nx_(nx), ny_(ny), x0_(x0), y0_(y0) {
  if (nx < 4 || ny < 4) throw Error(ErrorCode::InvalidArgument, "grid needs at least 4 cells per axis");
  if (!(x1 > x0) || !(y1 > y0)) throw Error(ErrorCode::InvalidArgument, "grid extent must be a nondegenerate rectangle");
  hx_ = (x1 - x0) / nx;
  hy_ = (y1 - y0) / ny;
  for (Side s : kAllSides) tags_[static_cast<int>(s)].assign(static_cast<std::size_t>(face_count(s)), FaceTag::Wall);
}

std::array<double, 2> Grid::face_midpoint(Side side, int k) const noexcept {
  switch (side) {
    case Side::Left: return {x0(), y0_ + (k + 0.5) * hy_};
    case Side::Right: return {x1(), y0_ + (k + 0.5) * hy_};
    case Side::Bottom: return {x0_ + (k + 0.5) * hx_, y0()};
    case Side::Top: return {x0_ + (k + 0.5) * hx_, y1()};
  }
  return {0.0, 0.0};
}

FaceTag Grid::node_tag(int i, int j) const {
  bool any_in = false;
  bool any_out = false;
  auto visit = [&](Side s, int k) {
    if (k < 0 || k >= face_count(s)) return;
    FaceTag t = tag(s, k);
    any_in = any_in || t == FaceTag::Inflow;
    any_out = any_out || t == FaceTag::Outflow;
  };
  if (i == 0) { visit(Side::Left, j - 1); visit(Side::Left, j); }
  if (i == nx_) { visit(Side::Right, j - 1); visit(Side::Right, j); }
  if (j == 0) { visit(Side::Bottom, i - 1); visit(Side::Bottom, i); }
  if (j == ny_) { visit(Side::Top, i - 1); visit(Side::Top, i); }
  if (any_in) return FaceTag::Inflow;
  if (any_out) return FaceTag::Outflow;
  return FaceTag::Wall;
}

bool Grid::has_inflow() const {
  for (const auto& side : tags_)
    for (FaceTag t : side)
      if (t == FaceTag::Inflow) return true;
  return false;
}

std::vector<std::pair<Side, int>> Grid::faces_ccw() const {
  std::vector<std::pair<Side, int>> out;
  out.reserve(static_cast<std::size_t>(2 * (nx_ + ny_)));
  for (int i = 0; i < nx_; ++i) out.emplace_back(Side::Bottom, i);
  for (int j = 0; j < ny_; ++j) out.emplace_back(Side::Right, j);
  for (int i = nx_ - 1; i >= 0; --i) out.emplace_back(Side::Top, i);
  for (int j = ny_ - 1; j >= 0; --j) out.emplace_back(Side::Left, j);
  return out;
}

int Grid::face_at(Side side, double px, double py) const noexcept {
  const bool vertical = side == Side::Left || side == Side::Right;
  const double s = vertical ? (py - y0_) / hy_ : (px - x0_) / hx_;
  int k = static_cast<int>(std::floor(s));
  const int n = face_count(side);
  if (k < 0) k = 0;
  if (k >= n) k = n - 1;
  return k;
}

Grid classify_boundary(Grid grid, const BoundaryVelocitySampler& u_boundary, double threshold) {
  if (!(threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "inflow threshold c must be positive");
  std::vector<std::string> ambiguous;
  for (Side s : kAllSides) {
    const Vec3 n = outward_normal(s);
    for (int k = 0; k < grid.face_count(s); ++k) {
      const auto [px, py] = grid.face_midpoint(s, k);
      const Vec3 u = u_boundary(px, py);
      const double un = u[0] * n[0] + u[1] * n[1] + u[2] * n[2];
      const double scale = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
      FaceTag t = FaceTag::Wall;
      if (un <= -threshold) {
        t = FaceTag::Inflow;
      } else if (std::abs(un) <= 1e-12 * (1.0 + scale)) {
        t = FaceTag::Wall;
      } else if (un > 0.0) {
        t = FaceTag::Outflow;
      } else {
        std::ostringstream os;
        os << to_string(s) << " face " << k << " has u_B.n = " << un << " in (-c, 0) with c = " << threshold;
        ambiguous.push_back(os.str());
      }
      grid.set_tag(s, k, t);
    }
  }
  if (!ambiguous.empty()) {
    std::string msg = ambiguous.front();
    if (ambiguous.size() > 1) msg += " (and " + std::to_string(ambiguous.size() - 1) + " more)";
    throw Error(ErrorCode::AmbiguousInflow, msg);
  }

  // Inflow faces must form a single contiguous run around the boundary loop.
  const auto loop = grid.faces_ccw();
  const std::size_t n = loop.size();
  int runs = 0;
  std::size_t inflow_count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const bool cur = grid.tag(loop[k].first, loop[k].second) == FaceTag::Inflow;
    const auto& prev_face = loop[(k + n - 1) % n];
    const bool prev = grid.tag(prev_face.first, prev_face.second) == FaceTag::Inflow;
    if (cur) ++inflow_count;
    if (cur && !prev) ++runs;
  }
  if (inflow_count > 0 && inflow_count < n && runs > 1)
    throw Error(ErrorCode::DisconnectedInflow, "inflow faces form " + std::to_string(runs) + " separate boundary segments");
  return grid;
}

std::array<int, 2> boundary_node(const Grid& g, Side side, int k) {
  switch (side) {
    case Side::Left: return {0, k};
    case Side::Right: return {g.nx(), k};
    case Side::Bottom: return {k, 0};
    case Side::Top: return {k, g.ny()};
  }
  return {0, 0};
}

}  // namespace openmhd
