#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace openmhd {

/// Compressed sparse row matrix with sorted, duplicate-free columns per row.
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col;
  std::vector<double> val;

  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  [[nodiscard]] double diagonal(std::size_t r) const;
  [[nodiscard]] double at(std::size_t r, std::size_t c) const;
};

/// Row-wise accumulator; duplicate entries are summed on build.
class TripletBuilder {
 public:
  explicit TripletBuilder(std::size_t rows) : rows_(rows) {}
  void add(std::size_t r, std::size_t c, double v) { rows_[r].emplace_back(c, v); }
  [[nodiscard]] CsrMatrix build() const;

 private:
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
};

/// Unknown k of component c sits at c * nodes + k.
struct UnknownLayout {
  int components = 1;
  std::size_t nodes = 0;
  [[nodiscard]] std::size_t index(int component, std::size_t node) const {
    return static_cast<std::size_t>(component) * nodes + node;
  }
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(components) * nodes; }
};

struct SparseSystem {
  CsrMatrix a;
  std::vector<double> rhs;
  UnknownLayout layout;
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
  bool used_fallback = false;
};

/// ||b - A x|| / ||b|| (plain ||A x|| when b = 0).
double relative_residual(const SparseSystem& s, const std::vector<double>& x);

/// BiCGStab with Jacobi preconditioning; on stagnation restarts from the
/// best iterate with an ILU(0) preconditioner. Throws LinearSolveDiverged
/// for a zero row or when the residual stays above tol after max_iter.
std::vector<double> solve_sparse(const SparseSystem& s, double tol, int max_iter, SolveStats* stats = nullptr,
                                 const std::vector<double>* guess = nullptr);

}  // namespace openmhd
