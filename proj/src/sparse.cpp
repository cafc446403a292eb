#include "openmhd/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "openmhd/error.hpp"

namespace openmhd {

void CsrMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
    y[r] = acc;
  }
}

double CsrMatrix::at(std::size_t r, std::size_t c) const {
  const auto b = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[r]);
  const auto e = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[r + 1]);
  const auto it = std::lower_bound(b, e, c);
  if (it == e || *it != c) return 0.0;
  return val[static_cast<std::size_t>(it - col.begin())];
}

double CsrMatrix::diagonal(std::size_t r) const { return at(r, r); }

CsrMatrix TripletBuilder::build() const {
  CsrMatrix m;
  m.rows = rows_.size();
  m.row_ptr.assign(1, 0);
  for (auto row : rows_) {
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0 && row[k].first == row[k - 1].first) {
        m.val.back() += row[k].second;
      } else {
        m.col.push_back(row[k].first);
        m.val.push_back(row[k].second);
      }
    }
    m.row_ptr.push_back(m.col.size());
  }
  return m;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

using Preconditioner = std::function<void(const std::vector<double>&, std::vector<double>&)>;

Preconditioner jacobi(const CsrMatrix& a) {
  std::vector<double> inv(a.rows, 1.0);
  for (std::size_t r = 0; r < a.rows; ++r) {
    const double d = a.diagonal(r);
    if (d != 0.0) inv[r] = 1.0 / d;
  }
  return [inv = std::move(inv)](const std::vector<double>& x, std::vector<double>& y) {
    y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = inv[i] * x[i];
  };
}

Preconditioner ilu0(const CsrMatrix& a) {
  CsrMatrix lu = a;
  std::vector<std::size_t> diag(a.rows, 0);
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t k = lu.row_ptr[r]; k < lu.row_ptr[r + 1]; ++k) {
      const std::size_t c = lu.col[k];
      if (c >= r) break;
      const double piv = lu.val[diag[c]];
      if (piv == 0.0) continue;
      lu.val[k] /= piv;
      const double lik = lu.val[k];
      std::size_t kk = k + 1;
      for (std::size_t m = diag[c] + 1; m < lu.row_ptr[c + 1]; ++m) {
        const std::size_t cm = lu.col[m];
        while (kk < lu.row_ptr[r + 1] && lu.col[kk] < cm) ++kk;
        if (kk < lu.row_ptr[r + 1] && lu.col[kk] == cm) lu.val[kk] -= lik * lu.val[m];
      }
    }
    diag[r] = lu.row_ptr[r];
    while (diag[r] < lu.row_ptr[r + 1] && lu.col[diag[r]] < r) ++diag[r];
    if (diag[r] == lu.row_ptr[r + 1] || lu.col[diag[r]] != r || lu.val[diag[r]] == 0.0)
      throw Error(ErrorCode::LinearSolveDiverged, "ILU(0) hit a zero pivot in row " + std::to_string(r));
  }
  return [lu = std::move(lu), diag = std::move(diag)](const std::vector<double>& x, std::vector<double>& y) {
    const std::size_t n = lu.rows;
    y = x;
    for (std::size_t r = 0; r < n; ++r) {
      double acc = y[r];
      for (std::size_t k = lu.row_ptr[r]; k < diag[r]; ++k) acc -= lu.val[k] * y[lu.col[k]];
      y[r] = acc;
    }
    for (std::size_t r = n; r-- > 0;) {
      double acc = y[r];
      for (std::size_t k = diag[r] + 1; k < lu.row_ptr[r + 1]; ++k) acc -= lu.val[k] * y[lu.col[k]];
      y[r] = acc / lu.val[diag[r]];
    }
  };
}

struct Outcome {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

constexpr int kStagnationWindow = 200;

Outcome bicgstab(const CsrMatrix& a, const std::vector<double>& b, std::vector<double>& x, const Preconditioner& m,
                 double tol, int max_iter) {
  const std::size_t n = a.rows;
  const double bnorm = norm(b);
  std::vector<double> r(n), tmp;
  a.multiply(x, tmp);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - tmp[i];
  Outcome out;
  out.residual = norm(r) / bnorm;
  if (out.residual <= tol) {
    out.converged = true;
    return out;
  }
  std::vector<double> rhat = r, p(n, 0.0), v(n, 0.0), s(n), t(n), y, z;
  std::vector<double> best = x;
  double best_res = out.residual;
  int since_best = 0;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  for (int it = 1; it <= max_iter; ++it) {
    out.iterations = it;
    const double rho_new = dot(rhat, r);
    if (std::abs(rho_new) < 1e-300) {
      rhat = r;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      rho = alpha = omega = 1.0;
      continue;
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    m(p, y);
    a.multiply(y, v);
    const double rv = dot(rhat, v);
    if (rv == 0.0) break;
    alpha = rho / rv;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    if (norm(s) / bnorm <= tol) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * y[i];
    } else {
      m(s, z);
      a.multiply(z, t);
      const double tt = dot(t, t);
      omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * y[i] + omega * z[i];
        r[i] = s[i] - omega * t[i];
      }
      if (omega == 0.0) break;
    }
    // Recompute the true residual for the stopping test.
    a.multiply(x, tmp);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - tmp[i];
    out.residual = norm(r) / bnorm;
    if (out.residual <= tol) {
      out.converged = true;
      return out;
    }
    if (out.residual < best_res) {
      best_res = out.residual;
      best = x;
      since_best = 0;
    } else if (++since_best > kStagnationWindow) {
      break;
    }
  }
  if (best_res < out.residual) {
    x = best;
    out.residual = best_res;
  }
  return out;
}

}  // namespace

double relative_residual(const SparseSystem& s, const std::vector<double>& x) {
  std::vector<double> ax;
  s.a.multiply(x, ax);
  double num = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) num += (s.rhs[i] - ax[i]) * (s.rhs[i] - ax[i]);
  const double den = norm(s.rhs);
  return den > 0.0 ? std::sqrt(num) / den : std::sqrt(num);
}

std::vector<double> solve_sparse(const SparseSystem& s, double tol, int max_iter, SolveStats* stats,
                                 const std::vector<double>* guess) {
  const CsrMatrix& a = s.a;
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "solver tolerance must be positive");
  if (s.rhs.size() != a.rows) throw Error(ErrorCode::MismatchedSampling, "right-hand side length differs from matrix rows");
  for (std::size_t r = 0; r < a.rows; ++r) {
    bool nonzero = false;
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) nonzero = nonzero || a.val[k] != 0.0;
    if (!nonzero) throw Error(ErrorCode::LinearSolveDiverged, "matrix row " + std::to_string(r) + " is identically zero");
  }
  SolveStats local;
  std::vector<double> x(a.rows, 0.0);
  if (norm(s.rhs) == 0.0) {
    if (stats) *stats = local;
    return x;
  }
  if (guess != nullptr && guess->size() == a.rows) x = *guess;

  Outcome o = bicgstab(a, s.rhs, x, jacobi(a), tol, max_iter);
  local.iterations = o.iterations;
  if (!o.converged) {
    local.used_fallback = true;
    o = bicgstab(a, s.rhs, x, ilu0(a), tol, max_iter);
    local.iterations += o.iterations;
  }
  local.residual = o.residual;
  if (stats) *stats = local;
  if (!o.converged || !std::isfinite(o.residual))
    throw Error(ErrorCode::LinearSolveDiverged,
                "residual " + std::to_string(o.residual) + " above tolerance after " + std::to_string(local.iterations) + " iterations");
  return x;
}

}  // namespace openmhd
