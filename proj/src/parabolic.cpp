#include "openmhd/parabolic.hpp"

#include <cmath>
#include <string>

#include "openmhd/error.hpp"
#include "openmhd/operators.hpp"

namespace openmhd {

namespace {

void require(const void* p, const char* what) {
  if (p == nullptr) throw Error(ErrorCode::InvalidArgument, std::string("missing frozen field: ") + what);
}

void check_density(const ScalarField& rho, double floor) {
  for (std::size_t k = 0; k < rho.size(); ++k) {
    if (!(rho[k] > 0.0) || rho[k] < floor)
      throw Error(ErrorCode::NonPositiveDensityCoefficient,
                  "density coefficient " + std::to_string(rho[k]) + " at node " + std::to_string(k) + " is below the floor");
  }
}

void check_dt(double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "time step must be positive");
}

// Adds coef * (a . grad) acting on the unknowns of one component.
void add_drift(TripletBuilder& tb, std::size_t row, std::size_t base, const Grid& g, int i, int j, double ax, double ay,
               DriftScheme scheme, double coef = 1.0) {
  const double hx = g.hx();
  const double hy = g.hy();
  auto col = [&](int ii, int jj) { return base + g.index(ii, jj); };
  if (scheme == DriftScheme::Central) {
    tb.add(row, col(i + 1, j), coef * ax / (2.0 * hx));
    tb.add(row, col(i - 1, j), -coef * ax / (2.0 * hx));
    tb.add(row, col(i, j + 1), coef * ay / (2.0 * hy));
    tb.add(row, col(i, j - 1), -coef * ay / (2.0 * hy));
    return;
  }
  if (ax > 0.0) {
    tb.add(row, col(i, j), coef * ax / hx);
    tb.add(row, col(i - 1, j), -coef * ax / hx);
  } else if (ax < 0.0) {
    tb.add(row, col(i + 1, j), coef * ax / hx);
    tb.add(row, col(i, j), -coef * ax / hx);
  }
  if (ay > 0.0) {
    tb.add(row, col(i, j), coef * ay / hy);
    tb.add(row, col(i, j - 1), -coef * ay / hy);
  } else if (ay < 0.0) {
    tb.add(row, col(i, j + 1), coef * ay / hy);
    tb.add(row, col(i, j), -coef * ay / hy);
  }
}

// Adds -coef * laplacian.
void add_neg_laplacian(TripletBuilder& tb, std::size_t row, std::size_t base, const Grid& g, int i, int j, double coef) {
  const double ax = coef / (g.hx() * g.hx());
  const double ay = coef / (g.hy() * g.hy());
  tb.add(row, base + g.index(i, j), 2.0 * ax + 2.0 * ay);
  tb.add(row, base + g.index(i - 1, j), -ax);
  tb.add(row, base + g.index(i + 1, j), -ax);
  tb.add(row, base + g.index(i, j - 1), -ay);
  tb.add(row, base + g.index(i, j + 1), -ay);
}

// Adds coef * d2/dx2, d2/dxdy or d2/dy2 of one component.
void add_dxx(TripletBuilder& tb, std::size_t row, std::size_t base, const Grid& g, int i, int j, double coef) {
  const double a = coef / (g.hx() * g.hx());
  tb.add(row, base + g.index(i - 1, j), a);
  tb.add(row, base + g.index(i, j), -2.0 * a);
  tb.add(row, base + g.index(i + 1, j), a);
}

void add_dyy(TripletBuilder& tb, std::size_t row, std::size_t base, const Grid& g, int i, int j, double coef) {
  const double a = coef / (g.hy() * g.hy());
  tb.add(row, base + g.index(i, j - 1), a);
  tb.add(row, base + g.index(i, j), -2.0 * a);
  tb.add(row, base + g.index(i, j + 1), a);
}

void add_dxy(TripletBuilder& tb, std::size_t row, std::size_t base, const Grid& g, int i, int j, double coef) {
  const double a = coef / (4.0 * g.hx() * g.hy());
  tb.add(row, base + g.index(i + 1, j + 1), a);
  tb.add(row, base + g.index(i - 1, j - 1), a);
  tb.add(row, base + g.index(i + 1, j - 1), -a);
  tb.add(row, base + g.index(i - 1, j + 1), -a);
}

}  // namespace

std::vector<double> pack(const ScalarField& f) { return f.values; }

std::vector<double> pack(const VectorField& f) {
  std::vector<double> out;
  out.reserve(3 * f.size());
  for (const auto& c : f.c) out.insert(out.end(), c.values.begin(), c.values.end());
  return out;
}

ScalarField unpack_scalar(const Grid& g, const std::vector<double>& x) {
  ScalarField f(g);
  f.values.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(g.size()));
  return f;
}

VectorField unpack_vector(const Grid& g, const std::vector<double>& x) {
  VectorField f(g);
  const auto n = static_cast<std::ptrdiff_t>(g.size());
  for (std::ptrdiff_t d = 0; d < 3; ++d)
    f.c[static_cast<std::size_t>(d)].values.assign(x.begin() + d * n, x.begin() + (d + 1) * n);
  return f;
}

SparseSystem assemble_momentum(const Grid& g, const MaterialParams& m, const LinearizedCoefficients& c,
                               const VectorField& u_prev, const VectorField& u_boundary, double dt,
                               const ParabolicOptions& opt, const VectorField* forcing) {
  require(c.rho, "rho");
  require(c.v, "v");
  require(c.theta, "theta");
  require(c.b, "b");
  check_dt(dt);
  check_density(*c.rho, opt.rho_floor);
  const ScalarField& rho = *c.rho;
  const VectorField& v = *c.v;

  const VectorField lorentz = lorentz_force(g, *c.b);
  const VectorField grad_theta = gradient(g, *c.theta);
  ScalarField log_rho = rho;
  for (auto& x : log_rho.values) x = std::log(x);
  const VectorField grad_log_rho = gradient(g, log_rho);
  VectorField grad_g(g);
  if (c.gravity != nullptr) grad_g = gradient(g, *c.gravity);

  const std::size_t n = g.size();
  SparseSystem sys;
  sys.layout = {3, n};
  sys.rhs.assign(3 * n, 0.0);
  TripletBuilder tb(3 * n);
  const double grad_div = m.mu * (1.0 - 2.0 / m.d_eff) + m.lambda;

  for (int j = 0; j < g.nodes_y(); ++j) {
    for (int i = 0; i < g.nodes_x(); ++i) {
      const std::size_t k = g.index(i, j);
      if (g.on_boundary(i, j)) {
        for (int d = 0; d < 3; ++d) {
          const std::size_t row = sys.layout.index(d, k);
          tb.add(row, row, 1.0);
          sys.rhs[row] = u_boundary.c[static_cast<std::size_t>(d)][k];
        }
        continue;
      }
      const double inv_rho = 1.0 / rho[k];
      for (int d = 0; d < 3; ++d) {
        const auto du = static_cast<std::size_t>(d);
        const std::size_t row = sys.layout.index(d, k);
        const std::size_t base = sys.layout.index(d, 0);
        tb.add(row, row, 1.0 / dt);
        add_drift(tb, row, base, g, i, j, v.c[0][k], v.c[1][k], opt.drift);
        add_neg_laplacian(tb, row, base, g, i, j, m.mu * inv_rho);
        double rhs = u_prev.c[du][k] / dt + inv_rho * lorentz.c[du][k] - grad_theta.c[du][k] -
                     (*c.theta)[k] * grad_log_rho.c[du][k] + grad_g.c[du][k];
        if (forcing != nullptr) rhs += forcing->c[du][k];
        sys.rhs[row] = rhs;
      }
      // -(grad_div / rho) grad(div u) couples the in-plane components.
      const double gc = -grad_div * inv_rho;
      if (gc != 0.0) {
        const std::size_t rx = sys.layout.index(0, k);
        const std::size_t ry = sys.layout.index(1, k);
        add_dxx(tb, rx, sys.layout.index(0, 0), g, i, j, gc);
        add_dxy(tb, rx, sys.layout.index(1, 0), g, i, j, gc);
        add_dxy(tb, ry, sys.layout.index(0, 0), g, i, j, gc);
        add_dyy(tb, ry, sys.layout.index(1, 0), g, i, j, gc);
      }
    }
  }
  sys.a = tb.build();
  return sys;
}

SparseSystem assemble_temperature(const Grid& g, const MaterialParams& m, const LinearizedCoefficients& c,
                                  const ScalarField& theta_prev, const ScalarField& theta_boundary, double dt,
                                  const ParabolicOptions& opt, const ScalarField* forcing) {
  require(c.rho, "rho");
  require(c.v, "v");
  require(c.b, "b");
  check_dt(dt);
  check_density(*c.rho, opt.rho_floor);
  const ScalarField& rho = *c.rho;
  const VectorField& v = *c.v;
  const ScalarField div_v = divergence(g, v);
  const ScalarField diss = viscous_dissipation(g, v, m);
  const ScalarField joule = joule_heating(g, *c.b, m);

  const std::size_t n = g.size();
  SparseSystem sys;
  sys.layout = {1, n};
  sys.rhs.assign(n, 0.0);
  TripletBuilder tb(n);
  for (int j = 0; j < g.nodes_y(); ++j) {
    for (int i = 0; i < g.nodes_x(); ++i) {
      const std::size_t k = g.index(i, j);
      if (g.on_boundary(i, j)) {
        tb.add(k, k, 1.0);
        sys.rhs[k] = theta_boundary[k];
        continue;
      }
      const double w = 1.0 / (rho[k] * m.cv);
      tb.add(k, k, 1.0 / dt + div_v[k] / m.cv);
      add_drift(tb, k, 0, g, i, j, v.c[0][k], v.c[1][k], opt.drift);
      add_neg_laplacian(tb, k, 0, g, i, j, m.kappa * w);
      double rhs = theta_prev[k] / dt + w * (diss[k] + joule[k]);
      if (forcing != nullptr) rhs += (*forcing)[k];
      sys.rhs[k] = rhs;
    }
  }
  sys.a = tb.build();
  return sys;
}

SparseSystem assemble_induction(const Grid& g, const MaterialParams& m, const LinearizedCoefficients& c,
                                const VectorField& b_prev, const VectorField& b_boundary, double dt,
                                const ParabolicOptions& /*opt*/, const VectorField* forcing) {
  require(c.v, "v");
  check_dt(dt);
  const VectorField coupling = curl(g, cross(*c.v, b_prev));

  const std::size_t n = g.size();
  SparseSystem sys;
  sys.layout = {3, n};
  sys.rhs.assign(3 * n, 0.0);
  TripletBuilder tb(3 * n);
  for (int j = 0; j < g.nodes_y(); ++j) {
    for (int i = 0; i < g.nodes_x(); ++i) {
      const std::size_t k = g.index(i, j);
      if (!g.on_boundary(i, j)) {
        for (int d = 0; d < 3; ++d) {
          const auto du = static_cast<std::size_t>(d);
          const std::size_t row = sys.layout.index(d, k);
          tb.add(row, row, 1.0 / dt);
          add_neg_laplacian(tb, row, sys.layout.index(d, 0), g, i, j, m.xi);
          double rhs = b_prev.c[du][k] / dt + coupling.c[du][k];
          if (forcing != nullptr) rhs += forcing->c[du][k];
          sys.rhs[row] = rhs;
        }
        continue;
      }
      const bool corner = (i == 0 || i == g.nx()) && (j == 0 || j == g.ny());
      if (corner) {
        for (int d = 0; d < 3; ++d) {
          const std::size_t row = sys.layout.index(d, k);
          tb.add(row, row, 1.0);
          sys.rhs[row] = b_boundary.c[static_cast<std::size_t>(d)][k];
        }
        continue;
      }
      Side side = Side::Left;
      if (i == g.nx()) side = Side::Right;
      if (j == 0) side = Side::Bottom;
      if (j == g.ny()) side = Side::Top;
      const Vec3 nrm = outward_normal(side);
      const Vec3 b1 = cross(b_boundary.at(k), nrm);
      const Vec3 tangential = cross(nrm, b1);
      const int normal_axis = (side == Side::Left || side == Side::Right) ? 0 : 1;
      for (int d = 0; d < 3; ++d) {
        const std::size_t row = sys.layout.index(d, k);
        if (d != normal_axis) {
          tb.add(row, row, 1.0);
          sys.rhs[row] = tangential[static_cast<std::size_t>(d)];
          continue;
        }
        // One-sided inward normal derivative matched to the tangential
        // difference of the boundary data, so the discrete div B vanishes here.
        const int si = normal_axis == 0 ? (i == 0 ? 1 : -1) : 0;
        const int sj = normal_axis == 1 ? (j == 0 ? 1 : -1) : 0;
        const double h = normal_axis == 0 ? g.hx() : g.hy();
        const std::size_t base = sys.layout.index(d, 0);
        tb.add(row, base + g.index(i, j), -3.0 / (2.0 * h));
        tb.add(row, base + g.index(i + si, j + sj), 4.0 / (2.0 * h));
        tb.add(row, base + g.index(i + 2 * si, j + 2 * sj), -1.0 / (2.0 * h));
        const auto other = static_cast<std::size_t>(1 - normal_axis);
        const ScalarField& bt = b_boundary.c[other];
        const double dtan = normal_axis == 0 ? (bt(i, j + 1) - bt(i, j - 1)) / (2.0 * g.hy())
                                             : (bt(i + 1, j) - bt(i - 1, j)) / (2.0 * g.hx());
        sys.rhs[row] = -static_cast<double>(si + sj) * dtan;
      }
    }
  }
  sys.a = tb.build();
  return sys;
}

VectorField solve_momentum(const Grid& g, const MaterialParams& m, const LinearizedCoefficients& c,
                           const VectorField& u_prev, const VectorField& u_boundary, double dt,
                           const ParabolicOptions& opt, const VectorField* forcing, SolveStats* stats) {
  const SparseSystem sys = assemble_momentum(g, m, c, u_prev, u_boundary, dt, opt, forcing);
  const std::vector<double> guess = pack(u_prev);
  return unpack_vector(g, solve_sparse(sys, opt.tol, opt.max_iter, stats, &guess));
}

ScalarField solve_temperature(const Grid& g, const MaterialParams& m, const LinearizedCoefficients& c,
                              const ScalarField& theta_prev, const ScalarField& theta_boundary, double dt,
                              const ParabolicOptions& opt, const ScalarField* forcing, SolveStats* stats) {
  const SparseSystem sys = assemble_temperature(g, m, c, theta_prev, theta_boundary, dt, opt, forcing);
  const std::vector<double> guess = pack(theta_prev);
  return unpack_scalar(g, solve_sparse(sys, opt.tol, opt.max_iter, stats, &guess));
}

VectorField solve_induction(const Grid& g, const MaterialParams& m, const LinearizedCoefficients& c,
                            const VectorField& b_prev, const VectorField& b_boundary, double dt,
                            const ParabolicOptions& opt, const VectorField* forcing, SolveStats* stats) {
  const SparseSystem sys = assemble_induction(g, m, c, b_prev, b_boundary, dt, opt, forcing);
  const std::vector<double> guess = pack(b_prev);
  return unpack_vector(g, solve_sparse(sys, opt.tol, opt.max_iter, stats, &guess));
}

}  // namespace openmhd
