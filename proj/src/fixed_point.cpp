#include "openmhd/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "openmhd/error.hpp"
#include "openmhd/norms.hpp"
#include "openmhd/parallel.hpp"
#include "openmhd/transport.hpp"

namespace openmhd {

using nlohmann::json;

void SubproblemStats::absorb(const SolveStats& s) {
  iterations += s.iterations;
  max_residual = std::max(max_residual, s.residual);
  if (s.used_fallback) ++fallbacks;
}

const char* to_string(WindowOutcome o) {
  switch (o) {
    case WindowOutcome::Converged: return "CONVERGED";
    case WindowOutcome::Shrunk: return "SHRUNK";
    case WindowOutcome::Failed: return "FAILED";
  }
  return "?";
}

WindowData sample_window(const ScenarioConfig& c, const Grid& tagged, long first_step, int steps) {
  WindowData w;
  w.grid = tagged;
  const auto levels = static_cast<std::size_t>(steps) + 1;
  w.times.resize(levels);
  for (std::size_t n = 0; n < levels; ++n) w.times[n] = static_cast<double>(first_step + static_cast<long>(n)) * c.time.dt;

  const DataSpec& d = c.data;
  const Grid& g = tagged;
  w.rho_boundary.resize(levels);
  w.theta_boundary.resize(levels);
  w.gravity.resize(levels);
  w.u_boundary.resize(levels);
  w.b_boundary.resize(levels);
  if (c.manufactured) {
    w.f_rho.assign(levels, ScalarField(g));
    w.f_theta.assign(levels, ScalarField(g));
    w.f_u.assign(levels, VectorField(g));
    w.f_b.assign(levels, VectorField(g));
  }
  if (c.kinematic_velocity) w.kinematic_u.resize(levels);

  parallel_for(levels, [&](std::size_t b, std::size_t e) {
    for (std::size_t n = b; n < e; ++n) {
      const double t = w.times[n];
      w.rho_boundary[n] = sample(g, d.rho_boundary, t);
      w.theta_boundary[n] = sample(g, d.theta_boundary, t);
      w.gravity[n] = sample(g, d.gravity, t);
      w.u_boundary[n] = sample(g, d.u_boundary, t);
      w.b_boundary[n] = sample(g, d.b_boundary, t);
      if (c.kinematic_velocity) w.kinematic_u[n] = w.u_boundary[n];
      if (!c.manufactured) continue;
      for (int j = 0; j < g.nodes_y(); ++j)
        for (int i = 0; i < g.nodes_x(); ++i) {
          const std::size_t k = g.index(i, j);
          const PointResiduals r = manufactured_residuals(*c.manufactured, d.gravity, c.material, t, g.x(i), g.y(j));
          w.f_rho[n][k] = r.rho;
          w.f_theta[n][k] = r.theta;
          w.f_u[n].set(k, r.u);
          w.f_b[n].set(k, r.b);
        }
    }
  });
  return w;
}

State initial_state(const ScenarioConfig& c, const Grid& g, double t) {
  State s;
  s.time = t;
  s.rho = sample(g, c.data.rho0, 0.0);
  s.u = sample(g, c.data.u0, 0.0);
  s.theta = sample(g, c.data.theta0, 0.0);
  s.b = sample(g, c.data.b0, 0.0);
  return s;
}

Trajectory initial_iterate(const WindowData& w, const State& start, bool kinematic_velocity) {
  Trajectory out(w.times.size(), start);
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n].time = w.times[n];
    if (kinematic_velocity) out[n].u = w.kinematic_u[n];
  }
  return out;
}

Trajectory picard_step(const WindowData& w, const Trajectory& it, const PicardOptions& opt, SweepStats* stats) {
  const Grid& g = w.grid;
  if (it.size() != w.times.size()) throw Error(ErrorCode::MismatchedSampling, "iterate and window differ in time levels");
  if (it.empty()) throw Error(ErrorCode::EmptyTrajectory, "empty iterate");

  std::vector<VectorField> velocity;
  velocity.reserve(it.size());
  for (const auto& s : it) velocity.push_back(s.u);
  DensityProblem dp{g, VelocityHistory(g, w.times, std::move(velocity)), it[0].rho, w.rho_boundary, w.f_rho};
  std::vector<ScalarField> rho = solve_continuity(dp);
  for (std::size_t n = 0; n < rho.size(); ++n) {
    const double m = rho[n].min();
    if (m < opt.r0)
      throw Error(ErrorCode::DensityFloorViolated,
                  "density " + std::to_string(m) + " below floor " + std::to_string(opt.r0) + " at t = " + std::to_string(w.times[n]));
  }

  SweepStats local;
  Trajectory out(it.size());
  out[0] = it[0];
  const bool gs = opt.ordering == SweepOrdering::GaussSeidel;
  for (std::size_t n = 0; n + 1 < it.size(); ++n) {
    const std::size_t k = n + 1;
    const double dt = w.times[k] - w.times[n];
    const State& frozen = it[k];
    State& next = out[k];
    next.time = w.times[k];
    next.rho = std::move(rho[k]);

    SolveStats s;
    LinearizedCoefficients cb;
    cb.v = &frozen.u;
    next.b = solve_induction(g, opt.material, cb, out[n].b, w.b_boundary[k], dt, opt.parabolic,
                             w.f_b.empty() ? nullptr : &w.f_b[k], &s);
    local.induction.absorb(s);

    LinearizedCoefficients ct;
    ct.rho = gs ? &next.rho : &frozen.rho;
    ct.v = &frozen.u;
    ct.b = gs ? &next.b : &frozen.b;
    next.theta = solve_temperature(g, opt.material, ct, out[n].theta, w.theta_boundary[k], dt, opt.parabolic,
                                   w.f_theta.empty() ? nullptr : &w.f_theta[k], &s);
    local.temperature.absorb(s);

    if (opt.kinematic_velocity) {
      next.u = w.kinematic_u[k];
    } else {
      LinearizedCoefficients cu;
      cu.rho = gs ? &next.rho : &frozen.rho;
      cu.v = &frozen.u;
      cu.theta = gs ? &next.theta : &frozen.theta;
      cu.b = gs ? &next.b : &frozen.b;
      cu.gravity = &w.gravity[k];
      next.u = solve_momentum(g, opt.material, cu, out[n].u, w.u_boundary[k], dt, opt.parabolic,
                              w.f_u.empty() ? nullptr : &w.f_u[k], &s);
      local.momentum.absorb(s);
    }
    if (!next.u.all_finite() || !next.theta.all_finite() || !next.b.all_finite())
      throw Error(ErrorCode::NonFiniteValue, "sweep produced non-finite values at t = " + std::to_string(next.time));
  }
  if (stats) *stats = local;
  return out;
}

double lower_topology_distance(const Grid& g, const Trajectory& a, const Trajectory& b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptyTrajectory, "distance between empty trajectories");
  if (a.size() != b.size()) throw Error(ErrorCode::MismatchedSampling, "trajectories differ in length");
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (std::abs(a[n].time - b[n].time) > 1e-12 * (1.0 + std::abs(a[n].time)))
      throw Error(ErrorCode::MismatchedSampling, "trajectories use different time levels");
    if (!a[n].rho.matches(g) || !b[n].rho.matches(g)) throw Error(ErrorCode::MismatchedSampling, "trajectory does not match the grid");
  }
  double rho_sup = 0.0;
  double u2 = 0.0, th2 = 0.0, b2 = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    rho_sup = std::max(rho_sup, spatial_norm(g, a[n].rho - b[n].rho, 2.0, 0));
    if (n == 0) continue;
    const double dt = a[n].time - a[n - 1].time;
    u2 += dt * std::pow(spatial_norm(g, a[n].u - b[n].u, 2.0, 1), 2);
    th2 += dt * std::pow(spatial_norm(g, a[n].theta - b[n].theta, 2.0, 1), 2);
    b2 += dt * std::pow(spatial_norm(g, a[n].b - b[n].b, 2.0, 1), 2);
  }
  return rho_sup + std::sqrt(u2) + std::sqrt(th2) + std::sqrt(b2);
}

namespace {

template <class F>
double parabolic_norm(const Grid& g, const Trajectory& t, double p, double q, F field) {
  double w2q = 0.0, lq = 0.0, dtq = 0.0;
  for (std::size_t n = 1; n < t.size(); ++n) {
    const double dt = t[n].time - t[n - 1].time;
    w2q += dt * std::pow(spatial_norm(g, field(t[n]), q, 2), p);
    lq += dt * std::pow(spatial_norm(g, field(t[n]), q, 0), p);
    auto diff = field(t[n]) - field(t[n - 1]);
    diff *= 1.0 / dt;
    dtq += dt * std::pow(spatial_norm(g, diff, q, 0), p);
  }
  return std::pow(w2q, 1.0 / p) + std::pow(lq, 1.0 / p) + std::pow(dtq, 1.0 / p);
}

}  // namespace

SolutionNorms solution_norms(const Grid& g, const Trajectory& traj, double p, double q) {
  if (traj.empty()) throw Error(ErrorCode::EmptyTrajectory, "solution norms of an empty trajectory");
  SolutionNorms out;
  out.min_rho = traj[0].rho.min();
  for (const auto& s : traj) {
    out.rho = std::max(out.rho, spatial_norm(g, s.rho, q, 1));
    out.min_rho = std::min(out.min_rho, s.rho.min());
  }
  out.u = parabolic_norm(g, traj, p, q, [](const State& s) { return s.u; });
  out.theta = parabolic_norm(g, traj, p, q, [](const State& s) { return s.theta; });
  out.b = parabolic_norm(g, traj, p, q, [](const State& s) { return s.b; });
  return out;
}

BallMembership check_ball_membership(const Grid& g, const Trajectory& traj, const BallSpec& ball, double p, double q) {
  const SolutionNorms n = solution_norms(g, traj, p, q);
  BallMembership m;
  m.rho = n.rho <= ball.k_rho;
  m.u = n.u <= ball.k_u;
  m.theta = n.theta <= ball.k_theta;
  m.b = n.b <= ball.k_b;
  m.density_floor = n.min_rho >= ball.r0;
  return m;
}

namespace {

json stats_json(const SubproblemStats& s) {
  return {{"iterations", s.iterations}, {"max_residual", s.max_residual}, {"fallbacks", s.fallbacks}};
}

void perturb(Trajectory& t, double amplitude, std::uint64_t seed, const Grid& g) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double u_scale = 1.0, b_scale = 1.0;
  for (const auto& s : t) {
    u_scale = std::max(u_scale, s.u.max_abs());
    b_scale = std::max(b_scale, s.b.max_abs());
  }
  for (std::size_t n = 1; n < t.size(); ++n) {
    State& s = t[n];
    for (int j = 1; j < g.ny(); ++j)
      for (int i = 1; i < g.nx(); ++i) {
        const std::size_t k = g.index(i, j);
        s.rho[k] *= 1.0 + amplitude * uni(rng);
        s.theta[k] *= 1.0 + amplitude * uni(rng);
        for (auto& c : s.u.c) c[k] += amplitude * u_scale * uni(rng);
        for (auto& c : s.b.c) c[k] += amplitude * b_scale * uni(rng);
      }
  }
}

struct Attempt {
  bool ok = false;
  Trajectory traj;
  std::string reason;
  int iterates = 0;
};

Attempt run_window(const ScenarioConfig& c, const PicardOptions& popt, const WindowData& w, const State& start,
                   int window_index, FixedPointReport& report, const RunOptions* perturbation) {
  const Grid& g = w.grid;
  const FixedPointSpec& fp = c.fixed_point;
  Trajectory it = initial_iterate(w, start, c.kinematic_velocity);
  if (perturbation != nullptr && perturbation->start_perturbation > 0.0)
    perturb(it, perturbation->start_perturbation, perturbation->perturbation_seed, g);

  BallSpec ball;
  ball.r0 = popt.r0;
  ball.window = w.times.back() - w.times.front();
  Attempt out;
  double prev = -1.0;
  int high = 0;
  for (int k = 1; k <= fp.max_iter; ++k) {
    out.iterates = k;
    SweepStats st;
    Trajectory next;
    try {
      next = picard_step(w, it, popt, &st);
    } catch (const Error& e) {
      out.reason = e.what();
      return out;
    }
    const double d = lower_topology_distance(g, next, it);
    if (k == 1) {
      const SolutionNorms n = solution_norms(g, next, c.p, c.q);
      auto radius = [](const std::optional<double>& cfg, double norm) { return cfg ? *cfg : 2.0 * norm + 1e-10; };
      ball.k_rho = radius(fp.k_rho, n.rho);
      ball.k_u = radius(fp.k_u, n.u);
      ball.k_theta = radius(fp.k_theta, n.theta);
      ball.k_b = radius(fp.k_b, n.b);
    }
    IterateRecord rec;
    rec.window = window_index;
    rec.iterate = k;
    rec.distance = d;
    if (k >= 2 && prev > 0.0) rec.ratio = d / prev;
    rec.ball = check_ball_membership(g, next, ball, c.p, c.q);
    rec.solves = st;
    report.iterates.push_back(rec);
    ++report.total_iterates;

    if (!std::isfinite(d)) {
      out.reason = "non-finite distance";
      return out;
    }
    if (d <= fp.tol) {
      out.ok = true;
      out.traj = std::move(next);
      return out;
    }
    if (!rec.ball.all()) {
      out.reason = "iterate left the ball";
      return out;
    }
    if (rec.ratio && *rec.ratio >= 1.0) {
      if (++high >= 2) {
        out.reason = "contraction ratio >= 1 on two consecutive iterates";
        return out;
      }
    } else {
      high = 0;
    }
    prev = d;
    it = std::move(next);
  }
  out.reason = "max_iter reached";
  return out;
}

}  // namespace

void to_json(json& j, const FixedPointReport& r) {
  json its = json::array();
  for (const auto& it : r.iterates) {
    json e = {{"window", it.window},
              {"iterate", it.iterate},
              {"distance", it.distance},
              {"ratio", it.ratio ? json(*it.ratio) : json(nullptr)},
              {"ball",
               {{"rho", it.ball.rho},
                {"u", it.ball.u},
                {"theta", it.ball.theta},
                {"b", it.ball.b},
                {"density_floor", it.ball.density_floor}}},
              {"residuals",
               {{"momentum", stats_json(it.solves.momentum)},
                {"temperature", stats_json(it.solves.temperature)},
                {"induction", stats_json(it.solves.induction)}}}};
    its.push_back(e);
  }
  json wins = json::array();
  for (const auto& w : r.windows)
    wins.push_back({{"start", w.start}, {"length", w.length}, {"outcome", to_string(w.outcome)}, {"iterates", w.iterates},
                    {"reason", w.reason}});
  j = {{"iterates", its}, {"windows", wins}, {"converged", r.converged}, {"final_time", r.final_time},
       {"total_iterates", r.total_iterates}};
}

Trajectory run_fixed_point(const ScenarioConfig& c, FixedPointReport& report, const RunOptions& opts) {
  report = FixedPointReport{};
  const double dt = c.time.dt;
  const long total = std::max(1L, std::lround(c.time.horizon / dt));
  long window_steps = std::max(1L, std::lround(c.time.window / dt));

  Grid g0 = tagged_grid(c, 0.0);
  State start = initial_state(c, g0);

  PicardOptions popt;
  popt.material = c.material;
  popt.parabolic.tol = c.fixed_point.inner_tol;
  popt.parabolic.drift = c.drift;
  popt.ordering = c.fixed_point.ordering;
  popt.kinematic_velocity = c.kinematic_velocity;
  if (c.fixed_point.r0) {
    popt.r0 = *c.fixed_point.r0;
  } else {
    double m = start.rho.min();
    const ScalarField rb = sample(g0, c.data.rho_boundary, 0.0);
    for (int j = 0; j < g0.nodes_y(); ++j)
      for (int i = 0; i < g0.nodes_x(); ++i)
        if (g0.is_inflow_node(i, j)) m = std::min(m, rb(i, j));
    popt.r0 = 0.5 * m;
  }

  Trajectory result{start};
  long done = 0;
  int window_index = 0;
  while (done < total) {
    long steps = std::min(window_steps, total - done);
    int shrinks = 0;
    const Grid g = tagged_grid(c, static_cast<double>(done) * dt);
    while (true) {
      const WindowData w = sample_window(c, g, done, static_cast<int>(steps));
      const RunOptions* pert = (done == 0 && shrinks == 0) ? &opts : nullptr;
      Attempt a = run_window(c, popt, w, result.back(), window_index, report, pert);
      WindowRecord rec;
      rec.start = w.times.front();
      rec.length = w.times.back() - w.times.front();
      rec.iterates = a.iterates;
      rec.reason = a.reason;
      if (a.ok) {
        rec.outcome = WindowOutcome::Converged;
        report.windows.push_back(rec);
        for (std::size_t n = 1; n < a.traj.size(); ++n) result.push_back(std::move(a.traj[n]));
        done += steps;
        break;
      }
      ++shrinks;
      if (shrinks > c.fixed_point.max_shrinks || steps / 2 < 1) {
        rec.outcome = WindowOutcome::Failed;
        report.windows.push_back(rec);
        report.converged = false;
        report.final_time = static_cast<double>(done) * dt;
        throw Error(ErrorCode::NoConvergence, "window at t = " + std::to_string(rec.start) + " failed: " + a.reason);
      }
      rec.outcome = WindowOutcome::Shrunk;
      report.windows.push_back(rec);
      steps /= 2;
      window_steps = steps;
    }
    ++window_index;
  }
  report.converged = true;
  report.final_time = static_cast<double>(done) * dt;
  return result;
}

}  // namespace openmhd
