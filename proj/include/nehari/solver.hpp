#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nehari/fibering.hpp"

namespace nehari {

struct SolveOptions {
  double residual_tol = 1e-6;
  double energy_tol = 1e-8;
  int max_iterations = 5000;
  double fiber_tol = 1e-12;
  int multi_starts = 5;
  int inner_max_iterations = 400;  // minimax coefficient ascent
  std::uint64_t seed = 12345;
  int max_backtracks = 60;
  std::optional<Field> start;
};

struct SolveResult {
  Field u;                        // projected critical point t(u*) u*
  std::optional<double> lambda;   // NGRQ multiplier; absent on the direct path
  double level = 0.0;             // reduced functional value at convergence
  double energy_gap = 0.0;        // Phi_lambda(u) - c (NGRQ path only)
  double residual = std::numeric_limits<double>::infinity();
  // scaled l2 norm of the sphere-tangential reduced gradient at u*; bounded
  // by reduced_scale * residual, so it converges alongside the full residual
  double tangential_residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  std::vector<std::array<double, 2>> trace;  // per-iteration (value, residual)
};

struct MinimaxEstimate {
  int n = 1;
  double value = 0.0;
  int subspace_dim = 1;
  int inner_iterations = 0;
};

struct SweepRow {
  double c;
  double lambda;
  double residual;
  bool converged;
};

struct DeflatedSearch {
  std::vector<SolveResult> solutions;
  bool found_fewer = false;
};

/// Scaled l2 norm of the full-functional gradient; the convergence
/// certificate for a critical point.
inline double residual_norm(const ModelSpec& m, const Field& u, double lambda) {
  Field g = grad_phi_lambda(m, u, lambda);
  return std::sqrt(dot(g, g) * m.grid.cell_measure());
}

inline double residual_norm(const AffineProblem& ap, const Field& u) {
  Field g = grad_phi_affine(ap.grid, u, ap.quad, ap.params, ap.nonlin);
  return std::sqrt(dot(g, g) * ap.grid.cell_measure());
}

namespace detail {

struct RayEval {
  double t;
  double value;
};

struct FullEval {
  Field grad_full;          // gradient of the full functional at w = t u
  double reduced_scale;     // Euclidean reduced gradient at u = scale * grad_full
  std::optional<double> lambda;
  double energy_gap;
};

/// NGRQ reduced functional R(u) = lambda_c(t_c(u) u).
struct NgrqReduced {
  const ModelSpec& m;
  double c;

  const Grid& grid() const { return m.grid; }
  bool has_energy_gap() const { return true; }
  double norm(const Field& u) const { return model_norm(m, u); }
  Field norm_grad(const Field& u) const { return model_norm_grad(m, u); }

  RayEval project_value(const Field& u, double t_hint, double fiber_tol) const {
    ScaledHEvaluator H(m, u);
    const double alpha = m.alpha();
    const double i2 = eval_I2(m, u);
    if (i2 == 0.0) throw degenerate_input_error("reduced functional at u = 0");
    auto g = [&](double t) { return H(t) + alpha * c; };
    FiberingResult fr = solve_fiber_root(
        g, alpha * c > 0.0 ? 1.0 : -1.0, t_hint,
        fiber_tol * (1.0 + alpha * std::fabs(c)));
    const double value = (H.i1(fr.t) - c) / (std::pow(fr.t, alpha) * i2);
    return {fr.t, value};
  }

  FullEval full(const Field& u, double t) const {
    Field w = scaled(u, t);
    const double lambda = eval_lambda_c(m, w, c);
    Field gf = grad_phi_lambda(m, w, lambda);
    const double i2w = eval_I2(m, w);
    const double gap = eval_phi_lambda(m, w, lambda) - c;
    return {std::move(gf), t / i2w, lambda, gap};
  }
};

/// Direct-path reduced functional R(u) = Phi(t(u) u) for the Kirchhoff model.
struct KirchhoffReduced {
  const ModelSpec& m;

  const Grid& grid() const { return m.grid; }
  bool has_energy_gap() const { return false; }
  double norm(const Field& u) const { return model_norm(m, u); }
  Field norm_grad(const Field& u) const { return model_norm_grad(m, u); }

  RayEval project_value(const Field& u, double t_hint, double fiber_tol) const {
    const double ep = dirichlet_energy_p(m.grid, u, m.p, m.eps);
    if (ep == 0.0) throw degenerate_input_error("reduced functional at u = 0");
    DirectFiber fiber{m.grid, u, m.nonlin, std::pow(ep, m.theta / m.p), m.theta};
    auto g = [&](double t) { return fiber.derivative(t); };
    FiberingResult fr =
        solve_fiber_root(g, +1.0, t_hint, fiber_tol * (1.0 + fiber.head_coef));
    return {fr.t, fiber.value(fr.t)};
  }

  FullEval full(const Field& u, double t) const {
    Field w = scaled(u, t);
    Field gf = grad_phi_kirchhoff(m, w);
    return {std::move(gf), t, std::nullopt, 0.0};
  }
};

/// Direct-path reduced functional for the affine problem, over the sphere
/// {E(u) = 1}.
struct AffineReduced {
  const AffineProblem& ap;

  const Grid& grid() const { return ap.grid; }
  bool has_energy_gap() const { return false; }
  double norm(const Field& u) const {
    return affine_energy(ap.grid, u, ap.quad, ap.params);
  }
  Field norm_grad(const Field& u) const {
    const double E = affine_energy(ap.grid, u, ap.quad, ap.params);
    Field g = affine_energy_grad(ap.grid, u, ap.quad, ap.params);
    scale(g, std::pow(E, 1.0 - ap.params.p));
    return g;
  }

  RayEval project_value(const Field& u, double t_hint, double fiber_tol) const {
    const double E = affine_energy(ap.grid, u, ap.quad, ap.params);
    DirectFiber fiber{ap.grid, u, ap.nonlin, std::pow(E, ap.params.p),
                      ap.params.p};
    auto g = [&](double t) { return fiber.derivative(t); };
    FiberingResult fr =
        solve_fiber_root(g, +1.0, t_hint, fiber_tol * (1.0 + fiber.head_coef));
    return {fr.t, fiber.value(fr.t)};
  }

  FullEval full(const Field& u, double t) const {
    Field w = scaled(u, t);
    Field gf = grad_phi_affine(ap.grid, w, ap.quad, ap.params, ap.nonlin);
    return {std::move(gf), t, std::nullopt, 0.0};
  }
};

/// Projected gradient descent over the unit sphere of the problem norm:
/// steepest descent in the discrete H^1_0 metric, tangential projection
/// against the norm constraint, Armijo backtracking (shrink 0.5, slope 1e-4)
/// and renormalization retraction.
template <class Problem>
SolveResult descend(const Problem& prob, Field u, const SolveOptions& opts) {
  const Grid& grid = prob.grid();
  {
    const double nrm = prob.norm(u);
    if (nrm == 0.0) throw degenerate_input_error("start field is zero");
    scale(u, 1.0 / nrm);
  }
  DirichletLaplacianSolver precond(grid);
  const double res_weight = std::sqrt(grid.cell_measure());

  SolveResult out;
  double t_hint = 1.0;
  double step = 1.0;
  RayEval ray{1.0, 0.0};
  FullEval fe{zero_field(grid), 1.0, std::nullopt, 0.0};

  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    ray = prob.project_value(u, t_hint, opts.fiber_tol);
    t_hint = ray.t;
    fe = prob.full(u, ray.t);
    const double residual = std::sqrt(dot(fe.grad_full, fe.grad_full)) * res_weight;
    out.trace.push_back({ray.value, residual});
    out.residual = residual;
    const Field mg = prob.norm_grad(u);
    Field g = scaled(fe.grad_full, fe.reduced_scale);
    {
      Field gt = g;
      const double mm = dot(mg, mg);
      if (mm > 0.0) axpy(gt, -dot(mg, gt) / mm, mg);
      out.tangential_residual = std::sqrt(dot(gt, gt)) * res_weight;
    }
    const bool gap_ok =
        !prob.has_energy_gap() || std::fabs(fe.energy_gap) <= opts.energy_tol;
    if (residual <= opts.residual_tol && gap_ok) {
      out.converged = true;
      break;
    }

    Field r = precond.solve(g);
    Field pm = precond.solve(mg);
    const double denom = dot(mg, pm);
    if (!(denom > 0.0)) break;
    const double coef = dot(mg, r) / denom;
    Field d = r;
    axpy(d, -coef, pm);
    scale(d, -1.0);
    const double slope = -dot(g, d);
    if (!(slope > 0.0) || !std::isfinite(slope)) break;  // constrained-critical

    double s = std::min(step * 2.0, 1e6);
    bool accepted = false;
    Field u_trial = u;
    RayEval ray_trial{t_hint, 0.0};
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      u_trial = u;
      axpy(u_trial, s, d);
      const double nrm = prob.norm(u_trial);
      if (nrm > 0.0 && std::isfinite(nrm)) {
        scale(u_trial, 1.0 / nrm);
        bool feasible = true;
        try {
          ray_trial = prob.project_value(u_trial, t_hint, opts.fiber_tol);
        } catch (const hypothesis_violation&) {
          feasible = false;
        }
        if (feasible && std::isfinite(ray_trial.value) &&
            ray_trial.value <= ray.value - 1e-4 * s * slope) {
          accepted = true;
          break;
        }
      }
      s *= 0.5;
    }
    if (!accepted) break;  // no further descent at line-search resolution
    u = u_trial;
    t_hint = ray_trial.t;
    step = s;
  }

  out.u = scaled(u, ray.t);
  out.lambda = fe.lambda;
  out.level = ray.value;
  out.energy_gap = prob.has_energy_gap()
                       ? fe.energy_gap
                       : std::numeric_limits<double>::quiet_NaN();
  out.iterations = iter;
  return out;
}

inline Field default_start(const Grid& grid) {
  return laplacian_eigenbasis(grid, 1).front().second;
}

}  // namespace detail

/// Ground state by reduced-functional minimization over the unit sphere of
/// the model norm. NGRQ models need the prescribed level c; the Kirchhoff
/// model ignores it (direct path).
inline SolveResult ground_state(const ModelSpec& m, std::optional<double> c,
                                const SolveOptions& opts = {}) {
  Field start = opts.start ? *opts.start : detail::default_start(m.grid);
  SolveResult res;
  if (m.kind == ModelSpec::Kind::kirchhoff) {
    res = detail::descend(detail::KirchhoffReduced{m}, std::move(start), opts);
    if (m.theta < 0.0 && res.converged && !(res.level < 0.0))
      throw hypothesis_violation(
          "kirchhoff theta < 0: converged level is not negative; "
          "the nonlinearity does not match the degenerate setting");
  } else {
    if (!c || *c == 0.0)
      throw config_error("ground_state on the NGRQ path needs c != 0");
    res = detail::descend(detail::NgrqReduced{m, *c}, std::move(start), opts);
  }
  return res;
}

inline SolveResult ground_state(const AffineProblem& ap,
                                const SolveOptions& opts = {}) {
  Field start = opts.start ? *opts.start : detail::default_start(ap.grid);
  return detail::descend(detail::AffineReduced{ap}, std::move(start), opts);
}

namespace detail {

inline Field combine(const std::vector<std::pair<double, Field>>& basis,
                     const std::vector<double>& a) {
  Field u = zero_field(basis.front().second.grid);
  for (std::size_t i = 0; i < a.size(); ++i) axpy(u, a[i], basis[i].second);
  return u;
}

}  // namespace detail

/// Upper estimate of lambda_{n,c}: sup of the reduced functional over the
/// unit sphere of span(first n Laplacian eigenfields), a compact symmetric
/// set of genus >= n, by multi-start projected coefficient ascent.
/// `warm_start` (coefficients from the previous nested level, zero-padded)
/// makes a nested run nondecreasing by construction.
inline MinimaxEstimate minimax_estimate(
    const ModelSpec& m, double c, int n, const SolveOptions& opts = {},
    const std::vector<double>* warm_start = nullptr,
    std::vector<double>* best_out = nullptr) {
  if (n < 1) throw config_error("minimax_estimate needs n >= 1");
  if (!m.ngrq_path()) throw not_applicable("minimax_estimate is NGRQ-path only");
  const auto basis = laplacian_eigenbasis(m.grid, n);
  detail::NgrqReduced prob{m, c};

  MinimaxEstimate est;
  est.n = n;
  est.subspace_dim = n;

  auto evaluate = [&](const std::vector<double>& a, double t_hint) {
    Field u = detail::combine(basis, a);
    return prob.project_value(u, t_hint, opts.fiber_tol);
  };

  if (n == 1) {
    // Sup over the 0-sphere {±e1}; the functional is even.
    est.value = evaluate({1.0}, 1.0).value;
    est.inner_iterations = 1;
    if (best_out) *best_out = {1.0};
    return est;
  }

  std::vector<std::vector<double>> starts;
  {
    std::vector<double> axis(static_cast<std::size_t>(n), 0.0);
    axis.back() = 1.0;
    starts.push_back(axis);
    if (warm_start) {
      std::vector<double> padded(static_cast<std::size_t>(n), 0.0);
      for (std::size_t i = 0; i < warm_start->size() && i < padded.size(); ++i)
        padded[i] = (*warm_start)[i];
      double nn = 0.0;
      for (double v : padded) nn += v * v;
      if (nn > 0.0) {
        for (double& v : padded) v /= std::sqrt(nn);
        starts.push_back(padded);
      }
    }
    Rng rng(opts.seed + static_cast<std::uint64_t>(n) * 7919u);
    std::normal_distribution<double> dist(0.0, 1.0);
    while (static_cast<int>(starts.size()) < std::max(2, opts.multi_starts)) {
      std::vector<double> a(static_cast<std::size_t>(n));
      double nn = 0.0;
      for (double& v : a) {
        v = dist(rng);
        nn += v * v;
      }
      for (double& v : a) v /= std::sqrt(nn);
      starts.push_back(std::move(a));
    }
  }

  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_a;
  int total_inner = 0;

  for (auto& a : starts) {
    double t_hint = 1.0;
    detail::RayEval cur = evaluate(a, t_hint);
    t_hint = cur.t;
    double step = 1.0;
    for (int it = 0; it < opts.inner_max_iterations; ++it) {
      ++total_inner;
      Field u = detail::combine(basis, a);
      detail::FullEval fe = prob.full(u, cur.t);
      std::vector<double> ga(static_cast<std::size_t>(n));
      double proj = 0.0;
      for (int i = 0; i < n; ++i) {
        ga[static_cast<std::size_t>(i)] =
            fe.reduced_scale * dot(fe.grad_full, basis[static_cast<std::size_t>(i)].second);
        proj += ga[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)];
      }
      double gnorm2 = 0.0;
      for (int i = 0; i < n; ++i) {
        ga[static_cast<std::size_t>(i)] -= proj * a[static_cast<std::size_t>(i)];
        gnorm2 += ga[static_cast<std::size_t>(i)] * ga[static_cast<std::size_t>(i)];
      }
      if (gnorm2 <= 1e-18 * (1.0 + cur.value * cur.value)) break;

      double s = std::min(step * 2.0, 1e6);
      bool accepted = false;
      std::vector<double> a_trial;
      detail::RayEval ray_trial = cur;
      for (int bt = 0; bt < opts.max_backtracks; ++bt) {
        a_trial = a;
        double nn = 0.0;
        for (int i = 0; i < n; ++i) {
          a_trial[static_cast<std::size_t>(i)] += s * ga[static_cast<std::size_t>(i)];
          nn += a_trial[static_cast<std::size_t>(i)] * a_trial[static_cast<std::size_t>(i)];
        }
        for (double& v : a_trial) v /= std::sqrt(nn);
        bool feasible = true;
        try {
          ray_trial = evaluate(a_trial, t_hint);
        } catch (const hypothesis_violation&) {
          feasible = false;
        }
        if (feasible && ray_trial.value >= cur.value + 1e-4 * s * gnorm2) {
          accepted = true;
          break;
        }
        s *= 0.5;
      }
      if (!accepted) break;
      a = a_trial;
      cur = ray_trial;
      t_hint = cur.t;
      step = s;
    }
    if (cur.value > best) {
      best = cur.value;
      best_a = a;
    }
  }

  est.value = best;
  est.inner_iterations = total_inner;
  if (best_out) *best_out = best_a;
  return est;
}

/// Nested minimax run n = 1..n_max; the emitted sequence is nondecreasing by
/// construction (each level is seeded with the previous maximizer).
inline std::vector<MinimaxEstimate> minimax_sequence(const ModelSpec& m, double c,
                                                     int n_max,
                                                     const SolveOptions& opts = {}) {
  std::vector<MinimaxEstimate> out;
  std::vector<double> prev_best;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<double> best_a;
    MinimaxEstimate est = minimax_estimate(
        m, c, n, opts, prev_best.empty() ? nullptr : &prev_best, &best_a);
    if (!out.empty() && est.value < out.back().value)
      est.value = out.back().value;  // the previous maximizer is feasible here
    out.push_back(est);
    prev_best = std::move(best_a);
  }
  return out;
}

/// Per-c ground-state solve with warm starts from the previous entry.
/// Per-entry failures are recorded in the row; the sweep continues.
inline std::vector<SweepRow> sweep_c(const ModelSpec& m,
                                     const std::vector<double>& c_values,
                                     const SolveOptions& opts = {}) {
  std::vector<SweepRow> rows;
  rows.reserve(c_values.size());
  SolveOptions o = opts;
  for (double c : c_values) {
    try {
      SolveResult res = ground_state(m, c, o);
      rows.push_back({c, res.lambda.value_or(res.level), res.residual,
                      res.converged});
      if (res.converged) {
        Field dir = res.u;
        const double nrm = model_norm(m, dir);
        if (nrm > 0.0) {
          scale(dir, 1.0 / nrm);
          o.start = std::move(dir);
        }
      }
    } catch (const std::exception&) {
      rows.push_back({c, std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN(), false});
    }
  }
  return rows;
}

/// Repeated ground-state searches started from successive eigenfield
/// directions, L2-orthogonalized against previously found solutions (start
/// only). Distinct solutions are deduplicated by sign-normalized relative L2
/// distance >= 1e-3.
inline DeflatedSearch deflated_search(const ModelSpec& m, std::optional<double> c,
                                      int count, const SolveOptions& opts = {}) {
  if (count < 1) throw config_error("deflated_search needs count >= 1");
  DeflatedSearch out;
  const int attempts =
      static_cast<int>(std::min<std::int64_t>(count + 3, m.grid.node_count()));
  const auto basis = laplacian_eigenbasis(m.grid, attempts);

  for (int k = 0; k < attempts && static_cast<int>(out.solutions.size()) < count;
       ++k) {
    Field start = basis[static_cast<std::size_t>(k)].second;
    for (const auto& sol : out.solutions) {
      const double denom = l2_inner(m.grid, sol.u, sol.u);
      if (denom > 0.0)
        axpy(start, -l2_inner(m.grid, start, sol.u) / denom, sol.u);
    }
    if (std::sqrt(dot(start, start)) < 1e-12) continue;

    SolveOptions o = opts;
    o.start = start;
    SolveResult res;
    try {
      res = ground_state(m, c, o);
    } catch (const std::exception&) {
      continue;
    }
    if (!res.converged) continue;

    bool distinct = true;
    for (const auto& sol : out.solutions) {
      Field diff = res.u;
      axpy(diff, -1.0, sol.u);
      Field sum = res.u;
      axpy(sum, 1.0, sol.u);
      const double ref = lp_norm(m.grid, sol.u, 2.0);
      const double dist = std::min(lp_norm(m.grid, diff, 2.0),
                                   lp_norm(m.grid, sum, 2.0));
      if (ref > 0.0 && dist / ref < 1e-3) {
        distinct = false;
        break;
      }
    }
    if (distinct) out.solutions.push_back(std::move(res));
  }
  out.found_fewer = static_cast<int>(out.solutions.size()) < count;
  return out;
}

}  // namespace nehari
