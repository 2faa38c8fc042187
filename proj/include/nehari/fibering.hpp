#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "nehari/affine.hpp"
#include "nehari/models.hpp"

namespace nehari {

/// Scalar Nehari projection: root of the fibering equation along the ray
/// t -> t*u, with its bracket and the extremum type of the fiber map there.
struct FiberingResult {
  double t = 1.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
  enum class Kind { max, min } kind = Kind::max;
  bool nonunimodal_suspected = false;
  bool bracket_expanded = false;
};

namespace detail {

constexpr double kBracketCap = 1152921504606846976.0;  // 2^60

/// Finds the unique sign change of g on (0, inf), where g keeps the sign
/// `sign_near_zero` below the root. Geometric expansion from t_init, then
/// bisection to relative width 1e-12, then a few secant-Newton polish steps.
template <class G>
FiberingResult solve_fiber_root(G&& g, double sign_near_zero, double t_init,
                                double residual_tol, int* evals_out = nullptr) {
  FiberingResult res;
  int evals = 0;
  auto geval = [&](double t) {
    ++evals;
    return g(t);
  };

  double t0 = t_init > 0.0 ? t_init : 1.0;
  double g0 = geval(t0);
  double lo, hi, glo, ghi;
  if (g0 == 0.0) {
    lo = hi = t0;
    glo = ghi = 0.0;
  } else {
    const bool go_up = (g0 > 0.0) == (sign_near_zero > 0.0);
    double a = t0, ga = g0, b, gb;
    int expansions = 0;
    for (;;) {
      b = go_up ? a * 2.0 : a * 0.5;
      if (b > kBracketCap || b < 1.0 / kBracketCap)
        throw hypothesis_violation(
            "fibering: no root of the fiber equation within the bracket cap; "
            "the model/parameters violate the ray-shape hypothesis");
      gb = geval(b);
      ++expansions;
      if (!std::isfinite(gb))
        throw hypothesis_violation("fibering: fiber equation not finite on ray");
      if ((ga > 0.0) != (gb > 0.0) || gb == 0.0) break;
      a = b;
      ga = gb;
    }
    res.bracket_expanded = expansions > 1;
    lo = std::min(a, b);
    hi = std::max(a, b);
    glo = (a < b) ? ga : gb;
    ghi = (a < b) ? gb : ga;
  }

  // Bisection to 1e-12 relative bracket width.
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at rounding limit
    const double gm = geval(mid);
    if (gm == 0.0) {
      lo = hi = mid;
      glo = ghi = 0.0;
      break;
    }
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
      ghi = gm;
    }
  }

  double t = 0.5 * (lo + hi);
  double gt = (lo == hi) ? glo : geval(t);

  // Secant-Newton polish on the analytic fiber derivative (<= 5 steps),
  // confined to the bracket.
  double t_prev = lo, g_prev = glo;
  if (t_prev == t) {
    t_prev = hi;
    g_prev = ghi;
  }
  for (int step = 0; step < 5 && gt != 0.0 && t_prev != t && g_prev != gt; ++step) {
    const double t_next = t - gt * (t - t_prev) / (gt - g_prev);
    if (!(t_next > lo && t_next < hi) || t_next == t) break;
    t_prev = t;
    g_prev = gt;
    t = t_next;
    gt = geval(t);
    if (std::fabs(gt) <= residual_tol) break;
  }

  res.t = t;
  res.lo = lo;
  res.hi = hi;
  res.iterations = evals;

  // Orientation check: below the root the fiber derivative keeps the sign of
  // sign_near_zero, so g must cross downward (sign_near_zero > 0) or upward.
  if (lo < hi) {
    const double slope = (ghi - glo) / (hi - lo);
    if (slope * sign_near_zero > 0.0) res.nonunimodal_suspected = true;
  }
  if (evals_out) *evals_out = evals;
  return res;
}

/// t -> H(t*u) with direction-constant parts of the model precomputed.
class ScaledHEvaluator {
 public:
  ScaledHEvaluator(const ModelSpec& m, const Field& u) : m_(m), u_(u) {
    switch (m.kind) {
      case ModelSpec::Kind::semilinear:
      case ModelSpec::Kind::concave_convex:
        d2_ = dirichlet_energy_p(m.grid, u, 2.0, 0.0);
        break;
      case ModelSpec::Kind::brezis_nirenberg:
        d2_ = dirichlet_energy_p(m.grid, u, 2.0, 0.0);
        pint_ = lp_integral(m.grid, u, m.two_star);
        break;
      case ModelSpec::Kind::pq_general: {
        cell_s2_.reserve(static_cast<std::size_t>(m.grid.node_count()));
        detail::for_each_cell(m.grid, u.values, [&](const double* g, int, int, int) {
          double s2 = 0.0;
          for (int k = 0; k < m.grid.dim; ++k) s2 += g[k] * g[k];
          cell_s2_.push_back(s2);
        });
        break;
      }
      default:
        break;
    }
  }

  double operator()(double t) const {
    const double w = m_.grid.cell_measure();
    switch (m_.kind) {
      case ModelSpec::Kind::semilinear: {
        double s = 0.0;
        for (double v : u_.values) {
          const double tv = t * v;
          s += 2.0 * F_eval(m_.nonlin, tv) - f_eval(m_.nonlin, tv) * tv;
        }
        return s * w;
      }
      case ModelSpec::Kind::concave_convex: {
        double s = 0.0;
        for (double v : u_.values) {
          const double tv = t * v;
          s += m_.q * F_eval(m_.nonlin, tv) - f_eval(m_.nonlin, tv) * tv;
        }
        return 0.5 * (2.0 - m_.q) * t * t * d2_ + s * w;
      }
      case ModelSpec::Kind::brezis_nirenberg:
        return (2.0 - m_.two_star) / m_.two_star * std::pow(t, m_.two_star) * pint_;
      case ModelSpec::Kind::pq_general: {
        const double e2 = m_.eps * m_.eps;
        double s = 0.0;
        for (double s2raw : cell_s2_) {
          const double s2 = t * t * s2raw;
          const double aV = detail::pq_flux_weight(s2, e2, m_.p, m_.q) * s2;
          const double A = std::pow(s2 + e2, 0.5 * m_.p) +
                           (m_.p / m_.q) * std::pow(s2 + e2, 0.5 * m_.q);
          s += aV - (m_.r / m_.p) * A;
        }
        return s * w;
      }
      case ModelSpec::Kind::kirchhoff:
        throw not_applicable("H is not defined for the kirchhoff path");
    }
    return 0.0;
  }

  /// I1(t*u), sharing the cached pieces.
  double i1(double t) const {
    const double w = m_.grid.cell_measure();
    switch (m_.kind) {
      case ModelSpec::Kind::semilinear:
      case ModelSpec::Kind::concave_convex: {
        double F = 0.0;
        for (double v : u_.values) F += F_eval(m_.nonlin, t * v);
        return 0.5 * t * t * d2_ - F * w;
      }
      case ModelSpec::Kind::brezis_nirenberg:
        return 0.5 * t * t * d2_ -
               std::pow(t, m_.two_star) * pint_ / m_.two_star;
      case ModelSpec::Kind::pq_general: {
        const double e2 = m_.eps * m_.eps;
        double s = 0.0;
        for (double s2raw : cell_s2_) {
          const double s2 = t * t * s2raw;
          s += std::pow(s2 + e2, 0.5 * m_.p) +
               (m_.p / m_.q) * std::pow(s2 + e2, 0.5 * m_.q);
        }
        return s * w / m_.p;
      }
      case ModelSpec::Kind::kirchhoff:
        throw not_applicable("kirchhoff model has no I1");
    }
    return 0.0;
  }

 private:
  const ModelSpec& m_;
  const Field& u_;
  double d2_ = 0.0;
  double pint_ = 0.0;
  std::vector<double> cell_s2_;
};

/// Direct-path fiber: Phi(t*u) = (A/e) t^e - int F(t*u) with A, e the
/// homogeneous head (Kirchhoff: A = |u|^theta, e = theta; affine: A = E^p(u),
/// e = p).
struct DirectFiber {
  const Grid& grid;
  const Field& u;
  NonlinearitySpec nonlin;
  double head_coef;
  double head_exp;

  double value(double t) const {
    double F = 0.0;
    for (double v : u.values) F += F_eval(nonlin, t * v);
    return head_coef / head_exp * std::pow(t, head_exp) - F * grid.cell_measure();
  }
  double derivative(double t) const {
    double fu = 0.0;
    for (double v : u.values) fu += f_eval(nonlin, t * v) * v;
    return head_coef * std::pow(t, head_exp - 1.0) - fu * grid.cell_measure();
  }
};

}  // namespace detail

/// Solves H(t*u) = -alpha*c for t > 0 (the NGRQ Nehari projection).
/// Residual contract: |H(t u) + alpha c| <= tol * (1 + alpha |c|).
inline FiberingResult solve_t_c(const ModelSpec& m, const Field& u, double c,
                                double tol = 1e-12, double t_init = 1.0) {
  if (!m.ngrq_path()) throw not_applicable("solve_t_c needs an NGRQ-path model");
  if (c == 0.0) throw degenerate_input_error("solve_t_c requires c != 0");
  if (!(tol > 0.0)) throw std::domain_error("solve_t_c requires tol > 0");
  const double alpha = m.alpha();
  if (eval_I2(m, u) == 0.0)
    throw degenerate_input_error("solve_t_c requires u != 0");

  detail::ScaledHEvaluator H(m, u);
  const double residual_cap = tol * (1.0 + alpha * std::fabs(c));
  auto g = [&](double t) { return H(t) + alpha * c; };
  // H(0) = 0, so g(0+) = alpha*c.
  FiberingResult res =
      detail::solve_fiber_root(g, alpha * c > 0.0 ? 1.0 : -1.0, t_init,
                               residual_cap);
  res.kind = c > 0.0 ? FiberingResult::Kind::max : FiberingResult::Kind::min;
  return res;
}

/// Solves d/dt Phi(t*u) = 0 for the Kirchhoff path (fiber max under the
/// superlinearity conditions).
inline FiberingResult solve_t_nehari(const ModelSpec& m, const Field& u,
                                     double tol = 1e-12, double t_init = 1.0) {
  if (m.kind != ModelSpec::Kind::kirchhoff)
    throw not_applicable("solve_t_nehari(model) serves the kirchhoff path; "
                         "NGRQ models project via solve_t_c");
  const double ep = dirichlet_energy_p(m.grid, u, m.p, m.eps);
  if (ep == 0.0) throw degenerate_input_error("solve_t_nehari requires u != 0");
  detail::DirectFiber fiber{m.grid, u, m.nonlin, std::pow(ep, m.theta / m.p),
                            m.theta};
  const double residual_cap = tol * (1.0 + fiber.head_coef);
  auto g = [&](double t) { return fiber.derivative(t); };
  FiberingResult res = detail::solve_fiber_root(g, +1.0, t_init, residual_cap);
  res.kind = FiberingResult::Kind::max;
  return res;
}

/// Affine Nehari projection: root of t^{p-1} E^p(u) = int f(t u) u.
inline FiberingResult solve_t_nehari(const AffineProblem& ap, const Field& u,
                                     double tol = 1e-12, double t_init = 1.0) {
  const double E = affine_energy(ap.grid, u, ap.quad, ap.params);
  detail::DirectFiber fiber{ap.grid, u, ap.nonlin, std::pow(E, ap.params.p),
                            ap.params.p};
  const double residual_cap = tol * (1.0 + fiber.head_coef);
  auto g = [&](double t) { return fiber.derivative(t); };
  FiberingResult res = detail::solve_fiber_root(g, +1.0, t_init, residual_cap);
  res.kind = FiberingResult::Kind::max;
  return res;
}

struct ProfileRow {
  double t;
  double value;
  double derivative;
};

/// Samples the fiber map along the ray through u: t -> lambda_c(t u) with its
/// analytic derivative (H(tu)+alpha c)/(t^{alpha+1} I2(u)) when c is given,
/// or t -> Phi(t u) with d/dt Phi(t u) on the direct path.
inline std::vector<ProfileRow> fibering_profile(const ModelSpec& m, const Field& u,
                                                std::optional<double> c,
                                                const std::vector<double>& t_grid) {
  std::vector<ProfileRow> rows;
  rows.reserve(t_grid.size());
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i] < t_grid[i + 1]))
      throw config_error("fibering_profile needs an increasing positive t grid");
  if (!t_grid.empty() && !(t_grid.front() > 0.0))
    throw config_error("fibering_profile needs an increasing positive t grid");

  if (m.kind == ModelSpec::Kind::kirchhoff || !c.has_value()) {
    if (m.kind != ModelSpec::Kind::kirchhoff)
      throw config_error("fibering_profile without c is the Kirchhoff path");
    const double ep = dirichlet_energy_p(m.grid, u, m.p, m.eps);
    if (ep == 0.0) throw degenerate_input_error("profile requires u != 0");
    detail::DirectFiber fiber{m.grid, u, m.nonlin, std::pow(ep, m.theta / m.p),
                              m.theta};
    for (double t : t_grid) rows.push_back({t, fiber.value(t), fiber.derivative(t)});
    return rows;
  }

  const double alpha = m.alpha();
  const double i2 = eval_I2(m, u);
  if (i2 == 0.0) throw degenerate_input_error("profile requires u != 0");
  detail::ScaledHEvaluator H(m, u);
  for (double t : t_grid) {
    const double value = (H.i1(t) - *c) / (std::pow(t, alpha) * i2);
    const double deriv = (H(t) + alpha * *c) / (std::pow(t, alpha + 1.0) * i2);
    rows.push_back({t, value, deriv});
  }
  return rows;
}

inline std::vector<ProfileRow> fibering_profile(const AffineProblem& ap,
                                                const Field& u,
                                                const std::vector<double>& t_grid) {
  const double E = affine_energy(ap.grid, u, ap.quad, ap.params);
  detail::DirectFiber fiber{ap.grid, u, ap.nonlin, std::pow(E, ap.params.p),
                            ap.params.p};
  std::vector<ProfileRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) rows.push_back({t, fiber.value(t), fiber.derivative(t)});
  return rows;
}

}  // namespace nehari
