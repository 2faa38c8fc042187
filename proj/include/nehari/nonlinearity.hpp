#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "nehari/common.hpp"

namespace nehari {

/// Odd scalar nonlinearities with closed-form primitives where they exist.
///
///   PurePower{r}:          f(s) = |s|^{r-2} s,                       r > 1
///   PowerLog{p}:           f(s) = |s|^{p-2} s ln(|s|+1)
///   SaturatedPower{p}:     f(s) = |s|^{p-1} s / (|s|+1)
///   PiecewisePower{beta,r}:     odd ext. of s^beta on [0,1], s^r on [1,inf)
///   PiecewisePowerLog{beta,th}: odd ext. of s^beta on [0,1],
///                               s^{th-1} ln(s+1)/ln 2 on [1,inf)
struct NonlinearitySpec {
  enum class Kind {
    pure_power,
    power_log,
    saturated_power,
    piecewise_power,
    piecewise_power_log,
  };
  Kind kind = Kind::pure_power;
  double r = 4.0;      // pure_power / piecewise_power outer exponent
  double p = 3.0;      // power_log / saturated_power exponent
  double beta = 1.0;   // piecewise inner exponent
  double theta = 1.0;  // piecewise_power_log outer exponent

  static NonlinearitySpec pure_power(double r) {
    if (!(r > 1.0)) throw config_error("pure_power requires r > 1");
    NonlinearitySpec s;
    s.kind = Kind::pure_power;
    s.r = r;
    return s;
  }
  static NonlinearitySpec power_log(double p) {
    NonlinearitySpec s;
    s.kind = Kind::power_log;
    s.p = p;
    return s;
  }
  static NonlinearitySpec saturated_power(double p) {
    NonlinearitySpec s;
    s.kind = Kind::saturated_power;
    s.p = p;
    return s;
  }
  static NonlinearitySpec piecewise_power(double beta, double r) {
    if (!(beta > 0.0)) throw config_error("piecewise_power requires beta > 0");
    NonlinearitySpec s;
    s.kind = Kind::piecewise_power;
    s.beta = beta;
    s.r = r;
    return s;
  }
  static NonlinearitySpec piecewise_power_log(double beta, double theta) {
    if (!(beta > 0.0)) throw config_error("piecewise_power_log requires beta > 0");
    NonlinearitySpec s;
    s.kind = Kind::piecewise_power_log;
    s.beta = beta;
    s.theta = theta;
    return s;
  }
};

namespace detail {

// |s|^{e-1} s without 0^negative blowing up at s = 0.
inline double signed_pow(double s, double e) {
  if (s == 0.0) return 0.0;
  return (s > 0.0 ? 1.0 : -1.0) * std::pow(std::fabs(s), e);
}

// The acceptance tolerance stays constant across levels and is scaled by the
// magnitude of the top-level estimate; per-level halving with an absolute
// tolerance would recurse on rounding noise for large integrands.
inline double adaptive_simpson_rec(double (*f)(double, double), double param,
                                   double a, double b, double fa, double fm,
                                   double fb, double whole, double tol,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm, param), frm = f(rm, param);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, param, a, m, fa, flm, fm, left, tol, depth - 1) +
         adaptive_simpson_rec(f, param, m, b, fm, frm, fb, right, tol, depth - 1);
}

inline double adaptive_simpson(double (*f)(double, double), double param, double a,
                               double b, double rel_tol) {
  if (a == b) return 0.0;
  const double fa = f(a, param), fb = f(b, param), fm = f(0.5 * (a + b), param);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = rel_tol * (1.0 + std::fabs(whole));
  return adaptive_simpson_rec(f, param, a, b, fa, fm, fb, whole, tol, 30);
}

inline bool near_integer(double x) {
  return std::fabs(x - std::round(x)) < 1e-12 && std::round(x) >= 0.0;
}

// R_q(a, b) = int_a^b t^q / (1+t) dt for nonnegative integer q, 0 <= a <= b.
inline double rational_power_integral_int(int q, double a, double b) {
  // R_0 = ln(1+t); R_q = t^q/q - R_{q-1}.
  double r = std::log1p(b) - std::log1p(a);
  for (int j = 1; j <= q; ++j)
    r = (std::pow(b, j) - std::pow(a, j)) / j - r;
  return r;
}

inline double powerlog_integrand(double t, double pm1) {
  return std::pow(t, pm1) * std::log1p(t);
}
inline double saturated_integrand(double t, double p) {
  return std::pow(t, p) / (1.0 + t);
}

}  // namespace detail

/// True when F_eval falls back to adaptive quadrature (no closed primitive
/// for this variant's exponents).
inline bool primitive_by_quadrature(const NonlinearitySpec& spec) {
  switch (spec.kind) {
    case NonlinearitySpec::Kind::pure_power:
    case NonlinearitySpec::Kind::piecewise_power:
      return false;
    case NonlinearitySpec::Kind::power_log:
      return !detail::near_integer(spec.p);
    case NonlinearitySpec::Kind::saturated_power:
      return !detail::near_integer(spec.p);
    case NonlinearitySpec::Kind::piecewise_power_log:
      return !(detail::near_integer(spec.theta) && spec.theta >= 1.0);
  }
  return false;
}

inline double f_eval(const NonlinearitySpec& spec, double s) {
  const double a = std::fabs(s);
  switch (spec.kind) {
    case NonlinearitySpec::Kind::pure_power:
      return detail::signed_pow(s, spec.r - 1.0);
    case NonlinearitySpec::Kind::power_log:
      return detail::signed_pow(s, spec.p - 1.0) * std::log1p(a);
    case NonlinearitySpec::Kind::saturated_power:
      return detail::signed_pow(s, spec.p) / (1.0 + a);
    case NonlinearitySpec::Kind::piecewise_power:
      if (a <= 1.0) return detail::signed_pow(s, spec.beta);
      return detail::signed_pow(s, spec.r);
    case NonlinearitySpec::Kind::piecewise_power_log:
      if (a <= 1.0) return detail::signed_pow(s, spec.beta);
      return detail::signed_pow(s, spec.theta - 1.0) * std::log1p(a) / M_LN2;
  }
  return 0.0;
}

/// F(s) = int_0^s f
/// Closed form whenever the exponents admit one; otherwise adaptive
/// quadrature to 1e-12 (see primitive_by_quadrature).
inline double F_eval(const NonlinearitySpec& spec, double s) {
  const double a = std::fabs(s);  // F is even
  constexpr double kQuadTol = 1e-13;
  switch (spec.kind) {
    case NonlinearitySpec::Kind::pure_power:
      return std::pow(a, spec.r) / spec.r;
    case NonlinearitySpec::Kind::power_log: {
      if (a == 0.0) return 0.0;
      // parts: int t^{p-1} ln(1+t) = (t^p ln(1+t) - int t^p/(1+t))/p
      const double rational =
          detail::near_integer(spec.p)
              ? detail::rational_power_integral_int(
                    static_cast<int>(std::round(spec.p)), 0.0, a)
              : detail::adaptive_simpson(detail::saturated_integrand, spec.p, 0.0,
                                         a, kQuadTol);
      return (std::pow(a, spec.p) * std::log1p(a) - rational) / spec.p;
    }
    case NonlinearitySpec::Kind::saturated_power: {
      if (a == 0.0) return 0.0;
      if (detail::near_integer(spec.p)) {
        const int p = static_cast<int>(std::round(spec.p));
        return detail::rational_power_integral_int(p, 0.0, a);
      }
      return detail::adaptive_simpson(detail::saturated_integrand, spec.p, 0.0, a,
                                      kQuadTol);
    }
    case NonlinearitySpec::Kind::piecewise_power: {
      const double inner = std::pow(std::min(a, 1.0), spec.beta + 1.0) / (spec.beta + 1.0);
      if (a <= 1.0) return inner;
      if (std::fabs(spec.r + 1.0) < 1e-14) return inner + std::log(a);
      return inner + (std::pow(a, spec.r + 1.0) - 1.0) / (spec.r + 1.0);
    }
    case NonlinearitySpec::Kind::piecewise_power_log: {
      const double inner = std::pow(std::min(a, 1.0), spec.beta + 1.0) / (spec.beta + 1.0);
      if (a <= 1.0) return inner;
      const double th = spec.theta;
      if (std::fabs(th) < 1e-12)  // dilogarithm case, no parts split
        return inner + detail::adaptive_simpson(detail::powerlog_integrand, -1.0,
                                                1.0, a,
                                                kQuadTol) /
                           M_LN2;
      // parts on [1, a]: int t^{th-1} ln(1+t) = (t^th ln(1+t) - int t^th/(1+t))/th
      const double rational =
          (detail::near_integer(th) && th >= 1.0)
              ? detail::rational_power_integral_int(
                    static_cast<int>(std::round(th)), 1.0, a)
              : detail::adaptive_simpson(detail::saturated_integrand, th, 1.0, a,
                                         kQuadTol);
      const double tail = (std::pow(a, th) * std::log1p(a) - M_LN2 - rational) / th;
      return inner + tail / M_LN2;
    }
  }
  return 0.0;
}

/// G_alpha(s) = s f(s) - alpha F(s); the alpha = 2 case is the classical
/// superlinearity combination.
inline double g_alpha_eval(const NonlinearitySpec& spec, double s, double alpha) {
  return s * f_eval(spec, s) - alpha * F_eval(spec, s);
}

/// Derivative of f. Throws at points where f is not differentiable (s = 0 for
/// sub-linear inner exponents). At the piecewise junction |s| = 1 the outer
/// branch's one-sided derivative is returned and *nonsmooth is set.
inline double fprime_eval(const NonlinearitySpec& spec, double s,
                          bool* nonsmooth = nullptr) {
  if (nonsmooth) *nonsmooth = false;
  const double a = std::fabs(s);
  auto require_smooth_origin = [&](double exponent) {
    // d/ds |s|^{e-1} s has a finite limit at 0 only for e >= 1.
    if (a == 0.0 && exponent < 1.0)
      throw std::domain_error("fprime_eval: derivative singular at s = 0");
  };
  switch (spec.kind) {
    case NonlinearitySpec::Kind::pure_power:
      require_smooth_origin(spec.r - 1.0);
      if (a == 0.0) return spec.r == 2.0 ? 1.0 : 0.0;
      return (spec.r - 1.0) * std::pow(a, spec.r - 2.0);
    case NonlinearitySpec::Kind::power_log:
      require_smooth_origin(spec.p - 1.0);
      if (a == 0.0) return 0.0;
      return (spec.p - 1.0) * std::pow(a, spec.p - 2.0) * std::log1p(a) +
             std::pow(a, spec.p - 1.0) / (1.0 + a);
    case NonlinearitySpec::Kind::saturated_power:
      if (a == 0.0) {
        if (spec.p < 1.0) throw std::domain_error("fprime_eval: singular at 0");
        return spec.p == 1.0 ? 1.0 : 0.0;
      }
      return std::pow(a, spec.p - 1.0) * (spec.p + (spec.p - 1.0) * a) /
             ((1.0 + a) * (1.0 + a));
    case NonlinearitySpec::Kind::piecewise_power: {
      if (a == 1.0) {
        if (nonsmooth && spec.beta != spec.r) *nonsmooth = true;
        return spec.r;  // outer one-sided derivative, r * 1^{r-1}
      }
      if (a < 1.0) {
        require_smooth_origin(spec.beta);
        if (a == 0.0) return spec.beta == 1.0 ? 1.0 : 0.0;
        return spec.beta * std::pow(a, spec.beta - 1.0);
      }
      return spec.r * std::pow(a, spec.r - 1.0);
    }
    case NonlinearitySpec::Kind::piecewise_power_log: {
      auto outer = [&](double t) {
        return ((spec.theta - 1.0) * std::pow(t, spec.theta - 2.0) * std::log1p(t) +
                std::pow(t, spec.theta - 1.0) / (1.0 + t)) /
               M_LN2;
      };
      if (a == 1.0) {
        if (nonsmooth) *nonsmooth = true;
        return outer(1.0);
      }
      if (a < 1.0) {
        require_smooth_origin(spec.beta);
        if (a == 0.0) return spec.beta == 1.0 ? 1.0 : 0.0;
        return spec.beta * std::pow(a, spec.beta - 1.0);
      }
      return outer(a);
    }
  }
  return 0.0;
}

/// (C, r) such that |f(s)| <= C (1 + |s|^{r-1}) holds for this variant.
struct GrowthCertificate {
  double C;
  double r;
};

inline GrowthCertificate growth_certificate(const NonlinearitySpec& spec) {
  switch (spec.kind) {
    case NonlinearitySpec::Kind::pure_power:
      return {1.0, spec.r};
    case NonlinearitySpec::Kind::power_log:
      return {1.0, spec.p + 1.0};
    case NonlinearitySpec::Kind::saturated_power:
      return {1.0, spec.p};
    case NonlinearitySpec::Kind::piecewise_power:
      return {1.0, std::max(2.0, spec.r + 1.0)};
    case NonlinearitySpec::Kind::piecewise_power_log:
      return {2.0, std::max(2.0, spec.theta + 1.0)};
  }
  return {1.0, 2.0};
}

inline std::string kind_name(const NonlinearitySpec& spec) {
  switch (spec.kind) {
    case NonlinearitySpec::Kind::pure_power: return "pure_power";
    case NonlinearitySpec::Kind::power_log: return "power_log";
    case NonlinearitySpec::Kind::saturated_power: return "saturated_power";
    case NonlinearitySpec::Kind::piecewise_power: return "piecewise_power";
    case NonlinearitySpec::Kind::piecewise_power_log: return "piecewise_power_log";
  }
  return "unknown";
}

}  // namespace nehari
