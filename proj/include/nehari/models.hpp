#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "nehari/grid.hpp"
#include "nehari/nonlinearity.hpp"

namespace nehari {

/// One of the six variational models, with its grid and scalar parameters.
///
/// NGRQ path (Phi_lambda = I1 - lambda*I2, I2 alpha-homogeneous):
///   Semilinear       I1 = 1/2|grad u|_2^2 - int F(u),   I2 = 1/2|u|_2^2,   alpha = 2
///   ConcaveConvex    I1 as above,                       I2 = 1/q|u|_q^q,   alpha = q
///   BrezisNirenberg  I1 = 1/2|grad u|_2^2 - 1/2* |u|_{2*}^{2*}, I2 = 1/2|u|_2^2
///   PQGeneral        I1 = 1/p int A(|grad u|^p),        I2 = 1/r|u|_r^r,   alpha = r
///                    with a(t) = 1 + t^{(q-p)/p}, A(t) = t + (p/q) t^{q/p}
/// Direct path (no multiplier):
///   Kirchhoff        Phi = 1/theta |u|_{1,p}^theta - int F(u)
struct ModelSpec {
  enum class Kind {
    semilinear,
    concave_convex,
    brezis_nirenberg,
    pq_general,
    kirchhoff,
  };

  Kind kind = Kind::semilinear;
  Grid grid;
  NonlinearitySpec nonlin;
  double q = 1.5;        // concave_convex / pq_general
  double p = 2.0;        // pq_general / kirchhoff
  double r = 3.0;        // pq_general (alpha = r)
  double k0 = 1.0;       // pq_general (A1) bounds, used by validators
  double k1 = 1.0;
  int N = 3;             // brezis_nirenberg
  double two_star = 6.0; // brezis_nirenberg critical exponent
  double theta = 1.0;    // kirchhoff
  double eps = 0.0;      // gradient regularization for p != 2 terms

  static ModelSpec semilinear(const Grid& g, const NonlinearitySpec& f) {
    ModelSpec m;
    m.kind = Kind::semilinear;
    m.grid = g;
    m.nonlin = f;
    return m;
  }
  static ModelSpec concave_convex(const Grid& g, const NonlinearitySpec& f,
                                  double q) {
    if (!(q > 1.0 && q < 2.0))
      throw config_error("concave_convex requires 1 < q < 2");
    ModelSpec m;
    m.kind = Kind::concave_convex;
    m.grid = g;
    m.nonlin = f;
    m.q = q;
    return m;
  }
  static ModelSpec brezis_nirenberg(const Grid& g, int N, double two_star) {
    if (N < 3) throw config_error("brezis_nirenberg requires N >= 3");
    if (!(two_star > 2.0)) throw config_error("brezis_nirenberg requires 2* > 2");
    ModelSpec m;
    m.kind = Kind::brezis_nirenberg;
    m.grid = g;
    m.N = N;
    m.two_star = two_star;
    m.nonlin = NonlinearitySpec::pure_power(two_star);
    return m;
  }
  static ModelSpec pq_general(const Grid& g, double p, double q, double r,
                              double k0 = 1.0, double k1 = 1.0) {
    if (!(p > 1.0 && q > 1.0 && q <= p))
      throw config_error("pq_general requires 1 < q <= p");
    if (!(r > 1.0)) throw config_error("pq_general requires r > 1");
    if (!(k0 > 0.0 && k1 > 0.0)) throw config_error("pq_general requires k0, k1 > 0");
    ModelSpec m;
    m.kind = Kind::pq_general;
    m.grid = g;
    m.p = p;
    m.q = q;
    m.r = r;
    m.k0 = k0;
    m.k1 = k1;
    m.eps = (std::min(p, q) < 2.0) ? 1e-8 : 0.0;
    return m;
  }
  static ModelSpec kirchhoff(const Grid& g, double p, double theta,
                             const NonlinearitySpec& f) {
    if (!(p > 1.0)) throw config_error("kirchhoff requires p > 1");
    if (!(theta <= 1.0) || theta == 0.0)
      throw config_error("kirchhoff requires theta <= 1, theta != 0");
    ModelSpec m;
    m.kind = Kind::kirchhoff;
    m.grid = g;
    m.p = p;
    m.theta = theta;
    m.nonlin = f;
    m.eps = (p < 2.0) ? 1e-8 : 0.0;
    return m;
  }

  bool ngrq_path() const { return kind != Kind::kirchhoff; }

  /// Homogeneity degree of I2.
  double alpha() const {
    switch (kind) {
      case Kind::semilinear:
      case Kind::brezis_nirenberg:
        return 2.0;
      case Kind::concave_convex:
        return q;
      case Kind::pq_general:
        return r;
      case Kind::kirchhoff:
        throw not_applicable("kirchhoff model has no I2 / alpha");
    }
    return 2.0;
  }

  /// The BN model is meaningful as stated only on 3D grids with the matching
  /// critical exponent; other configurations run as formal expressions.
  bool supercritical_formalism() const {
    if (kind != Kind::brezis_nirenberg) return false;
    if (grid.dim != 3 || N != 3) return true;
    return std::fabs(two_star - 2.0 * N / (N - 2.0)) > 1e-12;
  }
};

inline std::string kind_name(const ModelSpec& m) {
  switch (m.kind) {
    case ModelSpec::Kind::semilinear: return "semilinear";
    case ModelSpec::Kind::concave_convex: return "concave_convex";
    case ModelSpec::Kind::brezis_nirenberg: return "brezis_nirenberg";
    case ModelSpec::Kind::pq_general: return "pq_general";
    case ModelSpec::Kind::kirchhoff: return "kirchhoff";
  }
  return "unknown";
}

namespace detail {

inline double integral_F(const Grid& g, const Field& u, const NonlinearitySpec& f) {
  double s = 0.0;
  for (double v : u.values) s += F_eval(f, v);
  return s * g.cell_measure();
}

inline double integral_fu(const Grid& g, const Field& u, const NonlinearitySpec& f) {
  double s = 0.0;
  for (double v : u.values) s += f_eval(f, v) * v;
  return s * g.cell_measure();
}

// Default (p,q) coefficient: flux weight a(W)(s2+e2)^{(p-2)/2} splits into the
// p- and q-Laplacian weights; both vanish with s2 when eps = 0.
inline double pq_flux_weight(double s2, double e2, double p, double q) {
  const double t = s2 + e2;
  if (t == 0.0) return 0.0;
  return std::pow(t, 0.5 * p - 1.0) + std::pow(t, 0.5 * q - 1.0);
}

}  // namespace detail

// --- scalar (p,q) coefficient, shared with the (A1)-(A3) validators ---

inline double pq_a(double t, double p, double q) {
  if (t == 0.0) return q == p ? 2.0 : std::numeric_limits<double>::infinity();
  return 1.0 + std::pow(t, (q - p) / p);
}

inline double pq_A(double t, double p, double q) {
  return t + (p / q) * std::pow(t, q / p);
}

// --- I1 / I2 and their nodal gradients ---

inline double eval_I2(const ModelSpec& m, const Field& u) {
  switch (m.kind) {
    case ModelSpec::Kind::semilinear:
    case ModelSpec::Kind::brezis_nirenberg:
      return 0.5 * lp_integral(m.grid, u, 2.0);
    case ModelSpec::Kind::concave_convex:
      return lp_integral(m.grid, u, m.q) / m.q;
    case ModelSpec::Kind::pq_general:
      return lp_integral(m.grid, u, m.r) / m.r;
    case ModelSpec::Kind::kirchhoff:
      throw not_applicable("kirchhoff model has no I2");
  }
  return 0.0;
}

inline Field grad_I2(const ModelSpec& m, const Field& u) {
  Field g = zero_field(m.grid);
  const double w = m.grid.cell_measure();
  switch (m.kind) {
    case ModelSpec::Kind::semilinear:
    case ModelSpec::Kind::brezis_nirenberg:
      for (std::size_t i = 0; i < u.values.size(); ++i)
        g.values[i] = w * u.values[i];
      break;
    case ModelSpec::Kind::concave_convex:
      for (std::size_t i = 0; i < u.values.size(); ++i)
        g.values[i] = w * detail::signed_pow(u.values[i], m.q - 1.0);
      break;
    case ModelSpec::Kind::pq_general:
      for (std::size_t i = 0; i < u.values.size(); ++i)
        g.values[i] = w * detail::signed_pow(u.values[i], m.r - 1.0);
      break;
    case ModelSpec::Kind::kirchhoff:
      throw not_applicable("kirchhoff model has no I2");
  }
  return g;
}

inline double eval_I1(const ModelSpec& m, const Field& u) {
  switch (m.kind) {
    case ModelSpec::Kind::semilinear:
    case ModelSpec::Kind::concave_convex:
    case ModelSpec::Kind::brezis_nirenberg:
      return 0.5 * dirichlet_energy_p(m.grid, u, 2.0, 0.0) -
             detail::integral_F(m.grid, u, m.nonlin);
    case ModelSpec::Kind::pq_general: {
      const double e2 = m.eps * m.eps;
      double sum = 0.0;
      detail::for_each_cell(m.grid, u.values, [&](const double* g, int, int, int) {
        double s2 = e2;
        for (int k = 0; k < m.grid.dim; ++k) s2 += g[k] * g[k];
        sum += std::pow(s2, 0.5 * m.p) + (m.p / m.q) * std::pow(s2, 0.5 * m.q);
      });
      return sum * m.grid.cell_measure() / m.p;
    }
    case ModelSpec::Kind::kirchhoff:
      throw not_applicable("kirchhoff model has no I1/I2 split; use eval_phi_lambda");
  }
  return 0.0;
}

inline Field grad_I1(const ModelSpec& m, const Field& u) {
  switch (m.kind) {
    case ModelSpec::Kind::semilinear:
    case ModelSpec::Kind::concave_convex:
    case ModelSpec::Kind::brezis_nirenberg: {
      Field g = dirichlet_energy_p_grad(m.grid, u, 2.0, 0.0);
      scale(g, 0.5);
      const double w = m.grid.cell_measure();
      for (std::size_t i = 0; i < u.values.size(); ++i)
        g.values[i] -= w * f_eval(m.nonlin, u.values[i]);
      return g;
    }
    case ModelSpec::Kind::pq_general: {
      const double e2 = m.eps * m.eps;
      Field out = zero_field(m.grid);
      const double scale_w = m.grid.cell_measure();
      detail::for_each_cell(m.grid, u.values,
                            [&](const double* g, int ix, int iy, int iz) {
                              double s2 = 0.0;
                              for (int k = 0; k < m.grid.dim; ++k) s2 += g[k] * g[k];
                              const double wf =
                                  detail::pq_flux_weight(s2, e2, m.p, m.q);
                              double w[3];
                              for (int k = 0; k < m.grid.dim; ++k)
                                w[k] = scale_w * wf * g[k];
                              detail::scatter_cell_flux(m.grid, out.values, ix, iy,
                                                        iz, w);
                            });
      return out;
    }
    case ModelSpec::Kind::kirchhoff:
      throw not_applicable("kirchhoff model has no I1/I2 split");
  }
  return zero_field(m.grid);
}

// --- Kirchhoff pieces ---

/// W^{1,p}_0 seminorm (eps-regularized gradient for p != 2).
inline double kirchhoff_norm(const ModelSpec& m, const Field& u) {
  return std::pow(dirichlet_energy_p(m.grid, u, m.p, m.eps), 1.0 / m.p);
}

inline double eval_phi_kirchhoff(const ModelSpec& m, const Field& u) {
  const double ep = dirichlet_energy_p(m.grid, u, m.p, m.eps);
  if (ep == 0.0 && m.theta < 0.0)
    throw degenerate_input_error("kirchhoff Phi undefined at u = 0 for theta < 0");
  return std::pow(ep, m.theta / m.p) / m.theta -
         detail::integral_F(m.grid, u, m.nonlin);
}

inline Field grad_phi_kirchhoff(const ModelSpec& m, const Field& u) {
  const double ep = dirichlet_energy_p(m.grid, u, m.p, m.eps);
  if (ep == 0.0)
    throw degenerate_input_error("kirchhoff gradient undefined at u = 0");
  Field g = dirichlet_energy_p_grad(m.grid, u, m.p, m.eps);
  scale(g, std::pow(ep, (m.theta - m.p) / m.p) / m.p);
  const double w = m.grid.cell_measure();
  for (std::size_t i = 0; i < u.values.size(); ++i)
    g.values[i] -= w * f_eval(m.nonlin, u.values[i]);
  return g;
}

// --- Phi_lambda, lambda_c and H ---

inline double eval_phi_lambda(const ModelSpec& m, const Field& u, double lambda) {
  if (m.kind == ModelSpec::Kind::kirchhoff) return eval_phi_kirchhoff(m, u);
  return eval_I1(m, u) - lambda * eval_I2(m, u);
}

inline Field grad_phi_lambda(const ModelSpec& m, const Field& u, double lambda) {
  if (m.kind == ModelSpec::Kind::kirchhoff) return grad_phi_kirchhoff(m, u);
  Field g = grad_I1(m, u);
  axpy(g, -lambda, grad_I2(m, u));
  return g;
}

/// lambda_c(u) = (I1(u) - c) / I2(u); satisfies Phi_{lambda_c(u)}(u) = c.
inline double eval_lambda_c(const ModelSpec& m, const Field& u, double c) {
  const double i2 = eval_I2(m, u);
  if (i2 == 0.0)
    throw degenerate_input_error("lambda_c undefined where I2(u) = 0");
  return (eval_I1(m, u) - c) / i2;
}

inline Field grad_lambda_c(const ModelSpec& m, const Field& u, double c) {
  const double i2 = eval_I2(m, u);
  if (i2 == 0.0)
    throw degenerate_input_error("lambda_c undefined where I2(u) = 0");
  Field g = grad_phi_lambda(m, u, eval_lambda_c(m, u, c));
  scale(g, 1.0 / i2);
  return g;
}

/// H(u) = I1'(u)u - alpha I1(u), in each model's closed form.
inline double eval_H(const ModelSpec& m, const Field& u) {
  switch (m.kind) {
    case ModelSpec::Kind::semilinear: {
      double s = 0.0;
      for (double v : u.values) s += 2.0 * F_eval(m.nonlin, v) - f_eval(m.nonlin, v) * v;
      return s * m.grid.cell_measure();
    }
    case ModelSpec::Kind::concave_convex: {
      double s = 0.0;
      for (double v : u.values)
        s += m.q * F_eval(m.nonlin, v) - f_eval(m.nonlin, v) * v;
      return 0.5 * (2.0 - m.q) * dirichlet_energy_p(m.grid, u, 2.0, 0.0) +
             s * m.grid.cell_measure();
    }
    case ModelSpec::Kind::brezis_nirenberg:
      return (2.0 - m.two_star) / m.two_star * lp_integral(m.grid, u, m.two_star);
    case ModelSpec::Kind::pq_general: {
      const double e2 = m.eps * m.eps;
      double sum = 0.0;
      detail::for_each_cell(m.grid, u.values, [&](const double* g, int, int, int) {
        double s2 = 0.0;
        for (int k = 0; k < m.grid.dim; ++k) s2 += g[k] * g[k];
        const double aV = detail::pq_flux_weight(s2, e2, m.p, m.q) * s2;
        const double A = std::pow(s2 + e2, 0.5 * m.p) +
                         (m.p / m.q) * std::pow(s2 + e2, 0.5 * m.q);
        sum += aV - (m.r / m.p) * A;
      });
      return sum * m.grid.cell_measure();
    }
    case ModelSpec::Kind::kirchhoff:
      throw not_applicable("H is not defined for the kirchhoff path");
  }
  return 0.0;
}

/// Values of I1, I2, J, K, H at u; i1 = j - k and h consistent with the
/// assembled I1'(u)u - alpha*I1(u).
struct EnergyBreakdown {
  double i1;
  double i2;
  double j;
  double k;
  double h;
};

inline EnergyBreakdown energy_breakdown(const ModelSpec& m, const Field& u) {
  EnergyBreakdown b{};
  switch (m.kind) {
    case ModelSpec::Kind::semilinear:
    case ModelSpec::Kind::concave_convex:
      b.j = 0.5 * dirichlet_energy_p(m.grid, u, 2.0, 0.0);
      b.k = detail::integral_F(m.grid, u, m.nonlin);
      break;
    case ModelSpec::Kind::brezis_nirenberg:
      b.j = 0.5 * dirichlet_energy_p(m.grid, u, 2.0, 0.0);
      b.k = lp_integral(m.grid, u, m.two_star) / m.two_star;
      break;
    case ModelSpec::Kind::pq_general:
      b.j = eval_I1(m, u);  // no J-K split declared; K = 0
      b.k = 0.0;
      break;
    case ModelSpec::Kind::kirchhoff: {
      const double ep = dirichlet_energy_p(m.grid, u, m.p, m.eps);
      if (ep == 0.0 && m.theta < 0.0)
        throw degenerate_input_error("kirchhoff breakdown undefined at u = 0");
      b.j = std::pow(ep, m.theta / m.p) / m.theta;
      b.k = detail::integral_F(m.grid, u, m.nonlin);
      b.i1 = b.j - b.k;
      b.i2 = std::numeric_limits<double>::quiet_NaN();
      b.h = std::numeric_limits<double>::quiet_NaN();
      return b;
    }
  }
  b.i1 = b.j - b.k;
  b.i2 = eval_I2(m, u);
  b.h = eval_H(m, u);
  return b;
}

// --- the model norm (unit sphere used by the solvers) ---

inline double model_norm(const ModelSpec& m, const Field& u) {
  switch (m.kind) {
    case ModelSpec::Kind::semilinear:
    case ModelSpec::Kind::concave_convex:
    case ModelSpec::Kind::brezis_nirenberg:
      return std::sqrt(dirichlet_energy_p(m.grid, u, 2.0, 0.0));
    case ModelSpec::Kind::pq_general:
    case ModelSpec::Kind::kirchhoff:
      return std::pow(dirichlet_energy_p(m.grid, u, m.p, m.eps), 1.0 / m.p);
  }
  return 0.0;
}

inline Field model_norm_grad(const ModelSpec& m, const Field& u) {
  switch (m.kind) {
    case ModelSpec::Kind::semilinear:
    case ModelSpec::Kind::concave_convex:
    case ModelSpec::Kind::brezis_nirenberg: {
      const double nrm = model_norm(m, u);
      if (nrm == 0.0) throw degenerate_input_error("norm gradient at u = 0");
      Field g = dirichlet_energy_p_grad(m.grid, u, 2.0, 0.0);
      scale(g, 0.5 / nrm);
      return g;
    }
    case ModelSpec::Kind::pq_general:
    case ModelSpec::Kind::kirchhoff: {
      const double ep = dirichlet_energy_p(m.grid, u, m.p, m.eps);
      if (ep == 0.0) throw degenerate_input_error("norm gradient at u = 0");
      Field g = dirichlet_energy_p_grad(m.grid, u, m.p, m.eps);
      scale(g, std::pow(ep, 1.0 / m.p - 1.0) / m.p);
      return g;
    }
  }
  return zero_field(m.grid);
}

}  // namespace nehari
