#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "nehari/grid.hpp"
#include "nehari/nonlinearity.hpp"

namespace nehari {

/// Equal-weight quadrature on the unit circle S^1 (the N = 2 sphere of
/// directions). Antipodally symmetric for even m.
struct SphereQuadrature {
  int m = 64;
  std::vector<std::array<double, 2>> directions;
  double weight = 0.0;  // 2*pi/m for every node
};

inline SphereQuadrature sphere_quadrature(int m) {
  if (m < 4) throw config_error("sphere quadrature needs m >= 4 directions");
  SphereQuadrature q;
  q.m = m;
  q.weight = 2.0 * M_PI / m;
  q.directions.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double angle = 2.0 * M_PI * j / m;
    q.directions[static_cast<std::size_t>(j)] = {std::cos(angle), std::sin(angle)};
  }
  return q;
}

/// omega_k = volume of the unit ball of R^k, continued to real k.
inline double unit_ball_volume(double k) {
  return std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

/// gamma_{N,p} = (2 w_{N+p-2})^{-1} (N w_N w_{p-1}) (N w_N)^{p/N}.
inline double gamma_constant(int N, double p) {
  const double wN = unit_ball_volume(N);
  const double wp1 = unit_ball_volume(p - 1.0);
  const double wNp2 = unit_ball_volume(N + p - 2.0);
  return (N * wN * wp1) / (2.0 * wNp2) * std::pow(N * wN, p / N);
}

struct AffineParams {
  double p = 2.0;
  double gamma = 4.0 * M_PI;  // gamma_constant(2, p)
  double eps_floor = 1e-10;   // floor for degenerate directional norms
};

inline AffineParams affine_params(double p, double eps_floor = 1e-10) {
  if (!(p > 1.0)) throw config_error("affine energy requires p > 1");
  if (!(eps_floor > 0.0)) throw config_error("eps_floor must be positive");
  return AffineParams{p, gamma_constant(2, p), eps_floor};
}

namespace detail {

inline void require_affine_grid(const Grid& g) {
  if (g.dim != 2) throw config_error("affine energy is implemented for dim = 2");
}

}  // namespace detail

/// ||grad_xi u||_p for every quadrature direction xi. Norms below eps_floor
/// are floored (sets *any_floored); a field degenerate in all directions is
/// an error.
inline std::vector<double> directional_lp_norms(const Grid& grid, const Field& u,
                                                const SphereQuadrature& quad,
                                                double p,
                                                double eps_floor = 1e-10,
                                                bool* any_floored = nullptr) {
  detail::require_affine_grid(grid);
  if (any_floored) *any_floored = false;
  std::vector<double> acc(quad.directions.size(), 0.0);
  detail::for_each_cell(grid, u.values, [&](const double* g, int, int, int) {
    for (std::size_t j = 0; j < quad.directions.size(); ++j) {
      const auto& xi = quad.directions[j];
      acc[j] += std::pow(std::fabs(g[0] * xi[0] + g[1] * xi[1]), p);
    }
  });
  bool all_floored = true;
  for (auto& v : acc) {
    v = std::pow(v * grid.cell_measure(), 1.0 / p);
    if (v < eps_floor) {
      v = eps_floor;
      if (any_floored) *any_floored = true;
    } else {
      all_floored = false;
    }
  }
  if (all_floored)
    throw degenerate_input_error("field has no nonzero directional derivative");
  return acc;
}

/// Affine p-energy (N = 2), 1-homogeneous in u:
///   E(u) = gamma * ( sum_j w ||grad_xi_j u||_p^{-2} )^{-1/2}
inline double affine_energy(const Grid& grid, const Field& u,
                            const SphereQuadrature& quad, const AffineParams& params) {
  const auto nu = directional_lp_norms(grid, u, quad, params.p, params.eps_floor);
  constexpr double N = 2.0;
  double Q = 0.0;
  for (double v : nu) Q += quad.weight * std::pow(v, -N);
  return params.gamma * std::pow(Q, -1.0 / N);
}

/// Nodal gradient of u -> (1/p) E^p(u), assembled by the chain rule through
/// the quadrature. (p-1)-homogeneous in u. Floored directions contribute no
/// flux (the energy is locally constant in them).
inline Field affine_energy_grad(const Grid& grid, const Field& u,
                                const SphereQuadrature& quad,
                                const AffineParams& params) {
  constexpr int N = 2;
  bool floored = false;
  const auto nu =
      directional_lp_norms(grid, u, quad, params.p, params.eps_floor, &floored);
  double Q = 0.0;
  for (double v : nu) Q += quad.weight * std::pow(v, -N);
  const double E = params.gamma * std::pow(Q, -1.0 / N);

  // dG/du = (E^{N+p} / gamma^N) sum_j w nu_j^{-(N+p)} d(nu_j)/du with
  // d(nu_j)/du = nu_j^{1-p} sum_cells |g.xi|^{p-2} (g.xi) (dg/du . xi) h^2.
  const double outer = std::pow(E, N + params.p) / std::pow(params.gamma, N);
  std::vector<double> coef(nu.size());
  for (std::size_t j = 0; j < nu.size(); ++j)
    coef[j] = (nu[j] <= params.eps_floor)
                  ? 0.0
                  : outer * quad.weight * std::pow(nu[j], -(N + 1.0)) *
                        std::pow(nu[j], 1.0 - params.p);

  Field out = zero_field(grid);
  const double cellw = grid.cell_measure();
  detail::for_each_cell(grid, u.values, [&](const double* g, int ix, int iy, int iz) {
    double flux[2] = {0.0, 0.0};
    for (std::size_t j = 0; j < quad.directions.size(); ++j) {
      if (coef[j] == 0.0) continue;
      const auto& xi = quad.directions[j];
      const double s = detail::signed_pow(g[0] * xi[0] + g[1] * xi[1],
                                          params.p - 1.0);
      flux[0] += coef[j] * s * xi[0];
      flux[1] += coef[j] * s * xi[1];
    }
    flux[0] *= cellw;
    flux[1] *= cellw;
    detail::scatter_cell_flux(grid, out.values, ix, iy, iz, flux);
  });
  return out;
}

/// H_u^p(zeta): the direction kernel of the affine p-Laplacian, normalized so
/// that int_Omega H_u^p(grad u) = E^p(u) and the weak form of the operator is
/// the gradient of (1/p) E^p. p-homogeneous and even in zeta.
inline double h_u_kernel(const Grid& grid, const Field& u,
                         const SphereQuadrature& quad, const AffineParams& params,
                         const std::array<double, 2>& zeta) {
  constexpr int N = 2;
  const auto nu = directional_lp_norms(grid, u, quad, params.p, params.eps_floor);
  double Q = 0.0;
  for (double v : nu) Q += quad.weight * std::pow(v, -N);
  const double E = params.gamma * std::pow(Q, -1.0 / N);
  double s = 0.0;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const auto& xi = quad.directions[j];
    s += quad.weight * std::pow(nu[j], -(N + params.p)) *
         std::pow(std::fabs(xi[0] * zeta[0] + xi[1] * zeta[1]), params.p);
  }
  return std::pow(E, N + params.p) / std::pow(params.gamma, N) * s;
}

/// Phi_A(u) = (1/p) E^p(u) - int F(u)
inline double eval_phi_affine(const Grid& grid, const Field& u,
                              const SphereQuadrature& quad,
                              const AffineParams& params,
                              const NonlinearitySpec& nonlin) {
  const double E = affine_energy(grid, u, quad, params);
  double F = 0.0;
  for (double v : u.values) F += F_eval(nonlin, v);
  return std::pow(E, params.p) / params.p - F * grid.cell_measure();
}

inline Field grad_phi_affine(const Grid& grid, const Field& u,
                             const SphereQuadrature& quad,
                             const AffineParams& params,
                             const NonlinearitySpec& nonlin) {
  Field g = affine_energy_grad(grid, u, quad, params);
  const double w = grid.cell_measure();
  for (std::size_t i = 0; i < u.values.size(); ++i)
    g.values[i] -= w * f_eval(nonlin, u.values[i]);
  return g;
}

/// The affine problem bundle consumed by fibering/solver/CLI.
struct AffineProblem {
  Grid grid;
  SphereQuadrature quad;
  AffineParams params;
  NonlinearitySpec nonlin;
};

inline AffineProblem make_affine_problem(const Grid& grid, double p, int m,
                                         const NonlinearitySpec& nonlin,
                                         double eps_floor = 1e-10) {
  detail::require_affine_grid(grid);
  return AffineProblem{grid, sphere_quadrature(m), affine_params(p, eps_floor),
                       nonlin};
}

}  // namespace nehari
