#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "nehari/common.hpp"

namespace nehari {

/// Uniform tensor mesh of interior nodes on the unit interval/square/cube
/// with homogeneous Dirichlet boundary. Interior node i along an axis sits
/// at x = (i+1)*h with h = 1/(n+1); the boundary values are implicitly zero.
struct Grid {
  int dim = 1;
  int n = 3;
  double h = 0.25;

  std::int64_t node_count() const {
    std::int64_t c = 1;
    for (int d = 0; d < dim; ++d) c *= n;
    return c;
  }
  double cell_measure() const {
    double m = h;
    for (int d = 1; d < dim; ++d) m *= h;
    return m;
  }
  double coord(int i) const { return (i + 1) * h; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

inline Grid build_grid(int dim, int n) {
  if (dim < 1 || dim > 3) throw config_error("grid dim must be 1, 2 or 3");
  if (n < 3) throw config_error("grid needs n >= 3 interior nodes per axis");
  return Grid{dim, n, 1.0 / (n + 1)};
}

/// Nodal values of a discretized function on a Grid; boundary is implicit 0.
struct Field {
  Grid grid;
  std::vector<double> values;
};

inline Field zero_field(const Grid& g) {
  return Field{g, std::vector<double>(static_cast<std::size_t>(g.node_count()), 0.0)};
}

inline Field random_field(const Grid& g, Rng& rng) {
  Field f = zero_field(g);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (auto& v : f.values) v = dist(rng);
  return f;
}

// --- plain vector helpers (no quadrature weights) ---

inline double dot(const Field& a, const Field& b) {
  return std::inner_product(a.values.begin(), a.values.end(), b.values.begin(), 0.0);
}

inline Field& scale(Field& f, double s) {
  for (auto& v : f.values) v *= s;
  return f;
}

inline Field scaled(const Field& f, double s) {
  Field r = f;
  scale(r, s);
  return r;
}

inline Field& axpy(Field& y, double a, const Field& x) {
  for (std::size_t i = 0; i < y.values.size(); ++i) y.values[i] += a * x.values[i];
  return y;
}

inline double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::fabs(v));
  return m;
}

// --- quadrature and norms ---

/// Composite-rectangle integral of |u|^p (no 1/p root).
inline double lp_integral(const Grid& g, const Field& u, double p) {
  double s = 0.0;
  for (double v : u.values) s += std::pow(std::fabs(v), p);
  return s * g.cell_measure();
}

/// Discrete L^p norm, p >= 1.
inline double lp_norm(const Grid& g, const Field& u, double p) {
  if (p < 1.0) throw std::domain_error("lp_norm requires p >= 1");
  return std::pow(lp_integral(g, u, p), 1.0 / p);
}

/// Discrete L^2 inner product.
inline double l2_inner(const Grid& g, const Field& a, const Field& b) {
  return dot(a, b) * g.cell_measure();
}

namespace detail {

inline double at1(const std::vector<double>& u, int n, int i) {
  return (i >= 0 && i < n) ? u[static_cast<std::size_t>(i)] : 0.0;
}
inline double at2(const std::vector<double>& u, int n, int ix, int iy) {
  return (ix >= 0 && ix < n && iy >= 0 && iy < n)
             ? u[static_cast<std::size_t>(iy) * n + ix]
             : 0.0;
}
inline double at3(const std::vector<double>& u, int n, int ix, int iy, int iz) {
  return (ix >= 0 && ix < n && iy >= 0 && iy < n && iz >= 0 && iz < n)
             ? u[(static_cast<std::size_t>(iz) * n + iy) * n + ix]
             : 0.0;
}

/// Visits every cell of the staggered backward-difference stencil.
/// Cells are corner-indexed by c in {0..n}^dim; the cell gradient component
/// along axis k is (u[c] - u[c - e_k]) / h with implicit zeros outside the
/// interior. For p = 2 this reproduces the 3/5/7-point Dirichlet form
/// exactly (each mesh edge is visited once; the extra cells contribute 0).
/// F is called as f(g[dim], cell multi-index...) with g the gradient parts.
template <class F>
void for_each_cell(const Grid& grid, const std::vector<double>& u, F&& f) {
  const int n = grid.n;
  const double inv_h = 1.0 / grid.h;
  if (grid.dim == 1) {
    for (int i = 0; i <= n; ++i) {
      const double g = (at1(u, n, i) - at1(u, n, i - 1)) * inv_h;
      f(&g, i, 0, 0);
    }
  } else if (grid.dim == 2) {
    for (int iy = 0; iy <= n; ++iy)
      for (int ix = 0; ix <= n; ++ix) {
        const double c = at2(u, n, ix, iy);
        double g[2] = {(c - at2(u, n, ix - 1, iy)) * inv_h,
                       (c - at2(u, n, ix, iy - 1)) * inv_h};
        f(g, ix, iy, 0);
      }
  } else {
    for (int iz = 0; iz <= n; ++iz)
      for (int iy = 0; iy <= n; ++iy)
        for (int ix = 0; ix <= n; ++ix) {
          const double c = at3(u, n, ix, iy, iz);
          double g[3] = {(c - at3(u, n, ix - 1, iy, iz)) * inv_h,
                         (c - at3(u, n, ix, iy - 1, iz)) * inv_h,
                         (c - at3(u, n, ix, iy, iz - 1)) * inv_h};
          f(g, ix, iy, iz);
        }
  }
}

/// Scatters per-cell, per-axis flux coefficients w_k back to the nodal
/// gradient: node c gains +w_k/h, node c-e_k gains -w_k/h.
inline void scatter_cell_flux(const Grid& grid, std::vector<double>& out, int ix,
                              int iy, int iz, const double* w) {
  const int n = grid.n;
  const double inv_h = 1.0 / grid.h;
  auto add1 = [&](int i, double v) {
    if (i >= 0 && i < n) out[static_cast<std::size_t>(i)] += v;
  };
  auto add2 = [&](int x, int y, double v) {
    if (x >= 0 && x < n && y >= 0 && y < n)
      out[static_cast<std::size_t>(y) * n + x] += v;
  };
  auto add3 = [&](int x, int y, int z, double v) {
    if (x >= 0 && x < n && y >= 0 && y < n && z >= 0 && z < n)
      out[(static_cast<std::size_t>(z) * n + y) * n + x] += v;
  };
  if (grid.dim == 1) {
    add1(ix, w[0] * inv_h);
    add1(ix - 1, -w[0] * inv_h);
  } else if (grid.dim == 2) {
    add2(ix, iy, (w[0] + w[1]) * inv_h);
    add2(ix - 1, iy, -w[0] * inv_h);
    add2(ix, iy - 1, -w[1] * inv_h);
  } else {
    add3(ix, iy, iz, (w[0] + w[1] + w[2]) * inv_h);
    add3(ix - 1, iy, iz, -w[0] * inv_h);
    add3(ix, iy - 1, iz, -w[1] * inv_h);
    add3(ix, iy, iz - 1, -w[2] * inv_h);
  }
}

}  // namespace detail

/// Sum over cells of (|grad u|^2 + eps^2)^(p/2) * h^dim. For eps = 0, p = 2
/// this is the discrete Dirichlet form u.(Lu)*h^dim.
inline double dirichlet_energy_p(const Grid& grid, const Field& u, double p,
                                 double eps) {
  if (!(p > 1.0)) throw std::domain_error("dirichlet_energy_p requires p > 1");
  if (eps < 0.0) throw std::domain_error("dirichlet_energy_p requires eps >= 0");
  const double e2 = eps * eps;
  double sum = 0.0;
  if (p == 2.0 && eps == 0.0) {
    detail::for_each_cell(grid, u.values, [&](const double* g, int, int, int) {
      double s = 0.0;
      for (int k = 0; k < grid.dim; ++k) s += g[k] * g[k];
      sum += s;
    });
  } else {
    detail::for_each_cell(grid, u.values, [&](const double* g, int, int, int) {
      double s = e2;
      for (int k = 0; k < grid.dim; ++k) s += g[k] * g[k];
      sum += std::pow(s, 0.5 * p);
    });
  }
  return sum * grid.cell_measure();
}

/// Nodal gradient of dirichlet_energy_p (exact derivative of the discrete sum).
inline Field dirichlet_energy_p_grad(const Grid& grid, const Field& u, double p,
                                     double eps) {
  const double e2 = eps * eps;
  Field out = zero_field(grid);
  const double w_scale = p * grid.cell_measure();
  detail::for_each_cell(grid, u.values, [&](const double* g, int ix, int iy, int iz) {
    double s = e2;
    for (int k = 0; k < grid.dim; ++k) s += g[k] * g[k];
    const double wfac = (p == 2.0) ? 1.0 : std::pow(s, 0.5 * p - 1.0);
    double w[3];
    for (int k = 0; k < grid.dim; ++k) w[k] = w_scale * wfac * g[k];
    detail::scatter_cell_flux(grid, out.values, ix, iy, iz, w);
  });
  return out;
}

/// H^1_0 seminorm inner product: sum over cells of grad(a).grad(b) * h^dim.
inline double dirichlet_inner(const Grid& grid, const Field& a, const Field& b) {
  double sum = 0.0;
  const int n = grid.n;
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  if (grid.dim == 1) {
    for (int i = 0; i <= n; ++i)
      sum += (detail::at1(a.values, n, i) - detail::at1(a.values, n, i - 1)) *
             (detail::at1(b.values, n, i) - detail::at1(b.values, n, i - 1));
  } else if (grid.dim == 2) {
    for (int iy = 0; iy <= n; ++iy)
      for (int ix = 0; ix <= n; ++ix) {
        const double ca = detail::at2(a.values, n, ix, iy);
        const double cb = detail::at2(b.values, n, ix, iy);
        sum += (ca - detail::at2(a.values, n, ix - 1, iy)) *
                   (cb - detail::at2(b.values, n, ix - 1, iy)) +
               (ca - detail::at2(a.values, n, ix, iy - 1)) *
                   (cb - detail::at2(b.values, n, ix, iy - 1));
      }
  } else {
    for (int iz = 0; iz <= n; ++iz)
      for (int iy = 0; iy <= n; ++iy)
        for (int ix = 0; ix <= n; ++ix) {
          const double ca = detail::at3(a.values, n, ix, iy, iz);
          const double cb = detail::at3(b.values, n, ix, iy, iz);
          sum += (ca - detail::at3(a.values, n, ix - 1, iy, iz)) *
                     (cb - detail::at3(b.values, n, ix - 1, iy, iz)) +
                 (ca - detail::at3(a.values, n, ix, iy - 1, iz)) *
                     (cb - detail::at3(b.values, n, ix, iy - 1, iz)) +
                 (ca - detail::at3(a.values, n, ix, iy, iz - 1)) *
                     (cb - detail::at3(b.values, n, ix, iy, iz - 1));
        }
  }
  return sum * inv_h2 * grid.cell_measure();
}

/// Applies the standard 3/5/7-point Dirichlet Laplacian: (Lu)_i ~ -Δu(x_i).
inline Field apply_laplacian(const Grid& grid, const Field& u) {
  Field out = zero_field(grid);
  const int n = grid.n;
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  if (grid.dim == 1) {
    for (int i = 0; i < n; ++i)
      out.values[i] = (2.0 * u.values[i] - detail::at1(u.values, n, i - 1) -
                       detail::at1(u.values, n, i + 1)) *
                      inv_h2;
  } else if (grid.dim == 2) {
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const std::size_t idx = static_cast<std::size_t>(iy) * n + ix;
        out.values[idx] = (4.0 * u.values[idx] - detail::at2(u.values, n, ix - 1, iy) -
                           detail::at2(u.values, n, ix + 1, iy) -
                           detail::at2(u.values, n, ix, iy - 1) -
                           detail::at2(u.values, n, ix, iy + 1)) *
                          inv_h2;
      }
  } else {
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
          const std::size_t idx = (static_cast<std::size_t>(iz) * n + iy) * n + ix;
          out.values[idx] =
              (6.0 * u.values[idx] - detail::at3(u.values, n, ix - 1, iy, iz) -
               detail::at3(u.values, n, ix + 1, iy, iz) -
               detail::at3(u.values, n, ix, iy - 1, iz) -
               detail::at3(u.values, n, ix, iy + 1, iz) -
               detail::at3(u.values, n, ix, iy, iz - 1) -
               detail::at3(u.values, n, ix, iy, iz + 1)) *
              inv_h2;
        }
  }
  return out;
}

/// k-th 1D eigenvalue of the discrete Dirichlet Laplacian, k = 1..n.
inline double laplacian_eigenvalue_1d(const Grid& grid, int k) {
  return 2.0 / (grid.h * grid.h) * (1.0 - std::cos(k * M_PI * grid.h));
}

/// First k eigenpairs of the discrete Dirichlet Laplacian, built analytically
/// from tensor products of sine modes and L2-orthonormalized. Ties are broken
/// by lexicographic mode index, so the basis is deterministic.
inline std::vector<std::pair<double, Field>> laplacian_eigenbasis(const Grid& grid,
                                                                  int k) {
  if (k < 1 || k > grid.node_count())
    throw config_error("laplacian_eigenbasis: k out of range");

  struct Mode {
    double eigenvalue;
    int idx[3];
  };
  std::vector<Mode> modes;
  const int n = grid.n;
  std::vector<double> mu(static_cast<std::size_t>(n) + 1);
  for (int j = 1; j <= n; ++j) mu[j] = laplacian_eigenvalue_1d(grid, j);

  if (grid.dim == 1) {
    for (int i = 1; i <= n; ++i) modes.push_back({mu[i], {i, 0, 0}});
  } else if (grid.dim == 2) {
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) modes.push_back({mu[i] + mu[j], {i, j, 0}});
  } else {
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l)
          modes.push_back({mu[i] + mu[j] + mu[l], {i, j, l}});
  }
  std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
    if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
    return std::lexicographical_compare(a.idx, a.idx + 3, b.idx, b.idx + 3);
  });

  // (n+1)h = 1, so the raw tensor sine mode has discrete L2 norm 2^{-dim/2}.
  const double norm_factor = std::pow(2.0, 0.5 * grid.dim);
  std::vector<std::pair<double, Field>> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int m = 0; m < k; ++m) {
    const Mode& mode = modes[static_cast<std::size_t>(m)];
    Field f = zero_field(grid);
    if (grid.dim == 1) {
      for (int i = 0; i < n; ++i)
        f.values[i] = norm_factor * std::sin(mode.idx[0] * M_PI * grid.coord(i));
    } else if (grid.dim == 2) {
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
          f.values[static_cast<std::size_t>(iy) * n + ix] =
              norm_factor * std::sin(mode.idx[0] * M_PI * grid.coord(ix)) *
              std::sin(mode.idx[1] * M_PI * grid.coord(iy));
    } else {
      for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
          for (int ix = 0; ix < n; ++ix)
            f.values[(static_cast<std::size_t>(iz) * n + iy) * n + ix] =
                norm_factor * std::sin(mode.idx[0] * M_PI * grid.coord(ix)) *
                std::sin(mode.idx[1] * M_PI * grid.coord(iy)) *
                std::sin(mode.idx[2] * M_PI * grid.coord(iz));
    }
    out.emplace_back(mode.eigenvalue, std::move(f));
  }
  return out;
}

/// Direct solver for L w = rhs (nodal Laplacian as in apply_laplacian) via
/// per-axis sine transforms. Used as the descent-metric preconditioner.
class DirichletLaplacianSolver {
 public:
  explicit DirichletLaplacianSolver(const Grid& grid) : grid_(grid) {
    const int n = grid.n;
    sine_.resize(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        sine_[static_cast<std::size_t>(k) * n + i] =
            std::sin((k + 1) * M_PI * grid.coord(i));
    mu_.resize(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) mu_[k - 1] = laplacian_eigenvalue_1d(grid, k);
  }

  Field solve(const Field& rhs) const {
    Field x = rhs;
    for (int axis = 0; axis < grid_.dim; ++axis) transform_axis(x.values, axis);
    divide_by_eigenvalues(x.values);
    for (int axis = 0; axis < grid_.dim; ++axis) transform_axis(x.values, axis);
    const double inv_scale = std::pow(2.0 / (grid_.n + 1), grid_.dim);
    for (auto& v : x.values) v *= inv_scale;
    return x;
  }

 private:
  void transform_axis(std::vector<double>& v, int axis) const {
    const int n = grid_.n;
    const std::int64_t total = grid_.node_count();
    std::int64_t stride = 1;
    for (int a = 0; a < axis; ++a) stride *= n;
    std::vector<double> line(static_cast<std::size_t>(n));
    const std::int64_t block = stride * n;
    for (std::int64_t base = 0; base < total; base += block) {
      for (std::int64_t off = 0; off < stride; ++off) {
        for (int i = 0; i < n; ++i)
          line[i] = v[static_cast<std::size_t>(base + off + i * stride)];
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          const double* row = &sine_[static_cast<std::size_t>(k) * n];
          for (int i = 0; i < n; ++i) s += row[i] * line[i];
          v[static_cast<std::size_t>(base + off + k * stride)] = s;
        }
      }
    }
  }

  void divide_by_eigenvalues(std::vector<double>& v) const {
    const int n = grid_.n;
    if (grid_.dim == 1) {
      for (int i = 0; i < n; ++i) v[i] /= mu_[i];
    } else if (grid_.dim == 2) {
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
          v[static_cast<std::size_t>(iy) * n + ix] /= (mu_[ix] + mu_[iy]);
    } else {
      for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
          for (int ix = 0; ix < n; ++ix)
            v[(static_cast<std::size_t>(iz) * n + iy) * n + ix] /=
                (mu_[ix] + mu_[iy] + mu_[iz]);
    }
  }

  Grid grid_;
  std::vector<double> sine_;  // row k: sin((k+1) pi x_i)
  std::vector<double> mu_;
};

}  // namespace nehari
