#include <catch2/catch_amalgamated.hpp>

#include "nehari/grid.hpp"

using namespace nehari;
using Catch::Approx;

namespace {

Field sine_mode_1d(const Grid& g, int k = 1) {
  Field f = zero_field(g);
  for (int i = 0; i < g.n; ++i) f.values[i] = std::sin(k * M_PI * g.coord(i));
  return f;
}

// Central finite differences of a scalar functional of the nodal values.
template <class F>
Field fd_gradient(const Grid& g, const Field& u, F&& fn, double step = 1e-6) {
  Field out = zero_field(g);
  Field w = u;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    w.values[i] = u.values[i] + step;
    const double fp = fn(w);
    w.values[i] = u.values[i] - step;
    const double fm = fn(w);
    w.values[i] = u.values[i];
    out.values[i] = (fp - fm) / (2.0 * step);
  }
  return out;
}

}  // namespace

TEST_CASE("build_grid basics") {
  const Grid g1 = build_grid(1, 3);
  CHECK(g1.h == Approx(0.25).epsilon(0));
  CHECK(g1.h * (g1.n + 1) == 1.0);

  CHECK(build_grid(2, 15).node_count() == 225);
  const Grid g3 = build_grid(3, 9);
  CHECK(g3.node_count() == 729);
  CHECK(g3.h == Approx(0.1));

  CHECK_THROWS_AS(build_grid(0, 5), config_error);
  CHECK_THROWS_AS(build_grid(4, 5), config_error);
  CHECK_THROWS_AS(build_grid(1, 2), config_error);
}

TEST_CASE("lp_norm values") {
  const Grid g = build_grid(1, 3);
  Field ones = zero_field(g);
  for (auto& v : ones.values) v = 1.0;
  CHECK(lp_norm(g, ones, 2.0) == Approx(std::sqrt(0.75)).epsilon(1e-14));

  CHECK(lp_norm(g, zero_field(g), 2.0) == 0.0);
  CHECK_THROWS_AS(lp_norm(g, ones, 0.5), std::domain_error);

  const Grid gf = build_grid(1, 255);
  const Field s = sine_mode_1d(gf);
  CHECK(lp_norm(gf, s, 2.0) == Approx(std::sqrt(0.5)).margin(1e-3));
}

TEST_CASE("lp_norm homogeneity") {
  const Grid g = build_grid(2, 9);
  Rng rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    const Field u = random_field(g, rng);
    const double t = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    for (double p : {1.0, 1.7, 2.0, 4.0}) {
      CHECK(lp_norm(g, scaled(u, t), p) ==
            Approx(std::fabs(t) * lp_norm(g, u, p)).epsilon(1e-12).margin(1e-300));
    }
  }
}

TEST_CASE("dirichlet energy of the sine mode") {
  const Grid g = build_grid(1, 255);
  const Field s = sine_mode_1d(g);
  const double e = dirichlet_energy_p(g, s, 2.0, 0.0);
  CHECK(e == Approx(M_PI * M_PI / 2.0).epsilon(1e-2));
  CHECK(dirichlet_energy_p(g, zero_field(g), 2.0, 0.0) == 0.0);
  CHECK(dirichlet_energy_p(g, zero_field(g), 3.5, 0.0) == 0.0);
}

TEST_CASE("dirichlet energy equals the Laplacian quadratic form") {
  for (int dim : {1, 2, 3}) {
    const Grid g = build_grid(dim, dim == 3 ? 5 : 9);
    Rng rng(23 + dim);
    const Field u = random_field(g, rng);
    const Field lu = apply_laplacian(g, u);
    const double quad = dot(u, lu) * g.cell_measure();
    CHECK(dirichlet_energy_p(g, u, 2.0, 0.0) ==
          Approx(quad).epsilon(1e-12));
    CHECK(dirichlet_inner(g, u, u) == Approx(quad).epsilon(1e-12));
  }
}

TEST_CASE("p-energy homogeneity") {
  const Grid g = build_grid(2, 7);
  Rng rng(5);
  const Field u = random_field(g, rng);
  for (double p : {1.5, 2.0, 3.0}) {
    const double base = dirichlet_energy_p(g, u, p, 0.0);
    for (double t : {0.5, 2.0, 7.0}) {
      CHECK(dirichlet_energy_p(g, scaled(u, t), p, 0.0) ==
            Approx(std::pow(t, p) * base).epsilon(1e-12));
    }
  }
}

TEST_CASE("p-energy gradient matches finite differences") {
  for (int dim : {1, 2}) {
    const Grid g = build_grid(dim, dim == 1 ? 17 : 6);
    Rng rng(41 + dim);
    for (double p : {2.0, 3.0, 1.6}) {
      const double eps = p < 2.0 ? 1e-8 : 0.0;
      const Field u = random_field(g, rng);
      const Field grad = dirichlet_energy_p_grad(g, u, p, eps);
      const Field fd = fd_gradient(
          g, u, [&](const Field& w) { return dirichlet_energy_p(g, w, p, eps); });
      for (std::size_t i = 0; i < grad.values.size(); ++i)
        CHECK(grad.values[i] == Approx(fd.values[i]).epsilon(1e-6).margin(1e-9));
    }
  }
}

TEST_CASE("eigenbasis closed forms") {
  const Grid g = build_grid(1, 15);
  const auto basis = laplacian_eigenbasis(g, 3);
  CHECK(basis[0].first ==
        Approx(2.0 / (g.h * g.h) * (1.0 - std::cos(M_PI * g.h))).epsilon(1e-14));

  const Grid g2 = build_grid(2, 9);
  const auto basis2 = laplacian_eigenbasis(g2, 2);
  const double expected =
      2.0 / (g2.h * g2.h) * (2.0 - std::cos(M_PI * g2.h) - std::cos(2.0 * M_PI * g2.h));
  CHECK(basis2[1].first == Approx(expected).epsilon(1e-14));

  CHECK_THROWS_AS(laplacian_eigenbasis(g, 0), config_error);
  CHECK_THROWS_AS(laplacian_eigenbasis(g, 16), config_error);
}

TEST_CASE("eigenbasis is a dense eigensolve match") {
  // Cross-check the analytic eigenvalues against Jacobi rotations on the
  // assembled 1D operator at n = 15.
  const Grid g = build_grid(1, 15);
  const int n = g.n;
  std::vector<double> A(static_cast<std::size_t>(n) * n, 0.0);
  const double inv_h2 = 1.0 / (g.h * g.h);
  for (int i = 0; i < n; ++i) {
    A[static_cast<std::size_t>(i) * n + i] = 2.0 * inv_h2;
    if (i > 0) A[static_cast<std::size_t>(i) * n + i - 1] = -inv_h2;
    if (i + 1 < n) A[static_cast<std::size_t>(i) * n + i + 1] = -inv_h2;
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::fabs(A[static_cast<std::size_t>(p) * n + q]);
    if (off < 1e-12) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = A[static_cast<std::size_t>(p) * n + q];
        if (std::fabs(apq) < 1e-18) continue;
        const double app = A[static_cast<std::size_t>(p) * n + p];
        const double aqq = A[static_cast<std::size_t>(q) * n + q];
        const double phi = 0.5 * std::atan2(2.0 * apq, aqq - app);
        const double cth = std::cos(phi), sth = std::sin(phi);
        for (int k = 0; k < n; ++k) {
          const double akp = A[static_cast<std::size_t>(k) * n + p];
          const double akq = A[static_cast<std::size_t>(k) * n + q];
          A[static_cast<std::size_t>(k) * n + p] = cth * akp - sth * akq;
          A[static_cast<std::size_t>(k) * n + q] = sth * akp + cth * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A[static_cast<std::size_t>(p) * n + k];
          const double aqk = A[static_cast<std::size_t>(q) * n + k];
          A[static_cast<std::size_t>(p) * n + k] = cth * apk - sth * aqk;
          A[static_cast<std::size_t>(q) * n + k] = sth * apk + cth * aqk;
        }
      }
  }
  std::vector<double> eigs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eigs[static_cast<std::size_t>(i)] = A[static_cast<std::size_t>(i) * n + i];
  std::sort(eigs.begin(), eigs.end());

  const auto basis = laplacian_eigenbasis(g, n);
  for (int i = 0; i < n; ++i)
    CHECK(basis[static_cast<std::size_t>(i)].first ==
          Approx(eigs[static_cast<std::size_t>(i)]).epsilon(1e-10));
}

TEST_CASE("eigenbasis orthonormality") {
  for (int dim : {1, 2}) {
    const Grid g = build_grid(dim, dim == 1 ? 12 : 6);
    const auto basis = laplacian_eigenbasis(g, 5);
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (std::size_t b = 0; b < basis.size(); ++b) {
        const double ip = l2_inner(g, basis[a].second, basis[b].second);
        CHECK(ip == Approx(a == b ? 1.0 : 0.0).margin(1e-12));
      }
  }
}

TEST_CASE("eigenfields satisfy the discrete eigenproblem") {
  const Grid g = build_grid(2, 8);
  const auto basis = laplacian_eigenbasis(g, 4);
  for (const auto& [mu, v] : basis) {
    const Field lv = apply_laplacian(g, v);
    for (std::size_t i = 0; i < v.values.size(); ++i)
      CHECK(lv.values[i] == Approx(mu * v.values[i]).margin(1e-8 * mu));
  }
}

TEST_CASE("grid refinement changes the sine-mode norm at second order") {
  // |u_h|_2 - 2^{-1/2} = O(h^2) for the interpolated first mode.
  double prev_err = 1.0;
  for (int n : {31, 63, 127}) {
    const Grid g = build_grid(1, n);
    const double err = std::fabs(lp_norm(g, sine_mode_1d(g), 2.0) - std::sqrt(0.5));
    CHECK(err < 0.3 * prev_err + 1e-15);
    prev_err = err;
  }
}

TEST_CASE("Laplacian solver inverts the operator") {
  for (int dim : {1, 2, 3}) {
    const Grid g = build_grid(dim, dim == 3 ? 5 : 10);
    Rng rng(99 + dim);
    const Field rhs = random_field(g, rng);
    const DirichletLaplacianSolver solver(g);
    const Field x = solver.solve(rhs);
    const Field back = apply_laplacian(g, x);
    for (std::size_t i = 0; i < rhs.values.size(); ++i)
      CHECK(back.values[i] == Approx(rhs.values[i]).epsilon(1e-10).margin(1e-10));
  }
}
