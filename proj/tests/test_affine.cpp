#include <catch2/catch_amalgamated.hpp>

#include "nehari/affine.hpp"
#include "nehari/fibering.hpp"

using namespace nehari;
using Catch::Approx;

namespace {

Field product_sine(const Grid& g, int kx = 1, int ky = 1) {
  Field f = zero_field(g);
  for (int iy = 0; iy < g.n; ++iy)
    for (int ix = 0; ix < g.n; ++ix)
      f.values[static_cast<std::size_t>(iy) * g.n + ix] =
          std::sin(kx * M_PI * g.coord(ix)) * std::sin(ky * M_PI * g.coord(iy));
  return f;
}

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

TEST_CASE("gamma constant") {
  CHECK(gamma_constant(2, 2.0) == Approx(4.0 * M_PI).epsilon(1e-13));
  CHECK(unit_ball_volume(1.0) == Approx(2.0).epsilon(1e-12));
  CHECK(unit_ball_volume(2.0) == Approx(M_PI).epsilon(1e-12));

  // regression values on a p sample; monotone increasing in p
  CHECK(gamma_constant(2, 1.5) == Approx(7.13236914855158).epsilon(1e-12));
  CHECK(gamma_constant(2, 2.5) == Approx(21.736309516871).epsilon(1e-12));
  CHECK(gamma_constant(2, 3.0) == Approx(37.1091441767897).epsilon(1e-12));
  double prev = 0.0;
  for (double p : {1.5, 2.0, 2.5, 3.0}) {
    CHECK(gamma_constant(2, p) > prev);
    prev = gamma_constant(2, p);
  }
}

TEST_CASE("sphere quadrature") {
  const auto q = sphere_quadrature(64);
  double wsum = 0.0;
  for (int j = 0; j < q.m; ++j) wsum += q.weight;
  CHECK(wsum == Approx(2.0 * M_PI).epsilon(1e-12));
  for (int j = 0; j < q.m / 2; ++j) {
    CHECK(q.directions[j][0] == Approx(-q.directions[j + q.m / 2][0]).margin(1e-14));
    CHECK(q.directions[j][1] == Approx(-q.directions[j + q.m / 2][1]).margin(1e-14));
  }
  CHECK_THROWS_AS(sphere_quadrature(2), config_error);
}

TEST_CASE("directional norms symmetries") {
  const Grid g = build_grid(2, 15);
  const Field u = product_sine(g);
  const auto quad = sphere_quadrature(64);
  const auto nu = directional_lp_norms(g, u, quad, 2.0);

  // xi and -xi agree
  for (int j = 0; j < quad.m / 2; ++j)
    CHECK(nu[j] == Approx(nu[j + quad.m / 2]).epsilon(1e-12));
  // (1,0) and (0,1) agree by the x<->y symmetry of the field
  CHECK(nu[0] == Approx(nu[16]).epsilon(1e-10));

  // linear scaling
  const auto nu2 = directional_lp_norms(g, scaled(u, 3.0), quad, 2.0);
  for (std::size_t j = 0; j < nu.size(); ++j)
    CHECK(nu2[j] == Approx(3.0 * nu[j]).epsilon(1e-12));

  CHECK_THROWS_AS(directional_lp_norms(g, zero_field(g), quad, 2.0),
                  degenerate_input_error);
  CHECK_THROWS_AS(directional_lp_norms(build_grid(1, 8), u, quad, 2.0),
                  config_error);
}

TEST_CASE("affine energy homogeneity and positivity") {
  const Grid g = build_grid(2, 12);
  const auto quad = sphere_quadrature(64);
  const auto params = affine_params(2.0);
  Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    const Field u = random_field(g, rng);
    const double E = affine_energy(g, u, quad, params);
    CHECK(E > 0.0);
    for (double t : {0.5, 2.0, 10.0})
      CHECK(affine_energy(g, scaled(u, t), quad, params) ==
            Approx(t * E).epsilon(1e-12));
  }
}

TEST_CASE("quadrature refinement converges") {
  const Grid g = build_grid(2, 12);
  const auto params = affine_params(2.0);
  Rng rng(9);
  for (int i = 0; i < 3; ++i) {
    Field u = random_field(g, rng);
    axpy(u, 2.0, product_sine(g));
    const double e16 = affine_energy(g, u, sphere_quadrature(16), params);
    const double e64 = affine_energy(g, u, sphere_quadrature(64), params);
    const double e256 = affine_energy(g, u, sphere_quadrature(256), params);
    CHECK(std::fabs(e256 - e64) <= std::fabs(e64 - e16) + 1e-15);
  }
}

TEST_CASE("affine gradient: finite differences, homogeneity, Euler identity") {
  const Grid g = build_grid(2, 8);
  const auto quad = sphere_quadrature(32);
  Rng rng(15);
  for (double p : {2.0, 3.0}) {
    const auto params = affine_params(p);
    const Field u = random_field(g, rng);
    const Field grad = affine_energy_grad(g, u, quad, params);
    const Field fd = fd_gradient(g, u, [&](const Field& w) {
      return std::pow(affine_energy(g, w, quad, params), p) / p;
    });
    for (std::size_t i = 0; i < grad.values.size(); ++i)
      CHECK(grad.values[i] == Approx(fd.values[i]).epsilon(1e-5).margin(1e-7));

    // (p-1)-homogeneous
    const Field grad2 = affine_energy_grad(g, scaled(u, 2.0), quad, params);
    for (std::size_t i = 0; i < grad.values.size(); ++i)
      CHECK(grad2.values[i] ==
            Approx(std::pow(2.0, p - 1.0) * grad.values[i]).epsilon(1e-10).margin(1e-12));

    // Euler identity for the p-homogeneous E^p
    const double Ep = std::pow(affine_energy(g, u, quad, params), p);
    CHECK(dot(grad, u) == Approx(Ep).epsilon(1e-8));
  }
}

TEST_CASE("H_u kernel") {
  const Grid g = build_grid(2, 10);
  const auto quad = sphere_quadrature(64);
  const auto params = affine_params(2.0);
  Rng rng(21);
  const Field u = random_field(g, rng);

  CHECK(h_u_kernel(g, u, quad, params, {0.0, 0.0}) == 0.0);

  const std::array<double, 2> zeta{0.3, -1.1};
  const double h1 = h_u_kernel(g, u, quad, params, zeta);
  const double h2 = h_u_kernel(g, u, quad, params, {2.0 * zeta[0], 2.0 * zeta[1]});
  CHECK(h2 == Approx(std::pow(2.0, params.p) * h1).epsilon(1e-12));
  const double hm = h_u_kernel(g, u, quad, params, {-zeta[0], -zeta[1]});
  CHECK(hm == Approx(h1).epsilon(1e-12));
}

TEST_CASE("kernel reproduces the energy integral") {
  // int_Omega H_u^p(grad u) = E^p(u), as a discretization-consistency check.
  const Grid g = build_grid(2, 31);
  const auto quad = sphere_quadrature(128);
  const auto params = affine_params(2.0);
  Rng rng(27);
  Field u = product_sine(g);
  axpy(u, 0.3, product_sine(g, 2, 1));

  double integral = 0.0;
  detail::for_each_cell(g, u.values, [&](const double* gr, int, int, int) {
    integral += h_u_kernel(g, u, quad, params, {gr[0], gr[1]});
  });
  integral *= g.cell_measure();
  const double Ep = std::pow(affine_energy(g, u, quad, params), params.p);
  CHECK(integral == Approx(Ep).epsilon(2e-2));
}

TEST_CASE("phi_affine evenness and gradient") {
  const Grid g = build_grid(2, 8);
  const auto quad = sphere_quadrature(32);
  const auto params = affine_params(2.0);
  const auto f = NonlinearitySpec::pure_power(4.0);
  Rng rng(33);
  const Field u = random_field(g, rng);

  CHECK(eval_phi_affine(g, scaled(u, -1.0), quad, params, f) ==
        Approx(eval_phi_affine(g, u, quad, params, f)).epsilon(1e-12));

  const Field grad = grad_phi_affine(g, u, quad, params, f);
  const Field fd = fd_gradient(g, u, [&](const Field& w) {
    return eval_phi_affine(g, w, quad, params, f);
  });
  for (std::size_t i = 0; i < grad.values.size(); ++i)
    CHECK(grad.values[i] == Approx(fd.values[i]).epsilon(1e-5).margin(1e-7));
}

TEST_CASE("affine Nehari projection: identity and scaling law") {
  const Grid g = build_grid(2, 12);
  const auto ap = make_affine_problem(g, 2.0, 64, NonlinearitySpec::pure_power(4.0));
  Rng rng(39);
  const Field u = random_field(g, rng);

  const FiberingResult proj = solve_t_nehari(ap, u);
  const Field w = scaled(u, proj.t);
  const double Ep = std::pow(affine_energy(g, w, ap.quad, ap.params), 2.0);
  double fu = 0.0;
  for (double v : w.values) fu += f_eval(ap.nonlin, v) * v;
  fu *= g.cell_measure();
  CHECK(Ep == Approx(fu).epsilon(1e-8));

  for (double s : {0.5, 2.0, 10.0})
    CHECK(solve_t_nehari(ap, scaled(u, s)).t == Approx(proj.t / s).epsilon(1e-9));
}
