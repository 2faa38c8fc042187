#include <catch2/catch_amalgamated.hpp>

#include "nehari/fibering.hpp"

using namespace nehari;
using Catch::Approx;

TEST_CASE("semilinear pure-power projection has the closed form") {
  const Grid g = build_grid(1, 24);
  Rng rng(7);
  for (double r : {4.0, 3.0}) {
    const auto m = ModelSpec::semilinear(g, NonlinearitySpec::pure_power(r));
    for (int i = 0; i < 20; ++i) {
      const Field u = random_field(g, rng);
      const double c = 0.25 + i * 0.1;
      const FiberingResult res = solve_t_c(m, u, c);
      const double closed =
          std::pow(2.0 * c / ((1.0 - 2.0 / r) * lp_integral(g, u, r)), 1.0 / r);
      CHECK(res.t == Approx(closed).epsilon(1e-10));
      CHECK(res.kind == FiberingResult::Kind::max);
      CHECK(res.lo < res.t);
      CHECK(res.t < res.hi);

      // residual contract
      const double alpha = m.alpha();
      const double resid = eval_H(m, scaled(u, res.t)) + alpha * c;
      CHECK(std::fabs(resid) <= 1e-12 * (1.0 + alpha * std::fabs(c)) * 10);
    }
  }
}

TEST_CASE("bracket soundness") {
  const Grid g = build_grid(1, 16);
  const auto m = ModelSpec::semilinear(g, NonlinearitySpec::pure_power(4.0));
  Rng rng(11);
  const Field u = random_field(g, rng);
  const double c = 1.0;
  const FiberingResult res = solve_t_c(m, u, c);
  const double glo = eval_H(m, scaled(u, res.lo)) + 2.0 * c;
  const double ghi = eval_H(m, scaled(u, res.hi)) + 2.0 * c;
  CHECK(((glo > 0.0) != (ghi > 0.0)));
}

TEST_CASE("Brezis-Nirenberg projection satisfies the Nehari constraint") {
  const Grid g = build_grid(3, 6);
  const auto m = ModelSpec::brezis_nirenberg(g, 3, 6.0);
  Rng rng(13);
  for (int i = 0; i < 10; ++i) {
    const Field u = random_field(g, rng);
    const double c = 0.5 + 0.2 * i;
    const FiberingResult res = solve_t_c(m, u, c);
    const double closed =
        std::pow(3.0 * c / lp_integral(g, u, 6.0), 1.0 / 6.0);
    CHECK(res.t == Approx(closed).epsilon(1e-10));
    // projected field meets |t u|_{2*}^{2*} = N c
    CHECK(lp_integral(g, scaled(u, res.t), 6.0) ==
          Approx(3.0 * c).epsilon(1e-10));
  }
}

TEST_CASE("projection scaling t_c(s u) = t_c(u)/s") {
  const Grid g = build_grid(1, 20);
  Rng rng(17);
  const Field u = random_field(g, rng);
  const double c = 1.0;

  const auto sl = ModelSpec::semilinear(g, NonlinearitySpec::pure_power(4.0));
  const double t1 = solve_t_c(sl, u, c).t;
  for (double s : {0.5, 2.0, 10.0})
    CHECK(solve_t_c(sl, scaled(u, s), c).t == Approx(t1 / s).epsilon(1e-9));

  const auto bn = ModelSpec::brezis_nirenberg(build_grid(3, 5), 3, 6.0);
  const Field v = random_field(bn.grid, rng);
  const double tb = solve_t_c(bn, v, c).t;
  for (double s : {0.5, 2.0, 10.0})
    CHECK(solve_t_c(bn, scaled(v, s), c).t == Approx(tb / s).epsilon(1e-9));
}

TEST_CASE("monotone dependence on c") {
  const Grid g = build_grid(1, 20);
  const auto m = ModelSpec::semilinear(g, NonlinearitySpec::pure_power(4.0));
  Rng rng(19);
  const Field u = random_field(g, rng);
  const double t05 = solve_t_c(m, u, 0.5).t;
  const double t1 = solve_t_c(m, u, 1.0).t;
  const double t2 = solve_t_c(m, u, 2.0).t;
  CHECK(t05 < t1);
  CHECK(t1 < t2);
}

TEST_CASE("negative-c orientation gives a fiber minimum") {
  // r < 2 pure power: H(t u) = (2/r - 1) t^r |u|_r^r increases to +inf (F2).
  const Grid g = build_grid(1, 16);
  const auto m = ModelSpec::semilinear(g, NonlinearitySpec::pure_power(1.5));
  Rng rng(23);
  const Field u = random_field(g, rng);
  const FiberingResult res = solve_t_c(m, u, -0.7);
  CHECK(res.kind == FiberingResult::Kind::min);
  const double closed = std::pow(
      2.0 * 0.7 / ((2.0 / 1.5 - 1.0) * lp_integral(g, u, 1.5)), 1.0 / 1.5);
  CHECK(res.t == Approx(closed).epsilon(1e-10));
}

TEST_CASE("no root is a hypothesis violation") {
  // r = 2 pure power makes H vanish identically: the Nehari set is empty.
  const Grid g = build_grid(1, 12);
  const auto m = ModelSpec::semilinear(g, NonlinearitySpec::pure_power(2.0));
  Rng rng(29);
  const Field u = random_field(g, rng);
  CHECK_THROWS_AS(solve_t_c(m, u, 1.0), hypothesis_violation);

  // wrong-orientation c for a strictly decreasing H
  const auto m4 = ModelSpec::semilinear(g, NonlinearitySpec::pure_power(4.0));
  CHECK_THROWS_AS(solve_t_c(m4, u, -1.0), hypothesis_violation);
}

TEST_CASE("degenerate inputs") {
  const Grid g = build_grid(1, 12);
  const auto m = ModelSpec::semilinear(g, NonlinearitySpec::pure_power(4.0));
  Rng rng(31);
  const Field u = random_field(g, rng);
  CHECK_THROWS_AS(solve_t_c(m, u, 0.0), degenerate_input_error);
  CHECK_THROWS_AS(solve_t_c(m, zero_field(g), 1.0), degenerate_input_error);
  CHECK_THROWS_AS(solve_t_c(m, u, 1.0, 0.0), std::domain_error);
}

TEST_CASE("kirchhoff projection closed form") {
  const Grid g = build_grid(1, 24);
  Rng rng(37);
  for (double theta : {1.0, 0.5, -1.0}) {
    const auto m =
        ModelSpec::kirchhoff(g, 2.0, theta, NonlinearitySpec::pure_power(4.0));
    for (int i = 0; i < 20; ++i) {
      const Field u = random_field(g, rng);
      const FiberingResult res = solve_t_nehari(m, u);
      const double nrm_theta =
          std::pow(dirichlet_energy_p(g, u, 2.0, 0.0), theta / 2.0);
      const double closed =
          std::pow(nrm_theta / lp_integral(g, u, 4.0), 1.0 / (4.0 - theta));
      CHECK(res.t == Approx(closed).epsilon(1e-10));
      CHECK(res.kind == FiberingResult::Kind::max);
    }
  }

  // dispatch guard
  const auto sl = ModelSpec::semilinear(g, NonlinearitySpec::pure_power(4.0));
  const Field u = random_field(g, rng);
  CHECK_THROWS_AS(solve_t_nehari(sl, u), not_applicable);
}

TEST_CASE("uniqueness via dense ray scan") {
  const Grid g = build_grid(1, 16);
  const auto m = ModelSpec::semilinear(g, NonlinearitySpec::pure_power(4.0));
  Rng rng(41);
  const Field u = random_field(g, rng);
  const double c = 1.0;
  int sign_changes = 0;
  double prev = eval_H(m, scaled(u, 1e-6)) + 2.0 * c;
  for (int i = 1; i <= 120; ++i) {
    const double t = std::pow(10.0, -6.0 + 12.0 * i / 120.0);
    const double cur = eval_H(m, scaled(u, t)) + 2.0 * c;
    if ((prev > 0.0) != (cur > 0.0)) ++sign_changes;
    prev = cur;
  }
  CHECK(sign_changes == 1);
}

TEST_CASE("fibering profile") {
  const Grid g = build_grid(1, 20);
  const auto m = ModelSpec::semilinear(g, NonlinearitySpec::pure_power(4.0));
  Rng rng(43);
  const Field u = random_field(g, rng);
  const double c = 1.0;
  const FiberingResult proj = solve_t_c(m, u, c);

  std::vector<double> ts;
  for (int i = 0; i <= 80; ++i)
    ts.push_back(proj.t * std::pow(10.0, -2.0 + 4.0 * i / 80.0));
  const auto rows = fibering_profile(m, u, c, ts);
  REQUIRE(rows.size() == ts.size());

  // derivative changes sign exactly once, across the solved projection
  int changes = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if ((rows[i - 1].derivative > 0.0) != (rows[i].derivative > 0.0)) {
      ++changes;
      CHECK(rows[i - 1].t <= proj.t);
      CHECK(proj.t <= rows[i].t);
    }
  }
  CHECK(changes == 1);

  // at the root the analytic derivative is tiny
  const auto at_root = fibering_profile(m, u, c, {proj.t});
  CHECK(std::fabs(at_root.front().derivative) < 1e-9);

  // value column is lambda_c(t u)
  CHECK(at_root.front().value ==
        Approx(eval_lambda_c(m, scaled(u, proj.t), c)).epsilon(1e-12));

  CHECK_THROWS_AS(fibering_profile(m, u, c, {2.0, 1.0}), config_error);
  CHECK_THROWS_AS(fibering_profile(m, u, c, {-1.0, 1.0}), config_error);
}

TEST_CASE("kirchhoff profile blows down near zero for negative theta") {
  const Grid g = build_grid(1, 16);
  const auto m =
      ModelSpec::kirchhoff(g, 2.0, -1.0, NonlinearitySpec::pure_power(4.0));
  Rng rng(47);
  const Field u = random_field(g, rng);
  const auto rows = fibering_profile(m, u, std::nullopt, {1e-4, 1e-2, 1.0});
  CHECK(rows[0].value < rows[1].value);
  CHECK(rows[1].value < rows[2].value);
  CHECK(rows[0].value < -1e2);  // \sim (1/theta) t^theta -> -inf
}
