#include <catch2/catch_amalgamated.hpp>

#include "nehari/validate.hpp"

using namespace nehari;
using Catch::Approx;

TEST_CASE("ray shape verdicts") {
  const Grid g = build_grid(1, 16);
  const auto sl = ModelSpec::semilinear(g, NonlinearitySpec::pure_power(4.0));

  // monotone decreasing H: conforms to (F1) (the s(u) = 0 case)
  const auto f1 = check_ray_shape(sl, +1, 6);
  CHECK(f1.passed());
  CHECK(f1.hypothesis == "F1");

  // same model against the (F2) orientation must fail with a counterexample
  const auto f2 = check_ray_shape(sl, -1, 6);
  CHECK(f2.verdict == ValidationReport::Verdict::fail);
  REQUIRE(f2.counterexample.has_value());

  // concave-convex: up-then-down conforms to (F1)
  const auto cc = ModelSpec::concave_convex(g, NonlinearitySpec::pure_power(4.0), 1.5);
  CHECK(check_ray_shape(cc, +1, 6).passed());
}

TEST_CASE("scalar conditions f2 / f2' / f3 / f1") {
  const auto pp4 = NonlinearitySpec::pure_power(4.0);

  ScalarConditionParams pos;
  pos.c_sign = +1;
  CHECK(check_scalar_condition(pp4, "f2", pos).passed());

  ScalarConditionParams neg;
  neg.c_sign = -1;
  const auto rep = check_scalar_condition(pp4, "f2", neg);
  CHECK(rep.verdict == ValidationReport::Verdict::fail);
  REQUIRE(rep.counterexample.has_value());

  // f3 for f(t) = |t|^{p-2} t with p = 3, q = 1.5
  ScalarConditionParams f3p;
  f3p.q = 1.5;
  CHECK(check_scalar_condition(NonlinearitySpec::pure_power(3.0), "f3", f3p).passed());

  // f2' fails for r = 1.5: f(s)/s is bounded (no divergence)
  const auto weak = check_scalar_condition(NonlinearitySpec::pure_power(1.5),
                                           "f2prime", pos);
  CHECK(weak.verdict == ValidationReport::Verdict::fail);
  REQUIRE(weak.counterexample.has_value());

  CHECK(check_scalar_condition(pp4, "f1").passed());
  CHECK_THROWS_AS(check_scalar_condition(pp4, "bogus"), config_error);
}

TEST_CASE("A-conditions for the default coefficient") {
  const auto pass = check_A_conditions(2.0, 2.0, 3.0, 1.0, 1.0);
  REQUIRE(pass.size() == 3);
  CHECK(pass[0].hypothesis == "A1");
  CHECK(pass[0].passed());
  CHECK(pass[1].passed());
  CHECK(pass[2].passed());

  // parameter gate k1 < (r/p) k0 violated
  const auto gate = check_A_conditions(2.0, 2.0, 1.5, 1.0, 1.0);
  CHECK(gate[0].verdict == ValidationReport::Verdict::fail);
  REQUIRE(gate[0].counterexample.has_value());

  // q < p exercises the singular coefficient branch
  const auto pq = check_A_conditions(3.0, 1.8, 4.0, 1.0, 1.0);
  CHECK(pq[0].passed());
  CHECK(pq[1].passed());
  CHECK(pq[2].passed());
}

TEST_CASE("BN threshold closed form vs dense scan") {
  Rng rng(77);
  std::uniform_real_distribution<double> sdist(0.5, 5.0);
  std::uniform_real_distribution<double> cdist(0.01, 3.0);
  for (int i = 0; i < 100; ++i) {
    const int N = 3 + static_cast<int>(i % 3);
    const double S = sdist(rng), c = cdist(rng);
    const BnThreshold bt = bn_threshold(N, S, c);
    CHECK(bt.max_j ==
          Approx(bt.max_j_scan).epsilon(1e-8).margin(1e-8 * (1.0 + std::fabs(bt.max_j))));
  }

  // admissibility flips exactly at c = S^{N/2}/N
  const double S = 2.3;
  const double cstar = std::pow(S, 1.5) / 3.0;
  CHECK(bn_threshold(3, S, cstar).admissible == false);  // strict inequality
  CHECK(bn_threshold(3, S, cstar).max_j == Approx(0.0).margin(1e-12));
  CHECK(bn_threshold(3, S, 0.5 * cstar).admissible == true);
  CHECK(bn_threshold(3, S, std::nextafter(cstar, 0.0)).admissible == true);
}

TEST_CASE("F3 coercivity sampling") {
  const Grid g = build_grid(1, 12);
  const auto sl = ModelSpec::semilinear(g, NonlinearitySpec::pure_power(4.0));
  const auto rep = check_F3_coercivity(sl, 20);
  CHECK(rep.passed());
  CHECK(!rep.notes.empty());

  const auto pq = ModelSpec::pq_general(build_grid(2, 5), 2.0, 2.0, 3.0);
  CHECK(check_F3_coercivity(pq, 10).passed());
}

TEST_CASE("H1 unimodality scan for the direct path") {
  const Grid g = build_grid(1, 12);
  const auto mk =
      ModelSpec::kirchhoff(g, 2.0, -1.0, NonlinearitySpec::pure_power(4.0));
  const auto rep = check_h1_unimodal(
      g,
      [&](const Field& u, double t) {
        const double ep = dirichlet_energy_p(g, u, 2.0, 0.0);
        detail::DirectFiber fiber{g, u, mk.nonlin, std::pow(ep, -0.5), -1.0};
        return fiber.derivative(t);
      },
      6, 5);
  CHECK(rep.passed());
  CHECK(rep.hypothesis == "H1");
}

TEST_CASE("shooting oracle: linear eigenvalue recovery") {
  // At slope 1e-8 the quartic nonlinearity is numerically zero, so the
  // terminal value vanishes exactly at the linear eigenvalue pi^2.
  const auto f = NonlinearitySpec::pure_power(4.0);
  double lo = 8.0, hi = 12.0;
  auto terminal = [&](double lambda) {
    return detail::shoot(f, lambda, 1e-8, 1e-4).u.back();
  };
  REQUIRE(terminal(lo) > 0.0);
  REQUIRE(terminal(hi) < 0.0);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (terminal(mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(0.5 * (lo + hi) == Approx(M_PI * M_PI).epsilon(1e-6));
}

TEST_CASE("shooting oracle: ground branch at lambda = 0") {
  const Grid g = build_grid(1, 512);
  const auto f = NonlinearitySpec::pure_power(4.0);
  const auto branches = shooting_oracle_1d(g, f, 0.0);
  REQUIRE(!branches.empty());
  const auto& b = branches.front();
  CHECK(b.sign_changes == 0);

  // positive and symmetric about x = 1/2 (autonomous phase-plane symmetry)
  double minv = 1e300, asym = 0.0;
  for (int i = 0; i < g.n; ++i) {
    minv = std::min(minv, b.u.values[static_cast<std::size_t>(i)]);
    asym = std::max(asym, std::fabs(b.u.values[static_cast<std::size_t>(i)] -
                                    b.u.values[static_cast<std::size_t>(g.n - 1 - i)]));
  }
  CHECK(minv >= -1e-10);
  CHECK(asym <= 1e-6 * max_abs(b.u));

  // oracle energy vs the grid functional at the restriction: two
  // independent discretizations of Phi_0
  const auto m = ModelSpec::semilinear(g, f);
  CHECK(b.energy == Approx(eval_phi_lambda(m, b.u, 0.0)).epsilon(1e-3));
}

TEST_CASE("shooting oracle: small-amplitude branch near the eigenvalue") {
  const Grid g = build_grid(1, 64);
  const auto f = NonlinearitySpec::pure_power(4.0);
  const auto near1 = shooting_oracle_1d(g, f, 0.97 * M_PI * M_PI);
  const auto near2 = shooting_oracle_1d(g, f, 0.999 * M_PI * M_PI);
  REQUIRE(!near1.empty());
  REQUIRE(!near2.empty());
  CHECK(near1.front().sign_changes == 0);
  CHECK(near2.front().energy > 0.0);
  CHECK(near2.front().energy < near1.front().energy);
  CHECK(near2.front().energy < 1e-3);
}

TEST_CASE("shooting oracle: empty for asymptotically linear f below the gap") {
  // f(s) ~ s at infinity; lambda + 1 < pi^2 leaves no nontrivial solution.
  const Grid g = build_grid(1, 32);
  const auto f = NonlinearitySpec::saturated_power(2.0);
  const auto branches = shooting_oracle_1d(g, f, 0.5 * M_PI * M_PI);
  CHECK(branches.empty());
}

TEST_CASE("prescribed-energy oracle") {
  const Grid g = build_grid(1, 64);
  const auto f = NonlinearitySpec::pure_power(4.0);
  const auto res = prescribed_energy_oracle_1d(g, f, 1.0, 1e-6);
  REQUIRE_FALSE(res.inconclusive);

  // feeding the returned lambda back into shooting reproduces the level
  const auto branches = shooting_oracle_1d(g, f, res.lambda);
  REQUIRE(!branches.empty());
  CHECK(branches.front().energy == Approx(1.0).epsilon(1e-5));

  // c -> 0+: lambda approaches the linear eigenvalue from below
  const double l1 = prescribed_energy_oracle_1d(g, f, 0.5, 1e-6).lambda;
  const double l2 = prescribed_energy_oracle_1d(g, f, 0.125, 1e-6).lambda;
  CHECK(res.lambda < l1);
  CHECK(l1 < l2);
  CHECK(l2 < M_PI * M_PI);
}

TEST_CASE("sobolev constant estimate") {
  const double S = estimate_sobolev_constant(build_grid(3, 6), 6.0, 120);
  CHECK(S > 0.0);
  // deterministic given the seed
  CHECK(S == estimate_sobolev_constant(build_grid(3, 6), 6.0, 120));
}

TEST_CASE("verdicts are reproducible under a fixed seed") {
  const Grid g = build_grid(1, 12);
  const auto sl = ModelSpec::semilinear(g, NonlinearitySpec::pure_power(4.0));
  const auto a = check_ray_shape(sl, +1, 6, {1e-3, 1e3}, 64, 99);
  const auto b = check_ray_shape(sl, +1, 6, {1e-3, 1e3}, 64, 99);
  CHECK(a.verdict == b.verdict);
  CHECK(a.notes == b.notes);
  const auto c1 = check_F3_coercivity(sl, 10, 5);
  const auto c2 = check_F3_coercivity(sl, 10, 5);
  CHECK(c1.notes == c2.notes);
}

TEST_CASE("shooting oracle finds the sign-changing second branch") {
  const Grid g = build_grid(1, 128);
  const auto branches =
      shooting_oracle_1d(g, NonlinearitySpec::pure_power(4.0), 0.0, 1e-10, 3);
  REQUIRE(branches.size() >= 2);
  CHECK(branches[0].sign_changes == 0);
  CHECK(branches[1].sign_changes == 1);
  CHECK(branches[1].slope0 > branches[0].slope0);
  // higher branches carry higher energy at lambda = 0
  CHECK(branches[1].energy > branches[0].energy);
}
