#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hg/kernels.hpp"
#include "hg/rng.hpp"

using namespace hg;
using Catch::Approx;

namespace {

GroupPoint sample_off_slabs(CounterRng& rng, int n) {
  const auto draw = [&] {
    double c;
    do {
      c = rng.uniform(-4.0, 4.0);
    } while (std::abs(c) < 0.05);
    return c;
  };
  std::vector<double> u(n), v(n);
  for (int i = 0; i < n; ++i) u[i] = draw();
  for (int i = 0; i < n; ++i) v[i] = draw();
  return GroupPoint(std::move(u), std::move(v), draw());
}

double pure_rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("omega_a frozen values") {
  CHECK(eval_omega_a(OmegaAParams(1, 1.0), GroupPoint(1, 1, 2)) == Approx(0.25).margin(1e-15));
  CHECK(eval_omega_a(OmegaAParams(1, 0.5), GroupPoint(0, 0, 4)) == Approx(0.125).margin(1e-15));
  // base 1 gives exactly 1 for any order
  CHECK(eval_omega_a(OmegaAParams(1, 0.7), GroupPoint(1, 0, 0)) == 1.0);
  CHECK(eval_omega_a(OmegaAParams(1, 0.7), GroupPoint(0.6, 0.8, 0)) == 1.0);
  CHECK_THROWS_AS(eval_omega_a(OmegaAParams(1, 0.5), origin(1)), std::domain_error);
  CHECK_THROWS_AS(OmegaAParams(1, 2.5), std::invalid_argument);
  CHECK_THROWS_AS(OmegaAParams(1, 0.0), std::invalid_argument);
}

TEST_CASE("omega_ab frozen values") {
  const OmegaABParams p(1, 0.5, 0.25);
  CHECK(eval_omega_ab(p, GroupPoint(1, 0, 3)) == Approx(0.3535533905932738).epsilon(1e-14));
  CHECK(eval_omega_ab(p, GroupPoint(2, 1, 1)) == Approx(0.1166545170526861).epsilon(1e-14));
  CHECK(eval_omega_ab(p, GroupPoint(0.6, 0.8, 0)) == 1.0);
  CHECK_THROWS_AS(eval_omega_ab(p, GroupPoint(0, 0, 3)), std::domain_error);
  CHECK_THROWS_AS(OmegaABParams(1, 1.0, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(OmegaABParams(1, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("v kernel frozen values and default theta") {
  const VParams sym = VParams::symmetric(1, 0.5, 0.25);
  CHECK(sym.theta == Approx(0.125).margin(0.0));
  CHECK(eval_v(sym, GroupPoint(2, 1, 1)) == Approx(0.6305833524471807).epsilon(1e-14));

  // alpha = n beta makes the default bracket exponent vanish
  const VParams flat = VParams::symmetric(1, 0.5, 0.5);
  CHECK(flat.theta == 0.0);
  CHECK(eval_v(flat, GroupPoint(1, 1, 1)) == 1.0);

  const VParams gen(1, 0.25, 0.5, 0.25, 0.2);
  CHECK(eval_v(gen, GroupPoint(4, 1, 2)) == Approx(0.1750227519030544).epsilon(1e-14));

  CHECK_THROWS_AS(eval_v(sym, GroupPoint(0, 1, 1)), std::domain_error);
  CHECK_THROWS_AS(eval_v(sym, GroupPoint(1, 1, 0)), std::domain_error);
  CHECK_THROWS_AS(VParams(1, 0.5, 0.5, 0.25, -0.1), std::invalid_argument);
}

TEST_CASE("separable majorant frozen values and domination example") {
  CHECK(eval_separable_majorant(1, 0.75, GroupPoint(2, 1, 1)) ==
        Approx(0.6484197773255048).epsilon(1e-14));
  CHECK(eval_separable_majorant(1, 0.3, GroupPoint(1, 1, 1)) == 1.0);
  CHECK(eval_separable_majorant(1, 0.75, GroupPoint(2, 1, 1)) >=
        eval_v(VParams::symmetric(1, 0.5, 0.25), GroupPoint(2, 1, 1)));
  CHECK_THROWS_AS(SeparableParams(1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SeparableParams(1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(eval_separable_majorant(1, 0.75, GroupPoint(0, 1, 1)), std::domain_error);
}

TEST_CASE("kernels are strictly positive away from their singular sets") {
  CounterRng rng(13);
  for (int i = 0; i < 500; ++i) {
    const GroupPoint x = sample_off_slabs(rng, 1);
    CHECK(eval_omega_a(OmegaAParams(1, rng.uniform(0.05, 1.95)), x) > 0.0);
    CHECK(eval_omega_ab(OmegaABParams(1, rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)), x) >
          0.0);
    CHECK(eval_v(VParams(1, rng.uniform(-1.0, 1.5), rng.uniform(-1.0, 1.5),
                         rng.uniform(-1.0, 1.5), rng.uniform(0.0, 1.0)),
                 x) > 0.0);
    CHECK(eval_separable_majorant(1, rng.uniform(0.05, 1.95), x) > 0.0);
  }
}

TEST_CASE("kernels are even and invariant under block symmetries") {
  CounterRng rng(31);
  const OmegaAParams oa(1, 0.8);
  const OmegaABParams oab(1, 0.5, 0.25);
  const VParams sym = VParams::symmetric(1, 0.5, 0.25);
  for (int i = 0; i < 300; ++i) {
    const GroupPoint x = sample_off_slabs(rng, 1);
    const GroupPoint flipped(-x.u[0], -x.v[0], -x.t);
    CHECK(eval_omega_a(oa, flipped) == eval_omega_a(oa, x));
    CHECK(eval_omega_ab(oab, flipped) == eval_omega_ab(oab, x));
    CHECK(eval_v(sym, flipped) == eval_v(sym, x));
    // symmetric V: swap the two blocks
    const GroupPoint swapped(x.v[0], x.u[0], x.t);
    CHECK(eval_v(sym, swapped) == Approx(eval_v(sym, x)).epsilon(1e-13));
  }
}

TEST_CASE("omega kernels are invariant under joint rotations of (xi, eta)") {
  CounterRng rng(77);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(rng.pick(2));
    const OmegaAParams oa(n, 0.5 * n);
    const GroupPoint x = sample_off_slabs(rng, n);
    // Givens rotation mixing coordinate p of xi with coordinate q of eta.
    const double phi = rng.uniform(0.0, 6.28318530717958647692);
    const std::size_t p = rng.pick(n), q = rng.pick(n);
    GroupPoint y = x;
    y.u[p] = std::cos(phi) * x.u[p] - std::sin(phi) * x.v[q];
    y.v[q] = std::sin(phi) * x.u[p] + std::cos(phi) * x.v[q];
    CHECK(eval_omega_a(oa, y) == Approx(eval_omega_a(oa, x)).epsilon(1e-12));
    if (n == 1) {
      const OmegaABParams oab(1, 0.5, 0.25);
      CHECK(eval_omega_ab(oab, y) == Approx(eval_omega_ab(oab, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("parabolic homogeneity of omega_a") {
  CounterRng rng(5150);
  for (int i = 0; i < 1000; ++i) {
    const OmegaAParams p(1, rng.uniform(0.05, 1.95));
    const GroupPoint x = sample_off_slabs(rng, 1);
    for (double d : {0.5, 2.0, 8.0}) {
      const double lhs = eval_omega_a(p, dilate(DilationSpec::parabolic(d), x));
      const double rhs = pospow(d, 2.0 * p.a - 4.0) * eval_omega_a(p, x);
      CHECK(pure_rel(lhs, rhs) <= 1e-9);
    }
  }
}

TEST_CASE("two-parameter homogeneity of V") {
  CounterRng rng(5151);
  for (int i = 0; i < 1000; ++i) {
    const double a1 = rng.uniform(-0.5, 1.5), a2 = rng.uniform(-0.5, 1.5);
    const double b = rng.uniform(-0.5, 1.0), th = rng.uniform(0.0, 1.0);
    const VParams p(1, a1, a2, b, th);
    const GroupPoint x = sample_off_slabs(rng, 1);
    for (auto [d1, d2] : {std::pair{0.5, 8.0}, {2.0, 2.0}, {8.0, 0.5}, {2.0, 8.0}}) {
      const double lhs = eval_v(p, dilate(DilationSpec::zygmund(d1, d2), x));
      const double rhs = pospow(d1, a1 + b - 2.0) * pospow(d2, a2 + b - 2.0) * eval_v(p, x);
      CHECK(pure_rel(lhs, rhs) <= 1e-9);
    }
  }
}

TEST_CASE("dominance pair arithmetic") {
  const DominanceWitness w = dominance_pairs(0.5, 0.25, 1);
  CHECK(w.theta == Approx(0.5625).margin(1e-15));
  CHECK(w.region1_pair.first == 0.5);
  CHECK(w.region1_pair.second == 0.25);
  CHECK(w.region2_pair.first == Approx(0.0625).margin(1e-15));
  CHECK(w.region2_pair.second == Approx(0.6875).margin(1e-15));
  CHECK(w.region1_pair.first + w.region1_pair.second ==
        Approx(w.region2_pair.first + w.region2_pair.second).margin(1e-15));

  CHECK_THROWS_AS(dominance_pairs(0.5, 0.25, 1, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(dominance_pairs(0.5, 0.25, 1, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(dominance_pairs(0.2, 0.5, 1), std::invalid_argument);  // a < n b
  CHECK_NOTHROW(dominance_pairs(0.5, 0.5, 1));                           // a = n b
}

TEST_CASE("pointwise dominance holds on a brute-force sweep") {
  CounterRng rng(808);
  std::vector<GroupPoint> pts;
  for (int i = 0; i < 20000; ++i) pts.push_back(sample_off_slabs(rng, 1));

  const DominanceWitness w = dominance_pairs(0.5, 0.25, 1);
  const DominanceReport rep = check_pointwise_dominance(w, pts);
  CHECK(rep.checked == pts.size());
  CHECK(rep.violations.empty());
  CHECK(rep.min_margin >= 0.0);

  // a point on the region boundary |xi||eta| = |tau| passes both checks
  const DominanceReport edge = check_pointwise_dominance(w, {GroupPoint(2.0, 0.5, 1.0)});
  CHECK(edge.violations.empty());

  // spot check: region |xi||eta| >= |tau| with the first pair
  const double omega = eval_omega_ab(OmegaABParams(1, 0.5, 0.25), GroupPoint(2, 1, 1));
  const double v1 = eval_v(w.region1_kernel(), GroupPoint(2, 1, 1));
  CHECK(omega == Approx(0.1166545170526861).epsilon(1e-12));
  CHECK(omega <= v1);
}

TEST_CASE("lambda bracket bound") {
  // frozen example: theta=0.5, xy=2, t=1, lambda=4
  const double lhs = pospow(2.0 / 4.0 + 4.0 / 2.0, -0.5);
  CHECK(lhs == Approx(0.6324555320336759).epsilon(1e-14));
  CHECK(check_lambda_bracket_bound(0.5, 2.0, 1.0, 4.0));
  CHECK(check_lambda_bracket_bound(0.5, 2.0, 1.0, 1.0));  // equality at lambda = 1
  CHECK(check_lambda_bracket_bound(0.0, 2.0, 1.0, 7.0));  // equality at theta = 0

  CounterRng rng(33);
  for (int i = 0; i < 20000; ++i) {
    const double theta = rng.uniform(0.0, 2.0);
    const double xy = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)));
    const double t = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)));
    const double lambda = std::exp(rng.uniform(std::log(0.01), std::log(100.0)));
    CHECK(check_lambda_bracket_bound(theta, xy, t, lambda));
  }
  CHECK_THROWS_AS(check_lambda_bracket_bound(0.5, -1.0, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("symmetric V with default theta sits under the separable majorant") {
  CounterRng rng(404);
  const std::vector<std::pair<double, double>> cases = {
      {0.5, 0.25}, {0.25, 0.5}, {0.5, 0.5}, {0.9, -0.15}, {-0.15, 0.9}, {1.2, 0.3}};
  for (const auto& [alpha, beta] : cases) {
    const VParams vp = VParams::symmetric(1, alpha, beta);
    const double s = alpha + beta;
    for (int i = 0; i < 3000; ++i) {
      const GroupPoint x = sample_off_slabs(rng, 1);
      const double v = eval_v(vp, x);
      const double m = eval_separable_majorant(1, s, x);
      CHECK(v <= m * (1.0 + 1e-12));
    }
  }
}
