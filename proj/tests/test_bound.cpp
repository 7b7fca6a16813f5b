#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "spinbound/bound.hpp"
#include "spinbound/errors.hpp"
#include "spinbound/rng.hpp"
#include "spinbound/series.hpp"

using namespace spinbound;

namespace {

// Independent oracle: naive double loop over all pairs with at least one
// in-box endpoint, plain cosh evaluation.
double oracle_log_F(const RotationProfile& p, const CouplingFamily& fam,
                    const TrigApprox& approx, Vec2i x) {
  const Box& box = p.box;
  const int cutoff = fam.cutoff_radius();
  double sum = p.at(x) - p.at(Vec2i{0, 0});
  for (int idx = 0; idx < box.vertex_count(); ++idx) {
    const Vec2i u = box.vertex(idx);
    for (int dy = -cutoff; dy <= cutoff; ++dy)
      for (int dx = -cutoff; dx <= cutoff; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Vec2i v = u + Vec2i{dx, dy};
        if (box.contains(v) && box.index(v) < idx) continue;  // count once
        const double da = p.at(v) - p.at(u);
        if (da == 0.0) continue;
        double term = 0.0;
        for (int k = 1; k <= approx.K(); ++k)
          term += std::abs(approx.coefficients[k - 1]) *
                  (std::cosh(k * da) - 1.0);
        sum += fam.coupling(Vec2i{dx, dy}) * term;
      }
  }
  return sum;
}

TrigApprox xy_approx(double beta = 1.0) {
  return approx_from_coefficients({beta}, 0.05);
}

}  // namespace

TEST_CASE("abar profile: harmonic sums and telescoping") {
  Box box(5);
  const auto p = build_profile(ProfileFlavor::abar_radial, 0.1, 3, box);
  // layer-1 value: abar_1 - abar_3 = -0.1 + 0.1(1 + 1/2 + 1/3)
  CHECK(p.at(Vec2i{1, 0}) == doctest::Approx(0.1 * (0.5 + 1.0 / 3.0)).epsilon(1e-14));
  CHECK(p.at(Vec2i{0, 1}) == p.at(Vec2i{1, 1}));  // constant on layers
  CHECK(p.at(Vec2i{4, 0}) == 0.0);                // vanishes outside Lambda_R
  CHECK(p.at(Vec2i{9, 9}) == 0.0);                // and outside the box
  // a_0 - a_x = delta * H_R for x in L_R
  const double h3 = 1.0 + 0.5 + 1.0 / 3.0;
  CHECK(p.at(Vec2i{0, 0}) - p.at(Vec2i{3, 0}) ==
        doctest::Approx(0.1 * h3).epsilon(1e-14));
}

TEST_CASE("abar telescoping at scale: a_x - a_0 = -delta H_R") {
  Box box(64);
  const double delta = 0.037;
  const auto p = build_profile(ProfileFlavor::abar_radial, delta, 64, box);
  CHECK(p.at(Vec2i{64, 0}) - p.at(Vec2i{0, 0}) ==
        doctest::Approx(-delta * harmonic_number(64)).epsilon(1e-13));
}

TEST_CASE("tilde profile: truncation and the -delta/8 log R bound") {
  Box box(256);
  const double delta = 0.2;
  const int R = 256;
  const auto p = build_profile(ProfileFlavor::tilde_truncated, delta, R, box);
  const int t = 2 * annulus_inner_radius(R);  // 32
  CHECK(p.at(Vec2i{t, 0}) == p.at(Vec2i{t - 5, 0}));  // flat inside Lambda_t
  const double drop = p.at(Vec2i{R, 0}) - p.at(Vec2i{0, 0});
  CHECK(drop == doctest::Approx(-delta * (harmonic_number(R) -
                                          harmonic_number(t))).epsilon(1e-12));
  CHECK(drop <= -delta / 8.0 * std::log(static_cast<double>(R)));
}

TEST_CASE("cluster-constant profile with empty edges equals tilde profile") {
  Box box(16);
  std::vector<int> m(box.vertex_count());
  for (int i = 0; i < box.vertex_count(); ++i) m[i] = norm_inf(box.vertex(i));
  const auto tilde = build_profile(ProfileFlavor::tilde_truncated, 0.3, 9, box);
  const auto clus =
      build_profile(ProfileFlavor::cluster_constant, 0.3, 9, box, &m);
  for (int i = 0; i < box.vertex_count(); ++i)
    CHECK(clus.values[i] == tilde.values[i]);
  CHECK_THROWS_AS(build_profile(ProfileFlavor::cluster_constant, 0.3, 9, box),
                  std::invalid_argument);
}

TEST_CASE("evaluate_log_F: zero profile gives exactly zero") {
  Box box(8);
  const auto fam = CouplingFamily::normalized(5.0, 4);
  RotationProfile p{box, ProfileFlavor::abar_radial, 1.0, 8,
                    std::vector<double>(box.vertex_count(), 0.0)};
  CHECK(evaluate_log_F(p, fam, xy_approx(), Vec2i{8, 0}) == 0.0);
}

TEST_CASE("evaluate_log_F: single-bump profile, hand formula") {
  // bump t at (1,1) on a 3x3 box with unit nearest-neighbour couplings:
  // 8 incident edges (3 in-box, 5 leaving the box), each cosh(t)-1
  Box box(1);
  const auto fam = CouplingFamily::raw(5.0, 1.0, 1);
  const double t = 0.7;
  RotationProfile p{box, ProfileFlavor::abar_radial, 1.0, 1,
                    std::vector<double>(box.vertex_count(), 0.0)};
  p.values[box.index(Vec2i{1, 1})] = t;
  const double got = evaluate_log_F(p, fam, xy_approx(), Vec2i{0, 1});
  CHECK(got == doctest::Approx(8.0 * (std::cosh(t) - 1.0)).epsilon(1e-12));
}

TEST_CASE("evaluate_log_F agrees with the double-loop oracle") {
  auto rng = make_stream(17, 0);
  const auto fam = CouplingFamily::normalized(5.0, 3);
  Box box(6);
  const auto approx = approx_from_coefficients({0.8, 0.0, 0.2}, 0.05);
  for (int trial = 0; trial < 4; ++trial) {
    RotationProfile p{box, ProfileFlavor::abar_radial, 1.0, 6,
                      std::vector<double>(box.vertex_count(), 0.0)};
    for (auto& v : p.values) v = 0.5 * (2.0 * uniform01(rng) - 1.0);
    const Vec2i x{5, -2};
    const double got = evaluate_log_F(p, fam, approx, x);
    const double want = oracle_log_F(p, fam, approx, x);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
  // radial profiles have zero intra-layer contribution by construction
  const auto radial = build_profile(ProfileFlavor::abar_radial, 0.4, 6, box);
  CHECK(evaluate_log_F(radial, fam, approx, Vec2i{6, 0}) ==
        doctest::Approx(oracle_log_F(radial, fam, approx, Vec2i{6, 0}))
            .epsilon(1e-12));
}

TEST_CASE("evaluate_log_F: multi-thread result is bit-identical") {
  const auto fam = CouplingFamily::normalized(5.0, 4);
  Box box(24);
  const auto p = build_profile(ProfileFlavor::abar_radial, 0.7, 12, box);
  const double one = evaluate_log_F(p, fam, xy_approx(), Vec2i{12, 0}, 1);
  const double four = evaluate_log_F(p, fam, xy_approx(), Vec2i{12, 0}, 4);
  CHECK(one == four);
}

TEST_CASE("evaluate_log_F: diverged profile error") {
  Box box(8);
  const auto fam = CouplingFamily::normalized(5.0, 4);
  const auto p = build_profile(ProfileFlavor::abar_radial, 2000.0, 8, box);
  CHECK_THROWS_AS(evaluate_log_F(p, fam, xy_approx(), Vec2i{8, 0}),
                  DivergedProfileError);
}

TEST_CASE("closed-form bound: limits and the negativity threshold") {
  const auto fam = CouplingFamily::normalized(5.0, 16);
  const auto approx = xy_approx();
  const double q = warmup_quadratic_constant(fam) * approx.D_K();
  const double cst = warmup_additive_constant(fam) * approx.C_K();
  // delta -> 0: only the constant term survives
  CHECK(closed_form_bound(1e-12, 1024, approx, fam) ==
        doctest::Approx(cst).epsilon(1e-9));
  // coefficient of log R changes sign exactly at delta = 1/q
  const double at = 1.0 / q;
  const double just_below =
      closed_form_bound(at * 0.999, 256, approx, fam) - cst;
  const double just_above =
      closed_form_bound(std::min(1.0, at * 1.001), 256, approx, fam) - cst;
  CHECK(just_below < 0.0);
  CHECK(just_above > 0.0);
  CHECK_THROWS_AS(closed_form_bound(1.5, 256, approx, fam),
                  std::invalid_argument);
}

namespace {
// extended-precision zeta for the independent closed-form oracle
long double zeta_oracle(long double s) {
  const int n = 48;
  std::vector<long double> d(n + 1);
  long double term = 1.0L;
  d[0] = 1.0L;
  for (int i = 1; i <= n; ++i) {
    term *= (static_cast<long double>(n + i - 1) * (n - i + 1)) * 4.0L /
            ((2.0L * i - 1.0L) * (2.0L * i));
    d[i] = d[i - 1] + term;
  }
  long double sum = 0.0L;
  for (int k = 0; k < n; ++k) {
    const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
    sum += sign * (d[k] - d[n]) / std::pow(static_cast<long double>(k + 1), s);
  }
  return (-sum / d[n]) / (1.0L - std::pow(2.0L, 1.0L - s));
}
}  // namespace

TEST_CASE("closed-form bound vs extended-precision re-implementation") {
  const auto fam = CouplingFamily::normalized(5.0, 16);
  const auto approx = xy_approx();
  const long double J = fam.bound_constant();
  const long double z = zeta_oracle(2.0L);
  const long double delta = 0.01L;
  const long double want =
      (-delta + delta * delta * (2.0L / 3.0L) * 1.0L * 64.0L * J * 32.0L * z) *
          std::log(1024.0L) +
      72.0L * 1.0L * J * 32.0L * z;
  CHECK(closed_form_bound(0.01, 1024, approx, fam) ==
        doctest::Approx(static_cast<double>(want)).epsilon(1e-12));
}

TEST_CASE("optimize_delta: interior vertex of the parabola") {
  const auto fam = CouplingFamily::normalized(5.0, 16);
  const auto approx = xy_approx();
  const double q = warmup_quadratic_constant(fam) * approx.D_K();
  const auto opt = optimize_delta(approx, fam, 256, DeltaConstraint::warmup);
  CHECK(opt.delta_star == doctest::Approx(1.0 / (2.0 * q)).epsilon(1e-7));
  CHECK(opt.exponent_C == doctest::Approx(1.0 / (4.0 * q)).epsilon(1e-9));
  // grid-search oracle at 1e-5 resolution
  double best = -1.0, best_c = 0.0;
  for (double d = 1e-5; d <= 1.0; d += 1e-5) {
    const double c = d - q * d * d;
    if (c > best_c) {
      best_c = c;
      best = d;
    }
  }
  CHECK(opt.delta_star == doctest::Approx(best).epsilon(2e-5 / best));
  CHECK(opt.exponent_C == doctest::Approx(best_c).epsilon(1e-6));
}

TEST_CASE("optimize_delta: constraint boundary active for weak curvature") {
  const auto fam = CouplingFamily::raw(5.0, 1e-4, 8);
  const auto approx = approx_from_coefficients({0.0, 0.0, 0.0, 0.25}, 0.05);
  const double q = warmup_quadratic_constant(fam) * approx.D_K();
  REQUIRE(1.0 / (2.0 * q) > 0.25);  // vertex beyond 1/K
  const auto opt = optimize_delta(approx, fam, 64, DeltaConstraint::warmup);
  CHECK(opt.delta_star == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(opt.exponent_C == doctest::Approx(0.25 - q * 0.0625).epsilon(1e-9));
}

TEST_CASE("optimize_delta: exponent nonincreasing in D_K") {
  const auto fam = CouplingFamily::normalized(5.0, 16);
  double prev = 1e100;
  for (double scale : {0.5, 1.0, 2.0, 4.0}) {
    const auto approx = approx_from_coefficients({scale}, 0.05);
    const auto opt = optimize_delta(approx, fam, 64, DeltaConstraint::warmup);
    CHECK(opt.exponent_C <= prev + 1e-15);
    prev = opt.exponent_C;
  }
}

TEST_CASE("chain inequality: log F <= closed form for random (delta, R)") {
  auto rng = make_stream(23, 0);
  const auto fam = CouplingFamily::normalized(5.0, 8);
  const auto approx = xy_approx();
  for (int trial = 0; trial < 6; ++trial) {
    const double delta = 0.05 + 0.95 * uniform01(rng);
    const int R = 8 << (rng() % 3);  // 8, 16, 32
    Box box(2 * R);
    const auto p = build_profile(ProfileFlavor::abar_radial, delta, R, box);
    const double lhs = evaluate_log_F(p, fam, approx, Vec2i{R, 0});
    const double rhs = closed_form_bound(delta, R, approx, fam);
    CHECK(lhs <= rhs);
  }
}

TEST_CASE("good-set exponent formula and constraints") {
  const auto fam = CouplingFamily::normalized(5.0, 16);
  const auto approx = xy_approx();
  const double c_mult = warmup_quadratic_constant(fam);
  const double dk = approx.D_K();
  SUBCASE("C3 = 0 reduces to the warm-up style coefficient with 1/8") {
    const double delta = 0.01;
    CHECK(good_set_exponent(delta, 64, approx, fam, 0.0) ==
          doctest::Approx(-delta / 8.0 + c_mult * dk * delta * delta)
              .epsilon(1e-13));
  }
  SUBCASE("negative for small delta at fixed C3") {
    CHECK(good_set_exponent(1e-4, 64, approx, fam, 3.0) < 0.0);
  }
  SUBCASE("constraint violations throw") {
    CHECK_THROWS_AS(good_set_exponent(0.4, 64, approx, fam, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(good_set_exponent(0.01, 64, approx, fam, -1.0),
                    std::invalid_argument);
  }
  SUBCASE("optimized good-set exponent is positive and beta-scaling halves it") {
    const auto opt4 = optimize_good_set_delta(xy_approx(4.0), fam, 1.0);
    const auto opt8 = optimize_good_set_delta(xy_approx(8.0), fam, 1.0);
    CHECK(opt4.exponent_C > 0.0);
    const double ratio = opt8.exponent_C / opt4.exponent_C;
    CHECK(ratio > 0.45);
    CHECK(ratio < 0.55);
  }
}

TEST_CASE("split inequality audit") {
  CHECK(profile_split_inequality_check(100000, 8, 1));
  // equality-style corner: (t,0,0) with 3t on the right
  for (double t : {0.0, 0.5, 1.5}) {
    const double lhs = std::cosh(2.0 * t) - 1.0;
    const double rhs = (std::cosh(6.0 * t) - 1.0);
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("bound_report: consistent fields at warmup") {
  const auto fam = CouplingFamily::normalized(5.0, 8);
  const auto rep =
      bound_report(xy_approx(), fam, 32, DeltaConstraint::warmup, 0.0, 2);
  CHECK(rep.exponent_C > 0.0);
  CHECK(rep.log_F <= rep.closed_form);
  CHECK(rep.C_K == 1.0);
  CHECK(rep.D_K == 1.0);
  CHECK(rep.c_mult == doctest::Approx(warmup_quadratic_constant(fam)));
}
