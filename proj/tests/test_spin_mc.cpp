#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "spinbound/interaction.hpp"
#include "spinbound/lattice.hpp"
#include "spinbound/rng.hpp"
#include "spinbound/spin_mc.hpp"

using namespace spinbound;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("local energy: null move costs nothing") {
  Box box(3);
  const auto fam = CouplingFamily::raw(5.0, 1.0, 2);
  SpinSampler s(box, fam, make_interaction("xy", 0.7), BoundaryKind::constant,
                0.3, 5);
  const Vec2i u{1, -1};
  CHECK(s.local_energy(u, s.theta(u)) == 0.0);
}

TEST_CASE("local energy: single-site system against the hand formula") {
  Box box(0);  // one interior site, collar of thickness cutoff
  const auto fam = CouplingFamily::raw(5.0, 1.0, 2);
  const auto f = make_interaction("xy", 0.9);
  SpinSampler s(box, fam, f, BoundaryKind::constant, 1.1, 7);
  const double t_old = s.theta(Vec2i{0, 0});
  const double t_new = 2.34;
  // all neighbours sit on the collar at angle 1.1
  double expect = 0.0;
  for (int d = 1; d <= 2; ++d)
    expect += 8.0 * d * fam.coupling_at(d) *
              (f(t_new - 1.1) - f(t_old - 1.1));
  CHECK(s.local_energy(Vec2i{0, 0}, t_new) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("local energy equals the from-scratch Hamiltonian difference") {
  Box box(3);
  const auto fam = CouplingFamily::normalized(5.0, 2);
  for (const char* name : {"xy", "abs_kink"}) {
    SpinSampler s(box, fam, make_interaction(name, 0.8),
                  BoundaryKind::random, 0.0, 11);
    auto rng = make_stream(19, 0);
    for (int trial = 0; trial < 20; ++trial) {
      const Vec2i u{static_cast<int>(rng() % 7) - 3,
                    static_cast<int>(rng() % 7) - 3};
      const double t_new = kTwoPi * uniform01(rng);
      const double before = s.total_energy();
      const double delta = s.local_energy(u, t_new);
      s.set_theta(u, t_new);
      const double after = s.total_energy();
      CHECK(delta == doctest::Approx(after - before).epsilon(1e-11));
    }
  }
}

TEST_CASE("trig fast path equals the generic evaluator path") {
  Box box(3);
  const auto fam = CouplingFamily::normalized(5.0, 2);
  auto fast = make_interaction("clock_smooth", 0.6);
  auto generic = fast;
  generic.exact_coefficients.reset();
  SpinSampler sf(box, fam, fast, BoundaryKind::constant, 0.4, 23);
  SpinSampler sg(box, fam, generic, BoundaryKind::constant, 0.4, 23);
  auto rng = make_stream(29, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec2i u{static_cast<int>(rng() % 7) - 3,
                  static_cast<int>(rng() % 7) - 3};
    const double t_new = kTwoPi * uniform01(rng);
    CHECK(sf.local_energy(u, t_new) ==
          doctest::Approx(sg.local_energy(u, t_new)).epsilon(1e-11));
  }
}

TEST_CASE("sweep: flat measure accepts everything; tiny steps accept almost all") {
  Box box(4);
  const auto fam = CouplingFamily::normalized(5.0, 2);
  SpinSampler flat(box, fam, make_interaction("xy", 0.0),
                   BoundaryKind::constant, 0.0, 3);
  CHECK(flat.sweep(1.0) == 1.0);
  SpinSampler cold(box, fam, make_interaction("xy", 0.5),
                   BoundaryKind::constant, 0.0, 3);
  CHECK(cold.sweep(1e-9) >= 0.999);
}

TEST_CASE("running energy matches recomputation after 1000 sweeps") {
  Box box(8);
  const auto fam = CouplingFamily::normalized(5.0, 3);
  SpinSampler s(box, fam, make_interaction("xy", 0.7),
                BoundaryKind::constant, 0.0, 17);
  for (int i = 0; i < 1000; ++i) s.sweep(1.5);
  CHECK(std::abs(s.cached_energy() - s.total_energy()) <= 1e-8);
}

TEST_CASE("burn-in tunes the width into the target acceptance band") {
  Box box(8);
  const auto fam = CouplingFamily::raw(5.0, 2.0, 2);
  SpinSampler s(box, fam, make_interaction("xy", 2.0),
                BoundaryKind::constant, 0.0, 9);
  s.burn_in(300);
  const double acc = s.sweep(s.proposal_width());
  CHECK(acc >= 0.2);
  CHECK(acc <= 0.7);
}

TEST_CASE("correlation estimates: x = 0 is exactly one, magnitudes bounded") {
  Box box(6);
  const auto fam = CouplingFamily::normalized(5.0, 2);
  SpinSampler s(box, fam, make_interaction("xy", 0.5),
                BoundaryKind::constant, 0.0, 13);
  s.burn_in(200);
  const auto est =
      s.estimate_correlations({Vec2i{0, 0}, Vec2i{3, 0}}, 2000, 20);
  CHECK(est[0].mean == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(est[0].stderr_ == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(est[1].mean) <= 1.0);
}

TEST_CASE("infinite temperature: correlation vanishes within noise") {
  Box box(8);
  const auto fam = CouplingFamily::normalized(5.0, 2);
  SpinSampler s(box, fam, make_interaction("xy", 0.0), BoundaryKind::random,
                0.0, 41);
  s.burn_in(100);
  const auto est = s.estimate_correlations({Vec2i{4, 0}}, 4000, 20);
  CHECK(std::abs(est[0].mean) <= 3.0 * est[0].stderr_ + 1e-12);
}

TEST_CASE("global rotation leaves the Hamiltonian invariant") {
  Box box(5);
  const auto fam = CouplingFamily::normalized(5.0, 2);
  SpinSampler s(box, fam, make_interaction("clock_smooth", 0.8),
                BoundaryKind::random, 0.0, 37);
  const double before = s.total_energy();
  s.rotate_all(1.2345);
  CHECK(s.total_energy() == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("monotone decay trend within three sigma") {
  Box box(8);
  const auto fam = CouplingFamily::raw(5.0, 1.0, 2);
  SpinSampler s(box, fam, make_interaction("xy", 0.8),
                BoundaryKind::constant, 0.0, 51);
  s.burn_in(1000);
  const auto est = s.estimate_correlations(
      {Vec2i{1, 0}, Vec2i{2, 0}, Vec2i{4, 0}, Vec2i{8, 0}}, 6000, 30);
  for (size_t i = 0; i + 1 < est.size(); ++i) {
    const double budget = 3.0 * (est[i].stderr_ + est[i + 1].stderr_);
    CHECK(std::abs(est[i + 1].mean) <= std::abs(est[i].mean) + budget);
  }
}

TEST_CASE("two-site eight-state chain is stationary at the Gibbs weights") {
  // discretised Metropolis with the production interaction evaluator
  const auto f = make_interaction("clock_smooth", 0.8);
  const double J = 0.7;
  const int Q = 8;
  auto angle = [&](int q) { return kTwoPi * q / Q; };
  // exact Gibbs weights
  std::vector<double> weight(Q * Q);
  double z = 0.0;
  for (int i = 0; i < Q; ++i)
    for (int j = 0; j < Q; ++j) {
      weight[i * Q + j] = std::exp(J * f(angle(i) - angle(j)));
      z += weight[i * Q + j];
    }
  for (auto& w : weight) w /= z;
  // chain
  auto rng = make_stream(61, 0);
  int si = 0, sj = 0;
  std::vector<long> hits(Q * Q, 0);
  const long steps = 1000000;
  for (long t = 0; t < steps; ++t) {
    const bool first = (rng() & 1u) != 0;
    const int prop = static_cast<int>(rng() % Q);
    const int ni = first ? prop : si, nj = first ? sj : prop;
    const double delta =
        J * (f(angle(ni) - angle(nj)) - f(angle(si) - angle(sj)));
    if (delta >= 0.0 || uniform01(rng) < std::exp(delta)) {
      si = ni;
      sj = nj;
    }
    ++hits[si * Q + sj];
  }
  double tv = 0.0;
  for (int k = 0; k < Q * Q; ++k)
    tv += std::abs(static_cast<double>(hits[k]) / steps - weight[k]);
  tv *= 0.5;
  CHECK(tv <= 0.01);
}

TEST_CASE("single-site production sweep matches the exact conditional law") {
  // one interior site with constant boundary: the stationary density is
  // von-Mises-like, exp(S beta cos(theta - boundary)), computable by quadrature
  Box box(0);
  const auto fam = CouplingFamily::raw(5.0, 0.5, 2);
  const double bangle = 1.0;
  const auto f = make_interaction("xy", 1.0);
  SpinSampler s(box, fam, f, BoundaryKind::constant, bangle, 71);
  s.burn_in(2000);
  const int bins = 64;
  std::vector<long> hist(bins, 0);
  const long sweeps = 400000;
  for (long t = 0; t < sweeps; ++t) {
    s.sweep(s.proposal_width());
    const double th = s.theta(Vec2i{0, 0});
    ++hist[std::min(bins - 1, static_cast<int>(th / kTwoPi * bins))];
  }
  double strength = 0.0;
  for (int d = 1; d <= 2; ++d) strength += 8.0 * d * fam.coupling_at(d);
  // exact bin masses by fine quadrature
  std::vector<double> mass(bins, 0.0);
  double z = 0.0;
  const int sub = 64;
  for (int b = 0; b < bins; ++b) {
    for (int q = 0; q < sub; ++q) {
      const double th = (b + (q + 0.5) / sub) * kTwoPi / bins;
      mass[b] += std::exp(strength * std::cos(th - bangle));
    }
    z += mass[b];
  }
  double tv = 0.0;
  for (int b = 0; b < bins; ++b)
    tv += std::abs(static_cast<double>(hist[b]) / sweeps - mass[b] / z);
  tv *= 0.5;
  CHECK(tv <= 0.015);
}

TEST_CASE("rotated boundary ensemble agrees with the base ensemble") {
  Box box(5);
  const auto fam = CouplingFamily::raw(5.0, 1.0, 2);
  const auto f = make_interaction("xy", 0.5);
  const auto rep = rotation_invariance_check(
      box, fam, f, {Vec2i{1, 0}, Vec2i{3, 0}}, 4, 3000, 500, 2.13, 83, 2);
  CHECK(rep.max_sigma_deviation <= 3.0);
}

TEST_CASE("measure decomposition: pi is dominated by the 2-eps Bernoulli product") {
  // Three sites on a triangle, angles integrated by quadrature after gauge
  // fixing. The decomposition weight of an edge set A is
  //   Z_A = int prod_{e in A} (e^{J_e epsbar(grad)} - 1) e^{sum J_e ftilde}
  // and pi(A) = Z_A / Z. Every increasing event must satisfy
  //   pi(E) <= P_{Bernoulli(2 eps J_e)}(E).
  const auto f = make_interaction("abs_kink", 1.0);
  const auto approx = approximate(f, 0.3);
  const double eps = approx.epsilon;
  const double J[3] = {0.4, 0.3, 0.2};  // edges: (1,2), (1,3), (2,3)

  const int G = 256;
  std::vector<double> ft(G), eb(G);
  for (int j = 0; j < G; ++j) {
    const double x = kTwoPi * j / G;
    ft[j] = approx.partial_sum(x);
    eb[j] = approx.remainder(f, x);
    REQUIRE(eb[j] >= -1e-9);
    REQUIRE(eb[j] <= eps + 1e-9);
  }
  auto idx = [&](int a) { return ((a % G) + G) % G; };

  double z_a[8] = {0};
  for (int a = 0; a < G; ++a)
    for (int b = 0; b < G; ++b) {
      const int g12 = idx(-a), g13 = idx(-b), g23 = idx(a - b);
      const double smooth =
          std::exp(J[0] * ft[g12] + J[1] * ft[g13] + J[2] * ft[g23]);
      const double factor[3] = {std::expm1(J[0] * eb[g12]),
                                std::expm1(J[1] * eb[g13]),
                                std::expm1(J[2] * eb[g23])};
      for (int A = 0; A < 8; ++A) {
        double w = smooth;
        for (int e = 0; e < 3; ++e)
          if (A & (1 << e)) w *= factor[e];
        z_a[A] += w;
      }
    }
  double z = 0.0;
  for (int A = 0; A < 8; ++A) z += z_a[A];
  double pi[8], prod[8];
  const double p2[3] = {2 * eps * J[0], 2 * eps * J[1], 2 * eps * J[2]};
  for (int A = 0; A < 8; ++A) {
    pi[A] = z_a[A] / z;
    prod[A] = 1.0;
    for (int e = 0; e < 3; ++e)
      prod[A] *= (A & (1 << e)) ? p2[e] : 1.0 - p2[e];
  }
  double total = 0.0;
  for (int A = 0; A < 8; ++A) total += pi[A];
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  // all upward-closed families of edge sets
  int upsets = 0;
  for (int S = 0; S < 256; ++S) {
    bool upset = true;
    for (int A = 0; A < 8 && upset; ++A) {
      if (!(S & (1 << A))) continue;
      for (int B = 0; B < 8; ++B)
        if ((A & B) == A && !(S & (1 << B))) {
          upset = false;
          break;
        }
    }
    if (!upset) continue;
    ++upsets;
    double pi_s = 0.0, prod_s = 0.0;
    for (int A = 0; A < 8; ++A)
      if (S & (1 << A)) {
        pi_s += pi[A];
        prod_s += prod[A];
      }
    CHECK(pi_s <= prod_s + 1e-12);
  }
  CHECK(upsets == 20);
}
