#include "spinbound/bound.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinbound/errors.hpp"
#include "spinbound/parallel.hpp"
#include "spinbound/rng.hpp"
#include "spinbound/series.hpp"
#include "spinbound/stats.hpp"

namespace spinbound {

std::vector<double> abar_table(double delta, int n) {
  std::vector<double> abar(n + 1, 0.0);
  KahanSum h;
  for (int i = 1; i <= n; ++i) {
    h.add(1.0 / static_cast<double>(i));
    abar[i] = -delta * h.value();
  }
  return abar;
}

std::vector<double> tilde_table(double delta, int R, int n) {
  const int t = 2 * annulus_inner_radius(R);
  const auto abar = abar_table(delta, std::max(n, R));
  std::vector<double> tilde(n + 1, 0.0);
  for (int i = 0; i <= n; ++i) {
    if (i <= t)
      tilde[i] = 0.0;
    else if (i <= R)
      tilde[i] = abar[i] - abar[t];
    else
      tilde[i] = abar[R] - abar[t];
  }
  if (t >= R) std::fill(tilde.begin(), tilde.end(), 0.0);
  return tilde;
}

RotationProfile build_profile(ProfileFlavor flavor, double delta, int R,
                              const Box& box,
                              const std::vector<int>* cluster_m) {
  if (!(delta > 0.0)) throw std::invalid_argument("build_profile: delta <= 0");
  if (R < 1 || R > box.half_width())
    throw std::invalid_argument("build_profile: need 1 <= R <= M");
  if (flavor == ProfileFlavor::cluster_constant && cluster_m == nullptr)
    throw std::invalid_argument(
        "build_profile: cluster_constant flavor needs cluster stats");

  RotationProfile p{box, flavor, delta, R, {}};
  p.values.assign(box.vertex_count(), 0.0);
  const long n = box.vertex_count();

  if (flavor == ProfileFlavor::abar_radial) {
    const auto abar = abar_table(delta, box.half_width());
    for (long idx = 0; idx < n; ++idx) {
      const int norm = norm_inf(box.vertex(static_cast<int>(idx)));
      p.values[idx] = norm <= R ? abar[norm] - abar[R] : 0.0;
    }
    return p;
  }

  // Both remaining flavors use the tilde profile; values vanish for
  // arguments >= R, hence outside Lambda_R.
  const int max_m = 2 * box.half_width();  // m_A can reach the far corner norm
  const auto tilde = tilde_table(delta, R, std::max(max_m, box.half_width()));
  for (long idx = 0; idx < n; ++idx) {
    int arg;
    if (flavor == ProfileFlavor::tilde_truncated) {
      arg = norm_inf(box.vertex(static_cast<int>(idx)));
    } else {
      arg = (*cluster_m)[idx];
      if (arg > max_m) arg = max_m;  // clamp; tilde is constant past R anyway
    }
    p.values[idx] = tilde[arg] - tilde[R];
  }
  return p;
}

namespace {

// Per-edge term sum_k |c_k| (cosh(k da) - 1) in the stable 2 sinh^2 form.
inline double edge_term(const std::vector<double>& abs_ck, double da) {
  double s = 0.0;
  const int K = static_cast<int>(abs_ck.size());
  if (std::abs(da) * K > 700.0) throw DivergedProfileError(std::abs(da) * K);
  for (int k = 1; k <= K; ++k) {
    if (abs_ck[k - 1] == 0.0) continue;
    const double sh = std::sinh(0.5 * k * da);
    s += abs_ck[k - 1] * 2.0 * sh * sh;
  }
  return s;
}

}  // namespace

double evaluate_log_F(const RotationProfile& profile,
                      const CouplingFamily& family, const TrigApprox& approx,
                      Vec2i x, int threads) {
  const Box& box = profile.box;
  if (!box.contains(x)) throw std::invalid_argument("evaluate_log_F: x outside box");

  std::vector<double> abs_ck(approx.coefficients.size());
  for (size_t i = 0; i < abs_ck.size(); ++i)
    abs_ck[i] = std::abs(approx.coefficients[i]);

  const int M = box.half_width();
  const int cutoff = family.cutoff_radius();
  // The profile vanishes on norms >= R, so only rows meeting Lambda_{R+cutoff}
  // can contribute a nonzero gradient.
  const int row_lim = std::min(M, profile.R + cutoff);

  // Positive half-ball directions; out-of-box neighbours are handled with the
  // full ball since they are never scanned from their own side.
  std::vector<Vec2i> half_dirs, all_dirs;
  for (int dy = -cutoff; dy <= cutoff; ++dy)
    for (int dx = -cutoff; dx <= cutoff; ++dx) {
      if (dx == 0 && dy == 0) continue;
      Vec2i d{dx, dy};
      all_dirs.push_back(d);
      if (dy > 0 || (dy == 0 && dx > 0)) half_dirs.push_back(d);
    }

  // Fixed 8-row chunks; chunk sums are combined by a pairwise tree so the
  // reduction order does not depend on the worker count.
  const int chunk_rows = 8;
  const int first_row = -row_lim, last_row = row_lim;
  const int n_rows = last_row - first_row + 1;
  const int n_chunks = (n_rows + chunk_rows - 1) / chunk_rows;
  std::vector<double> chunk_sum(n_chunks, 0.0);

  // Edges between two scanned vertices are counted once via the positive
  // half-ball; edges leaving the scanned square are counted from their
  // scanned endpoint (the outside value is 0 since the profile vanishes on
  // norms >= R <= row_lim).
  auto in_square = [row_lim](Vec2i p) {
    return std::abs(p.x) <= row_lim && std::abs(p.y) <= row_lim;
  };
  parallel_for(n_chunks, threads, [&](long ci) {
    KahanSum acc;
    const int y0 = first_row + static_cast<int>(ci) * chunk_rows;
    const int y1 = std::min(last_row, y0 + chunk_rows - 1);
    for (int y = y0; y <= y1; ++y) {
      for (int ux = -row_lim; ux <= row_lim; ++ux) {
        const Vec2i u{ux, y};
        const double au = profile.values[box.index(u)];
        const bool deep = std::abs(ux) <= row_lim - cutoff &&
                          std::abs(y) <= row_lim - cutoff;
        if (deep) {
          for (const Vec2i& d : half_dirs) {
            const Vec2i v = u + d;
            const double da = profile.values[box.index(v)] - au;
            if (da == 0.0) continue;
            acc.add(family.coupling_at(norm_inf(d)) * edge_term(abs_ck, da));
          }
        } else {
          for (const Vec2i& d : all_dirs) {
            const Vec2i v = u + d;
            if (in_square(v) && !(d.y > 0 || (d.y == 0 && d.x > 0))) continue;
            const double av = box.contains(v) ? profile.values[box.index(v)] : 0.0;
            const double da = av - au;
            if (da == 0.0) continue;
            acc.add(family.coupling_at(norm_inf(d)) * edge_term(abs_ck, da));
          }
        }
      }
    }
    chunk_sum[ci] = acc.value();
  });

  // pairwise tree reduction
  std::vector<double> level = chunk_sum;
  while (level.size() > 1) {
    std::vector<double> next((level.size() + 1) / 2, 0.0);
    for (size_t i = 0; i + 1 < level.size(); i += 2) next[i / 2] = level[i] + level[i + 1];
    if (level.size() % 2 == 1) next.back() = level.back();
    level = std::move(next);
  }
  const double edge_sum = level.empty() ? 0.0 : level[0];

  const double ax = profile.values[box.index(x)];
  const double a0 = profile.values[box.index(Vec2i{0, 0})];
  return ax - a0 + edge_sum;
}

double warmup_quadratic_constant(const CouplingFamily& family) {
  const double a = family.alpha();
  return (2.0 / 3.0) * 64.0 * family.bound_constant() * std::pow(2.0, a) *
         riemann_zeta(a - 3.0);
}

double warmup_additive_constant(const CouplingFamily& family) {
  const double a = family.alpha();
  return 72.0 * family.bound_constant() * std::pow(2.0, a) *
         riemann_zeta(a - 3.0);
}

double closed_form_bound(double delta, int R, const TrigApprox& approx,
                         const CouplingFamily& family) {
  if (!(delta > 0.0)) throw std::invalid_argument("closed_form_bound: delta <= 0");
  if (R < 2) throw std::invalid_argument("closed_form_bound: R < 2");
  if (approx.K() * delta > 1.0)
    throw std::invalid_argument("closed_form_bound: constraint K*delta <= 1 violated");
  const double q = warmup_quadratic_constant(family) * approx.D_K();
  const double coeff = -delta + delta * delta * q;
  return coeff * std::log(static_cast<double>(R)) +
         warmup_additive_constant(family) * approx.C_K();
}

namespace {

DeltaOpt optimize_rate(double linear, double quad, double delta_max) {
  // maximize rate(delta) = linear*delta - quad*delta^2 on (0, delta_max]
  auto neg_rate = [&](double d) { return -(linear * d - quad * d * d); };
  const double lo = delta_max * 1e-12;
  double d_star = golden_section_minimize(neg_rate, lo, delta_max, delta_max * 1e-9);
  // the boundary can beat the interior bracket when the vertex lies outside
  if (-neg_rate(delta_max) > -neg_rate(d_star)) d_star = delta_max;
  DeltaOpt out;
  out.delta_star = d_star;
  out.exponent_C = linear * d_star - quad * d_star * d_star;
  if (!(out.exponent_C > 0.0))
    throw std::logic_error("optimize_delta: no delta gives a negative log R "
                           "coefficient (internal assertion)");
  return out;
}

}  // namespace

DeltaOpt optimize_delta(const TrigApprox& approx, const CouplingFamily& family,
                        int R, DeltaConstraint constraint) {
  if (R < 2) throw std::invalid_argument("optimize_delta: R < 2");
  if (approx.K() < 1) throw std::invalid_argument("optimize_delta: empty approximation");
  const double q = warmup_quadratic_constant(family) * approx.D_K();
  const double K = static_cast<double>(approx.K());
  const double delta_max = constraint == DeltaConstraint::warmup
                               ? 1.0 / K
                               : (1.0 - 1e-9) / (3.0 * K);
  return optimize_rate(1.0, q, delta_max);
}

double good_set_exponent(double delta, int R, const TrigApprox& approx,
                         const CouplingFamily& family, double C3) {
  if (!(delta > 0.0)) throw std::invalid_argument("good_set_exponent: delta <= 0");
  if (R < 4) throw std::invalid_argument("good_set_exponent: R < 4");
  if (C3 < 0.0) throw std::invalid_argument("good_set_exponent: C3 < 0");
  if (3.0 * approx.K() * delta >= 1.0)
    throw std::invalid_argument("good_set_exponent: constraint 3K*delta < 1 violated");
  const double c_mult = warmup_quadratic_constant(family);
  const double dk = approx.D_K();
  return -delta / 8.0 + c_mult * dk * delta * delta +
         9.0 * dk * delta * delta * C3;
}

DeltaOpt optimize_good_set_delta(const TrigApprox& approx,
                                 const CouplingFamily& family, double C3) {
  if (C3 < 0.0) throw std::invalid_argument("optimize_good_set_delta: C3 < 0");
  const double q = (warmup_quadratic_constant(family) + 9.0 * C3) * approx.D_K();
  const double K = static_cast<double>(approx.K());
  return optimize_rate(1.0 / 8.0, q, (1.0 - 1e-9) / (3.0 * K));
}

bool profile_split_inequality_check(long samples, int k_max,
                                    std::uint64_t seed) {
  auto rng = make_stream(seed, 0);
  for (long s = 0; s < samples; ++s) {
    const double sign = (rng() & 1u) ? 1.0 : -1.0;
    const double a = sign * 2.0 * uniform01(rng);
    const double b = sign * 2.0 * uniform01(rng);
    const double c = sign * 2.0 * uniform01(rng);
    const int k = 1 + static_cast<int>(rng() % k_max);
    const double lhs = std::cosh(k * (a + b + c)) - 1.0;
    const double rhs = (std::cosh(3.0 * k * a) - 1.0) +
                       (std::cosh(3.0 * k * b) - 1.0) +
                       (std::cosh(3.0 * k * c) - 1.0);
    if (lhs > rhs + 1e-12) return false;
  }
  return true;
}

BoundReport bound_report(const TrigApprox& approx, const CouplingFamily& family,
                         int R, DeltaConstraint constraint, double C3,
                         int threads) {
  BoundReport rep;
  const DeltaOpt opt = constraint == DeltaConstraint::warmup
                           ? optimize_delta(approx, family, R, constraint)
                           : optimize_good_set_delta(approx, family, C3);
  rep.delta_star = opt.delta_star;
  rep.exponent_C = opt.exponent_C;
  rep.C_K = approx.C_K();
  rep.D_K = approx.D_K();
  rep.c_add = warmup_additive_constant(family);
  rep.c_mult = warmup_quadratic_constant(family);

  const Box box(2 * R);
  const auto flavor = constraint == DeltaConstraint::warmup
                          ? ProfileFlavor::abar_radial
                          : ProfileFlavor::tilde_truncated;
  const auto profile = build_profile(flavor, rep.delta_star, R, box);
  rep.log_F = evaluate_log_F(profile, family, approx, Vec2i{R, 0}, threads);
  if (constraint == DeltaConstraint::warmup)
    rep.closed_form = closed_form_bound(rep.delta_star, R, approx, family);
  else
    rep.closed_form = good_set_exponent(rep.delta_star, R, approx, family, C3) *
                          std::log(static_cast<double>(R)) +
                      rep.c_add * rep.C_K;
  return rep;
}

}  // namespace spinbound
