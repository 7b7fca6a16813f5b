#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spinbound/interaction.hpp"
#include "spinbound/lattice.hpp"

namespace spinbound {

enum class ProfileFlavor { abar_radial, tilde_truncated, cluster_constant };

// Complex-rotation magnitudes a_z on a box. abar_radial is the truncated
// harmonic profile abar_i = -delta * H_i, radially symmetric and vanishing
// outside Lambda_R. tilde_truncated additionally vanishes inside
// Lambda_{2 ceil(sqrt R)}. cluster_constant takes the tilde value at the
// furthest point of each percolation cluster, so it is constant on clusters.
struct RotationProfile {
  Box box;
  ProfileFlavor flavor;
  double delta;
  int R;
  std::vector<double> values;  // indexed by box.index

  double at(Vec2i p) const { return box.contains(p) ? values[box.index(p)] : 0.0; }
};

// abar_i = -delta * H_i for i = 0..n.
std::vector<double> abar_table(double delta, int n);
// tilde_i for i = 0..n with threshold t = 2 * ceil(sqrt(R)).
std::vector<double> tilde_table(double delta, int R, int n);

// cluster_m: per-vertex m_A (norm of the furthest connected point), required
// iff flavor == cluster_constant.
RotationProfile build_profile(ProfileFlavor flavor, double delta, int R,
                              const Box& box,
                              const std::vector<int>* cluster_m = nullptr);

// log F(a) = a_x - a_0 + sum_{(u,v)} J_uv sum_k |c_k| (cosh(k(a_v-a_u)) - 1),
// each unoriented edge within the coupling cutoff counted once. Edge terms are
// evaluated in the stable form 2 sinh^2(k da / 2) and accumulated per fixed
// 8-row chunk with a pairwise tree reduction, so the result is bit-stable for
// any worker count. Throws DivergedProfileError if |k da| > 700.
double evaluate_log_F(const RotationProfile& profile,
                      const CouplingFamily& family, const TrigApprox& approx,
                      Vec2i x, int threads = 1);

// Explicit constants of the closed-form chain.
double warmup_quadratic_constant(const CouplingFamily& family);  // (2/3)*64*J*2^a*zeta(a-3)
double warmup_additive_constant(const CouplingFamily& family);   // 72*J*2^a*zeta(a-3)

// (-delta + delta^2 (2/3) D_K 64 J 2^alpha zeta(alpha-3)) log R
//   + 72 C_K J 2^alpha zeta(alpha-3).  Requires K * delta <= 1.
double closed_form_bound(double delta, int R, const TrigApprox& approx,
                         const CouplingFamily& family);

enum class DeltaConstraint { warmup /* K delta <= 1 */, general /* 3 K delta < 1 */ };

struct DeltaOpt {
  double delta_star = 0.0;
  double exponent_C = 0.0;
};

// Golden-section search of the decay rate delta - q delta^2 over the
// admissible interval; exponent_C is guaranteed positive.
DeltaOpt optimize_delta(const TrigApprox& approx, const CouplingFamily& family,
                        int R, DeltaConstraint constraint);

// log R coefficient of the good-set chain:
//   -delta/8 + c_mult D_K delta^2 + 9 D_K delta^2 C3.
// Requires 3 K delta < 1 and C3 >= 0.
double good_set_exponent(double delta, int R, const TrigApprox& approx,
                         const CouplingFamily& family, double C3);

// Best good-set decay C = max_delta -(coefficient) under 3 K delta < 1.
DeltaOpt optimize_good_set_delta(const TrigApprox& approx,
                                 const CouplingFamily& family, double C3);

// Audits cosh(k(a+b+c))-1 <= sum of cosh(3k .)-1 terms on random same-sign
// triples; true iff no violation beyond 1e-12.
bool profile_split_inequality_check(long samples = 100000, int k_max = 8,
                                    std::uint64_t seed = 1);

struct BoundReport {
  double delta_star = 0.0;
  double exponent_C = 0.0;
  double log_F = 0.0;
  double closed_form = 0.0;
  double C_K = 0.0;
  double D_K = 0.0;
  double c_add = 0.0;   // additive constant of the chain
  double c_mult = 0.0;  // quadratic-term constant of the chain
};

// End-to-end evaluation used by the CLI: optimize delta, then evaluate the
// functional on Lambda_M (M = 2R) and the closed form at delta*.
BoundReport bound_report(const TrigApprox& approx, const CouplingFamily& family,
                         int R, DeltaConstraint constraint, double C3,
                         int threads = 1);

}  // namespace spinbound
