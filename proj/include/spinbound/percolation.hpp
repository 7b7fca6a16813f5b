#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "spinbound/lattice.hpp"
#include "spinbound/unionfind.hpp"

namespace spinbound {

// Long-range Bernoulli bond percolation on a box: each in-box pair (u,v)
// within the coupling cutoff is open independently with p = min(1, rho*J_uv).
struct PercConfig {
  Box box;
  double rho = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::pair<int, int>> open_edges;  // (min index, max index)
  UnionFind components;
};

PercConfig sample(const Box& box, const CouplingFamily& family, double rho,
                  std::uint64_t seed);

// Keeps each open edge independently with probability keep_prob. Applied to a
// rho' sample with keep_prob = rho/rho', this realises the monotone coupling
// of the two thresholds.
PercConfig thin(const PercConfig& config, double keep_prob, std::uint64_t seed);

// Per-vertex cluster quantities: n = cluster cardinality, m = norm of the
// furthest connected vertex, r = m - ||u|| (outward radius).
struct ClusterStats {
  std::vector<int> n, m, r;
};
ClusterStats cluster_stats(const PercConfig& config);

struct GoodConfigReport {
  bool cond1 = true;   // no connection Lambda_{r0} <-> outside Lambda_{2 r0}
  bool cond2 = true;   // m_A(u) <= 2||u|| on Delta_R
  bool cond3 = true;   // cond3_sum <= C3 log R
  double cond3_sum = 0.0;
  bool is_good = true;
};
GoodConfigReport classify_good(const PercConfig& config, int R, double C3);

// exp(-((1+eps)log(1+eps) - eps) * mu)
double chernoff_bound(double mu, double eps);

// (lhs, rhs) of sum_{l=1}^{k-1} (k-l)^-a l^-a <= 2^{a+1} zeta(a) / k^a.
std::pair<double, double> convolution_bound_check(long k, double alpha);
// true iff the inequality holds for every k in [2, k_max].
bool convolution_bound_sweep(long k_max, double alpha);

// ---------------------------------------------------------------------------
// Replica drivers. Replica i draws from stream (seed, i), so results are
// reproducible and independent of the worker count.
// ---------------------------------------------------------------------------

struct OriginTailCurve {
  long replicas = 0;
  std::vector<long> n_gt;       // n_gt[k] = #{ n_A(0) > k }, k = 0..k_max_n
  std::vector<long> r_ge;       // r_ge[k] = #{ r_A(0) >= k }, k = 0..k_max_r
  std::vector<int> r_values;    // per-replica r_A(0)
};

// Lazy cluster growth from the origin; law identical to
// cluster_stats(sample(...)) at the origin.
OriginTailCurve measure_origin_tails(const Box& box,
                                     const CouplingFamily& family, double rho,
                                     long replicas, int k_max_n, int k_max_r,
                                     std::uint64_t seed, int threads = 1);

// Exact P(n_A(0) > 1) = 1 - prod over origin-incident edges of (1 - p_e).
double origin_isolation_complement(const Box& box,
                                   const CouplingFamily& family, double rho);

// Empirical law of m_A(x): counts of {m_A(x) = k} for k in [k_lo, k_hi].
struct PointTailCurve {
  long replicas = 0;
  int k_lo = 0;
  std::vector<long> m_eq;  // m_eq[k - k_lo]
};
PointTailCurve measure_point_tail_m(const Box& box,
                                    const CouplingFamily& family, double rho,
                                    Vec2i x, int k_lo, int k_hi, long replicas,
                                    std::uint64_t seed, int threads = 1);

// C1 of the bridge estimate: sum_m (16 eps C_b)^m with
// C_b = J zeta(alpha-1)(2 + 2^alpha); +inf if the series diverges.
double bridge_constant(const CouplingFamily& family, double eps);

struct BadSetPoint {
  int R = 0;
  long replicas = 0;
  long bad = 0, cond1_fail = 0, cond2_fail = 0, cond3_fail = 0;
  double mean_cond3_sum = 0.0;
};

// C3 = 2 * mean(cond3_sum / log R) at the calibration radius (box M = 4R).
double calibrate_C3(const CouplingFamily& family, double rho, int R,
                    long replicas, std::uint64_t seed, int threads = 1);

BadSetPoint measure_bad_probability(const CouplingFamily& family, double rho,
                                    int R, int M, long replicas, double C3,
                                    std::uint64_t seed, int threads = 1);

// ---------------------------------------------------------------------------
// Cluster-by-cluster domination construction: independent copies A^x, vertices
// of Lambda_R processed by nondecreasing norm, exposed edges frozen, clusters
// grafted. The assembled law equals the direct law; pathwise,
//   sum_{u in Delta_R} r_A(u)^2/||u||^2  <=  sum_{u in Delta_R} N(u)R(u)^2/||u||^2.
// ---------------------------------------------------------------------------

struct DominationSample {
  PercConfig config;            // assembled configuration
  std::vector<int> N;           // per-vertex |C_x| in its own copy
  std::vector<int> R_out;       // per-vertex max ||y-x|| over C_x
  std::vector<std::uint8_t> b;  // 1 iff x was not in an earlier cluster
};

// R < 0 means process the whole box.
DominationSample domination_sample(const Box& box, const CouplingFamily& family,
                                   double rho, std::uint64_t seed, int R = -1);

struct DominationCheck {
  long samples = 0;
  long violations = 0;
  double mean_lhs = 0.0;
  double mean_rhs = 0.0;
};
DominationCheck domination_check(const Box& box, const CouplingFamily& family,
                                 double rho, int R, long samples,
                                 std::uint64_t seed, int threads = 1);

// Total-variation distance between the assembled and directly-sampled laws of
// the sorted cluster-size vector ("partition law").
double domination_tv_distance(const Box& box, const CouplingFamily& family,
                              double rho, long samples, std::uint64_t seed,
                              int threads = 1);

}  // namespace spinbound
