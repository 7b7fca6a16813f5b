#include "spinbound/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <stdexcept>

#include "spinbound/edge_sampling.hpp"
#include "spinbound/parallel.hpp"
#include "spinbound/rng.hpp"
#include "spinbound/series.hpp"

namespace spinbound {

PercConfig sample(const Box& box, const CouplingFamily& family, double rho,
                  std::uint64_t seed) {
  if (!(rho >= 0.0)) throw std::invalid_argument("sample: rho must be >= 0");
  PercConfig cfg{box, rho, seed, {},
                 UnionFind(static_cast<int>(box.vertex_count()))};
  auto rng = make_stream(seed, 0);
  detail::for_each_open_edge(box, family, rho, rng, [&](int ui, int vi) {
    cfg.open_edges.emplace_back(std::min(ui, vi), std::max(ui, vi));
    cfg.components.unite(ui, vi);
  });
  return cfg;
}

PercConfig thin(const PercConfig& config, double keep_prob,
                std::uint64_t seed) {
  if (!(keep_prob >= 0.0 && keep_prob <= 1.0))
    throw std::invalid_argument("thin: keep_prob must be in [0,1]");
  PercConfig out{config.box, config.rho * keep_prob, seed, {},
                 UnionFind(static_cast<int>(config.box.vertex_count()))};
  auto rng = make_stream(seed, 0);
  for (const auto& e : config.open_edges) {
    if (uniform01(rng) < keep_prob) {
      out.open_edges.push_back(e);
      out.components.unite(e.first, e.second);
    }
  }
  return out;
}

ClusterStats cluster_stats(const PercConfig& config) {
  const Box& box = config.box;
  const int V = static_cast<int>(box.vertex_count());
  ClusterStats st;
  st.n.assign(V, 0);
  st.m.assign(V, 0);
  st.r.assign(V, 0);
  std::vector<int> count(V, 0), maxnorm(V, 0);
  for (int idx = 0; idx < V; ++idx) {
    const int root = config.components.find(idx);
    count[root] += 1;
    maxnorm[root] = std::max(maxnorm[root], norm_inf(box.vertex(idx)));
  }
  for (int idx = 0; idx < V; ++idx) {
    const int root = config.components.find(idx);
    st.n[idx] = count[root];
    st.m[idx] = maxnorm[root];
    st.r[idx] = st.m[idx] - norm_inf(box.vertex(idx));
  }
  return st;
}

GoodConfigReport classify_good(const PercConfig& config, int R, double C3) {
  const Box& box = config.box;
  const int M = box.half_width();
  const int r0 = annulus_inner_radius(R);
  if (R > M || 2 * r0 >= M)
    throw std::invalid_argument("classify_good: box too small for R");
  if (C3 < 0.0) throw std::invalid_argument("classify_good: C3 < 0");

  const ClusterStats st = cluster_stats(config);
  GoodConfigReport rep;
  KahanSum c3sum;
  const long V = box.vertex_count();
  for (long idx = 0; idx < V; ++idx) {
    const int norm = norm_inf(box.vertex(static_cast<int>(idx)));
    if (norm <= r0 && st.m[idx] > 2 * r0) rep.cond1 = false;
    if (norm > r0 && norm <= R) {
      if (st.m[idx] > 2 * norm) rep.cond2 = false;
      const double ratio = static_cast<double>(st.r[idx]) / norm;
      c3sum.add(ratio * ratio);
    }
  }
  rep.cond3_sum = c3sum.value();
  rep.cond3 = rep.cond3_sum <= C3 * std::log(static_cast<double>(R));
  rep.is_good = rep.cond1 && rep.cond2 && rep.cond3;
  return rep;
}

double chernoff_bound(double mu, double eps) {
  if (!(mu > 0.0)) throw std::invalid_argument("chernoff_bound: mu <= 0");
  if (eps < 0.0) throw std::invalid_argument("chernoff_bound: eps < 0");
  return std::exp(-((1.0 + eps) * std::log1p(eps) - eps) * mu);
}

std::pair<double, double> convolution_bound_check(long k, double alpha) {
  if (k < 2) throw std::invalid_argument("convolution_bound_check: k >= 2");
  if (!(alpha > 1.0))
    throw std::invalid_argument("convolution_bound_check: alpha > 1");
  KahanSum lhs;
  for (long l = 1; l < k; ++l)
    lhs.add(std::pow(static_cast<double>(k - l), -alpha) *
            std::pow(static_cast<double>(l), -alpha));
  const double rhs = std::pow(2.0, alpha + 1.0) * riemann_zeta(alpha) *
                     std::pow(static_cast<double>(k), -alpha);
  return {lhs.value(), rhs};
}

bool convolution_bound_sweep(long k_max, double alpha) {
  std::vector<double> powtab(k_max + 1, 0.0);
  for (long i = 1; i <= k_max; ++i)
    powtab[i] = std::pow(static_cast<double>(i), -alpha);
  const double c = std::pow(2.0, alpha + 1.0) * riemann_zeta(alpha);
  for (long k = 2; k <= k_max; ++k) {
    KahanSum lhs;
    for (long l = 1; l < k; ++l) lhs.add(powtab[k - l] * powtab[l]);
    if (lhs.value() > c * powtab[k]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Lazy cluster growth. Every pair incident to the cluster is decided exactly
// once (at the expansion of whichever endpoint is popped first); later draws
// on the same pair are unused randomness and get discarded. Open edges,
// including cycle edges, are recorded when requested.
// ---------------------------------------------------------------------------

namespace {

class LazyClusterGrower {
 public:
  LazyClusterGrower(const Box& box, const CouplingFamily& family, double rho)
      : box_(box),
        dirs_(family.cutoff_radius()),
        visit_epoch_(box.vertex_count(), 0),
        popped_epoch_(box.vertex_count(), 0),
        round_(0) {
    const int cutoff = family.cutoff_radius();
    log1m_p_.assign(cutoff + 1, 0.0);
    p_.assign(cutoff + 1, 0.0);
    for (int d = 1; d <= cutoff; ++d) {
      p_[d] = std::min(1.0, rho * family.coupling_at(d));
      log1m_p_[d] = p_[d] < 1.0 ? std::log1p(-p_[d]) : 0.0;
    }
  }

  // Grows the cluster of x in a fresh configuration; returns vertex indices.
  // When `edges` is non-null it receives every open pair touching the cluster.
  const std::vector<int>& grow(int x_idx, std::mt19937_64& rng,
                               std::vector<std::pair<int, int>>* edges) {
    ++round_;
    cluster_.clear();
    if (edges) edges->clear();
    visit_epoch_[x_idx] = round_;
    cluster_.push_back(x_idx);
    for (size_t head = 0; head < cluster_.size(); ++head) {
      const int u_idx = cluster_[head];
      popped_epoch_[u_idx] = round_;
      const Vec2i u = box_.vertex(u_idx);
      for (int d = 1; d < static_cast<int>(dirs_.ring.size()); ++d) {
        if (p_[d] <= 0.0) continue;
        const auto& ring = dirs_.ring[d];
        const long n_slots = static_cast<long>(ring.size());
        if (p_[d] >= 1.0) {
          for (long s = 0; s < n_slots; ++s) take(u, u_idx, ring[s], edges);
          continue;
        }
        long idx = -1;
        while (true) {
          idx += detail::geometric_jump(rng, log1m_p_[d]);
          if (idx >= n_slots) break;
          take(u, u_idx, ring[idx], edges);
        }
      }
    }
    return cluster_;
  }

 private:
  void take(Vec2i u, int u_idx, Vec2i d,
            std::vector<std::pair<int, int>>* edges) {
    const Vec2i w = u + d;
    if (!box_.contains(w)) return;
    const int w_idx = box_.index(w);
    if (visit_epoch_[w_idx] == round_) {
      // w already in the cluster. If w was popped, this pair was decided at
      // w's expansion and the draw is discarded; otherwise this is the first
      // draw on the pair and it came up open (a cycle edge).
      if (popped_epoch_[w_idx] != round_ && edges)
        edges->emplace_back(u_idx, w_idx);
      return;
    }
    if (edges) edges->emplace_back(u_idx, w_idx);
    visit_epoch_[w_idx] = round_;
    cluster_.push_back(w_idx);
  }

  const Box& box_;
  detail::DirectionClasses dirs_;
  std::vector<double> p_, log1m_p_;
  std::vector<std::uint32_t> visit_epoch_, popped_epoch_;
  std::uint32_t round_;
  std::vector<int> cluster_;
};

}  // namespace

OriginTailCurve measure_origin_tails(const Box& box,
                                     const CouplingFamily& family, double rho,
                                     long replicas, int k_max_n, int k_max_r,
                                     std::uint64_t seed, int threads) {
  if (replicas < 1)
    throw std::invalid_argument("measure_origin_tails: replicas >= 1");
  OriginTailCurve out;
  out.replicas = replicas;
  out.n_gt.assign(k_max_n + 1, 0);
  out.r_ge.assign(k_max_r + 1, 0);
  out.r_values.assign(replicas, 0);
  std::vector<int> n_values(replicas, 0);

  const int origin = box.index(Vec2i{0, 0});
  parallel_for(threads, threads, [&](long t) {
    LazyClusterGrower grower(box, family, rho);
    for (long rep = t; rep < replicas; rep += threads) {
      auto rng = make_stream(seed, static_cast<std::uint64_t>(rep));
      const auto& cluster = grower.grow(origin, rng, nullptr);
      int m = 0;
      for (int idx : cluster) m = std::max(m, norm_inf(box.vertex(idx)));
      n_values[rep] = static_cast<int>(cluster.size());
      out.r_values[rep] = m;  // r_A(0) = m_A(0) - 0
    }
  });
  for (long rep = 0; rep < replicas; ++rep) {
    for (int k = 0; k <= k_max_n; ++k)
      if (n_values[rep] > k) ++out.n_gt[k];
    for (int k = 0; k <= k_max_r; ++k)
      if (out.r_values[rep] >= k) ++out.r_ge[k];
  }
  return out;
}

double origin_isolation_complement(const Box& box,
                                   const CouplingFamily& family, double rho) {
  if (family.cutoff_radius() > box.half_width())
    throw std::invalid_argument("origin_isolation_complement: cutoff > M");
  double log_closed = 0.0;
  for (int d = 1; d <= family.cutoff_radius(); ++d) {
    const double p = std::min(1.0, rho * family.coupling_at(d));
    if (p >= 1.0) return 1.0;
    log_closed += 8.0 * d * std::log1p(-p);
  }
  return 1.0 - std::exp(log_closed);
}

PointTailCurve measure_point_tail_m(const Box& box,
                                    const CouplingFamily& family, double rho,
                                    Vec2i x, int k_lo, int k_hi, long replicas,
                                    std::uint64_t seed, int threads) {
  if (k_lo <= norm_inf(x))
    throw std::domain_error("measure_point_tail_m: k must exceed ||x||");
  if (k_hi < k_lo)
    throw std::invalid_argument("measure_point_tail_m: bad k range");
  PointTailCurve out;
  out.replicas = replicas;
  out.k_lo = k_lo;
  out.m_eq.assign(k_hi - k_lo + 1, 0);
  std::vector<int> m_values(replicas, 0);
  const int x_idx = box.index(x);
  parallel_for(threads, threads, [&](long t) {
    LazyClusterGrower grower(box, family, rho);
    for (long rep = t; rep < replicas; rep += threads) {
      auto rng = make_stream(seed, static_cast<std::uint64_t>(rep));
      const auto& cluster = grower.grow(x_idx, rng, nullptr);
      int m = 0;
      for (int idx : cluster) m = std::max(m, norm_inf(box.vertex(idx)));
      m_values[rep] = m;
    }
  });
  for (long rep = 0; rep < replicas; ++rep) {
    const int m = m_values[rep];
    if (m >= k_lo && m <= k_hi) ++out.m_eq[m - k_lo];
  }
  return out;
}

double bridge_constant(const CouplingFamily& family, double eps) {
  const double a = family.alpha();
  const double cb = family.bound_constant() * riemann_zeta(a - 1.0) *
                    (2.0 + std::pow(2.0, a));
  const double q = 16.0 * eps * cb;
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return q / (1.0 - q);
}

// ---------------------------------------------------------------------------
// Good/bad experiment. Only vertices touched by open edges can violate the
// conditions; everything is epoch-stamped so replicas reuse one workspace.
// ---------------------------------------------------------------------------

namespace {

struct BadSetWorker {
  Box box;
  SparseUnionFind uf;
  std::vector<std::uint32_t> seen_epoch, ext_epoch;
  std::vector<int> root_min, root_max;
  std::uint32_t round = 0;
  std::vector<int> touched;

  explicit BadSetWorker(const Box& b)
      : box(b),
        uf(static_cast<int>(b.vertex_count())),
        seen_epoch(b.vertex_count(), 0),
        ext_epoch(b.vertex_count(), 0),
        root_min(b.vertex_count(), 0),
        root_max(b.vertex_count(), 0) {}

  GoodConfigReport run(const CouplingFamily& family, double rho, int R,
                       double C3, std::mt19937_64& rng) {
    const int r0 = annulus_inner_radius(R);
    uf.next_round();
    ++round;
    touched.clear();
    detail::for_each_open_edge(box, family, rho, rng, [&](int ui, int vi) {
      uf.unite(ui, vi);
      if (seen_epoch[ui] != round) {
        seen_epoch[ui] = round;
        touched.push_back(ui);
      }
      if (seen_epoch[vi] != round) {
        seen_epoch[vi] = round;
        touched.push_back(vi);
      }
    });
    for (int idx : touched) {
      const int root = uf.find(idx);
      const int norm = norm_inf(box.vertex(idx));
      if (ext_epoch[root] != round) {
        ext_epoch[root] = round;
        root_min[root] = norm;
        root_max[root] = norm;
      } else {
        root_min[root] = std::min(root_min[root], norm);
        root_max[root] = std::max(root_max[root], norm);
      }
    }
    GoodConfigReport rep;
    KahanSum c3sum;
    for (int idx : touched) {
      const int root = uf.find(idx);
      const int norm = norm_inf(box.vertex(idx));
      if (idx == root && root_min[root] <= r0 && root_max[root] > 2 * r0)
        rep.cond1 = false;
      if (norm > r0 && norm <= R) {
        const int m = root_max[root];
        if (m > 2 * norm) rep.cond2 = false;
        const double ratio = static_cast<double>(m - norm) / norm;
        c3sum.add(ratio * ratio);
      }
    }
    rep.cond3_sum = c3sum.value();
    rep.cond3 = rep.cond3_sum <= C3 * std::log(static_cast<double>(R));
    rep.is_good = rep.cond1 && rep.cond2 && rep.cond3;
    return rep;
  }
};

}  // namespace

double calibrate_C3(const CouplingFamily& family, double rho, int R,
                    long replicas, std::uint64_t seed, int threads) {
  const Box box(4 * R);
  std::vector<double> sums(replicas, 0.0);
  parallel_for(threads, threads, [&](long t) {
    BadSetWorker worker(box);
    for (long rep = t; rep < replicas; rep += threads) {
      auto rng = make_stream(seed, static_cast<std::uint64_t>(rep));
      sums[rep] = worker.run(family, rho, R, 0.0, rng).cond3_sum;
    }
  });
  KahanSum total;
  for (double s : sums) total.add(s);
  const double mean = total.value() / static_cast<double>(replicas);
  return 2.0 * mean / std::log(static_cast<double>(R));
}

BadSetPoint measure_bad_probability(const CouplingFamily& family, double rho,
                                    int R, int M, long replicas, double C3,
                                    std::uint64_t seed, int threads) {
  const Box box(M);
  const int r0 = annulus_inner_radius(R);
  if (R > M || 2 * r0 >= M)
    throw std::invalid_argument("measure_bad_probability: box too small");
  BadSetPoint pt;
  pt.R = R;
  pt.replicas = replicas;
  std::vector<std::uint8_t> flags(replicas, 0);
  std::vector<double> sums(replicas, 0.0);
  parallel_for(threads, threads, [&](long t) {
    BadSetWorker worker(box);
    for (long rep = t; rep < replicas; rep += threads) {
      auto rng = make_stream(seed, static_cast<std::uint64_t>(rep));
      const GoodConfigReport r = worker.run(family, rho, R, C3, rng);
      flags[rep] = static_cast<std::uint8_t>(
          (!r.cond1 ? 1 : 0) | (!r.cond2 ? 2 : 0) | (!r.cond3 ? 4 : 0));
      sums[rep] = r.cond3_sum;
    }
  });
  KahanSum total;
  for (long rep = 0; rep < replicas; ++rep) {
    if (flags[rep] & 1) ++pt.cond1_fail;
    if (flags[rep] & 2) ++pt.cond2_fail;
    if (flags[rep] & 4) ++pt.cond3_fail;
    if (flags[rep]) ++pt.bad;
    total.add(sums[rep]);
  }
  pt.mean_cond3_sum = total.value() / static_cast<double>(replicas);
  return pt;
}

// ---------------------------------------------------------------------------
// Domination construction.
// ---------------------------------------------------------------------------

namespace {

// Vertices with norm <= R sorted by nondecreasing norm (ties by index).
std::vector<int> norm_ordered_vertices(const Box& box, int R) {
  std::vector<int> order;
  const long V = box.vertex_count();
  for (long idx = 0; idx < V; ++idx)
    if (norm_inf(box.vertex(static_cast<int>(idx))) <= R)
      order.push_back(static_cast<int>(idx));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return norm_inf(box.vertex(a)) < norm_inf(box.vertex(b));
  });
  return order;
}

struct DominationWorker {
  Box box;
  LazyClusterGrower grower;
  std::vector<std::uint32_t> sealed_epoch;  // per replica
  std::vector<std::uint32_t> graft_epoch;   // per processed vertex
  std::uint32_t round = 0, graft_round = 0;
  std::vector<std::pair<int, int>> copy_edges;
  std::vector<int> graft;

  DominationWorker(const Box& b, const CouplingFamily& family, double rho)
      : box(b),
        grower(b, family, rho),
        sealed_epoch(b.vertex_count(), 0),
        graft_epoch(b.vertex_count(), 0) {}

  bool sealed(int idx) const { return sealed_epoch[idx] == round; }
  bool in_graft(int idx) const { return graft_epoch[idx] == graft_round; }

  // Runs the four-step construction over `order` (nondecreasing norm).
  // lhs = sum over Delta_R of r_A(u)^2/||u||^2 in the assembled config,
  // rhs = sum over Delta_R of N(u) R(u)^2/||u||^2 from the independent copies.
  void run(const std::vector<int>& order, int R, std::mt19937_64& rng,
           double* lhs_out, double* rhs_out, DominationSample* sample) {
    ++round;
    const int r0 = R >= 4 ? annulus_inner_radius(R) : 0;
    KahanSum lhs, rhs;
    for (int x_idx : order) {
      const Vec2i x = box.vertex(x_idx);
      const int xnorm = norm_inf(x);
      const bool in_delta = R >= 4 && xnorm > r0 && xnorm <= R;

      // Step 1: the full cluster of x in its own fresh copy.
      const auto& cluster = grower.grow(x_idx, rng, &copy_edges);
      if (in_delta || sample) {
        int r_out = 0;
        for (int idx : cluster)
          r_out = std::max(r_out, norm_inf(box.vertex(idx) - x));
        if (in_delta)
          rhs.add(static_cast<double>(cluster.size()) * r_out * r_out /
                  (static_cast<double>(xnorm) * xnorm));
        if (sample) {
          sample->N[x_idx] = static_cast<int>(cluster.size());
          sample->R_out[x_idx] = r_out;
        }
      }

      // Steps 3-4: graft the part of the cluster reachable through edges not
      // already fixed, i.e. never crossing a sealed vertex.
      if (sealed(x_idx)) continue;  // b(x) = 0, cluster grafted earlier
      if (sample) sample->b[x_idx] = 1;
      ++graft_round;
      graft.clear();
      graft.push_back(x_idx);
      graft_epoch[x_idx] = graft_round;
      bool grew = true;
      while (grew) {  // cycle edges may connect around sealed regions
        grew = false;
        for (const auto& e : copy_edges) {
          const bool a_in = in_graft(e.first);
          const bool b_in = in_graft(e.second);
          if (a_in == b_in) continue;
          const int outside = a_in ? e.second : e.first;
          if (sealed(outside)) continue;  // edge state already fixed
          graft.push_back(outside);
          graft_epoch[outside] = graft_round;
          grew = true;
        }
      }
      if (sample) {
        for (const auto& e : copy_edges)
          if (in_graft(e.first) && in_graft(e.second)) {
            sample->config.open_edges.emplace_back(
                std::min(e.first, e.second), std::max(e.first, e.second));
            sample->config.components.unite(e.first, e.second);
          }
      }
      int m = 0;
      for (int idx : graft) {
        sealed_epoch[idx] = round;
        m = std::max(m, norm_inf(box.vertex(idx)));
      }
      if (R >= 4) {
        for (int idx : graft) {
          const int norm = norm_inf(box.vertex(idx));
          if (norm > r0 && norm <= R) {
            const double ratio = static_cast<double>(m - norm) / norm;
            lhs.add(ratio * ratio);
          }
        }
      }
    }
    if (lhs_out) *lhs_out = lhs.value();
    if (rhs_out) *rhs_out = rhs.value();
  }
};

}  // namespace

DominationSample domination_sample(const Box& box,
                                   const CouplingFamily& family, double rho,
                                   std::uint64_t seed, int R) {
  const int V = static_cast<int>(box.vertex_count());
  DominationSample out{PercConfig{box, rho, seed, {}, UnionFind(V)},
                       std::vector<int>(V, 0), std::vector<int>(V, 0),
                       std::vector<std::uint8_t>(V, 0)};
  const int Reff = R < 0 ? box.half_width() : R;
  DominationWorker worker(box, family, rho);
  const auto order = norm_ordered_vertices(box, Reff);
  auto rng = make_stream(seed, 0);
  worker.run(order, Reff, rng, nullptr, nullptr, &out);
  return out;
}

DominationCheck domination_check(const Box& box, const CouplingFamily& family,
                                 double rho, int R, long samples,
                                 std::uint64_t seed, int threads) {
  if (R < 4) throw std::invalid_argument("domination_check: R >= 4 required");
  DominationCheck out;
  out.samples = samples;
  std::vector<double> lhs(samples, 0.0), rhs(samples, 0.0);
  const auto order = norm_ordered_vertices(box, R);
  parallel_for(threads, threads, [&](long t) {
    DominationWorker worker(box, family, rho);
    for (long rep = t; rep < samples; rep += threads) {
      auto rng = make_stream(seed, static_cast<std::uint64_t>(rep));
      worker.run(order, R, rng, &lhs[rep], &rhs[rep], nullptr);
    }
  });
  KahanSum l, r;
  for (long rep = 0; rep < samples; ++rep) {
    l.add(lhs[rep]);
    r.add(rhs[rep]);
    if (lhs[rep] > rhs[rep] + 1e-12) ++out.violations;
  }
  out.mean_lhs = l.value() / static_cast<double>(samples);
  out.mean_rhs = r.value() / static_cast<double>(samples);
  return out;
}

namespace {

// Sorted cluster sizes of a configuration given its open edges.
std::vector<int> partition_key(const Box& box,
                               const std::vector<std::pair<int, int>>& edges) {
  const int V = static_cast<int>(box.vertex_count());
  UnionFind uf(V);
  for (const auto& e : edges) uf.unite(e.first, e.second);
  std::vector<int> count(V, 0);
  for (int i = 0; i < V; ++i) ++count[uf.find(i)];
  std::vector<int> sizes;
  for (int i = 0; i < V; ++i)
    if (count[i] > 0) sizes.push_back(count[i]);
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

}  // namespace

double domination_tv_distance(const Box& box, const CouplingFamily& family,
                              double rho, long samples, std::uint64_t seed,
                              int threads) {
  using Key = std::vector<int>;
  std::vector<std::map<Key, long>> direct_counts(threads), asm_counts(threads);
  const auto order = norm_ordered_vertices(box, box.half_width());
  const int V = static_cast<int>(box.vertex_count());
  parallel_for(threads, threads, [&](long t) {
    DominationWorker worker(box, family, rho);
    std::vector<std::pair<int, int>> edges;
    for (long rep = t; rep < samples; rep += threads) {
      {
        auto rng = make_stream(seed, 2 * rep);
        edges.clear();
        detail::for_each_open_edge(box, family, rho, rng,
                           [&](int ui, int vi) { edges.emplace_back(ui, vi); });
        ++direct_counts[t][partition_key(box, edges)];
      }
      {
        auto rng = make_stream(seed, 2 * rep + 1);
        DominationSample s{PercConfig{box, rho, seed, {}, UnionFind(V)},
                           std::vector<int>(V, 0), std::vector<int>(V, 0),
                           std::vector<std::uint8_t>(V, 0)};
        worker.run(order, box.half_width(), rng, nullptr, nullptr, &s);
        ++asm_counts[t][partition_key(box, s.config.open_edges)];
      }
    }
  });
  std::map<Key, long> direct, assembled;
  for (int t = 0; t < threads; ++t) {
    for (const auto& kv : direct_counts[t]) direct[kv.first] += kv.second;
    for (const auto& kv : asm_counts[t]) assembled[kv.first] += kv.second;
  }
  std::map<Key, double> diff;
  for (const auto& kv : direct)
    diff[kv.first] += static_cast<double>(kv.second) / samples;
  for (const auto& kv : assembled)
    diff[kv.first] -= static_cast<double>(kv.second) / samples;
  double tv = 0.0;
  for (const auto& kv : diff) tv += std::abs(kv.second);
  return 0.5 * tv;
}

}  // namespace spinbound
