#include "spinbound/resistor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "spinbound/bound.hpp"
#include "spinbound/edge_sampling.hpp"
#include "spinbound/errors.hpp"
#include "spinbound/parallel.hpp"
#include "spinbound/rng.hpp"
#include "spinbound/series.hpp"
#include "spinbound/unionfind.hpp"

namespace spinbound {

struct ResistorNetwork::BoxStructure {
  Box box;
  CouplingFamily family;
  std::vector<Vec2i> ball;       // full ball of directions with J > 0
  std::vector<Vec2i> half_ball;  // positive half
  std::vector<double> ball_j, half_j;
  std::vector<double> node_degree;

  BoxStructure(const Box& b, const CouplingFamily& f) : box(b), family(f) {
    const int cutoff = f.cutoff_radius();
    for (int dy = -cutoff; dy <= cutoff; ++dy)
      for (int dx = -cutoff; dx <= cutoff; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Vec2i d{dx, dy};
        const double j = f.coupling_at(norm_inf(d));
        if (j <= 0.0) continue;
        ball.push_back(d);
        ball_j.push_back(j);
        if (dy > 0 || (dy == 0 && dx > 0)) {
          half_ball.push_back(d);
          half_j.push_back(j);
        }
      }
    node_degree.assign(box.vertex_count(), 0.0);
    const long V = box.vertex_count();
    for (long idx = 0; idx < V; ++idx) {
      const Vec2i u = box.vertex(static_cast<int>(idx));
      double deg = 0.0;
      for (size_t k = 0; k < ball.size(); ++k)
        if (box.contains(u + ball[k])) deg += ball_j[k];
      node_degree[idx] = deg;
    }
  }
};

struct ResistorNetwork::EdgeStructure {
  int n = 0;
  std::vector<std::tuple<int, int, double>> edges;
  std::vector<double> node_degree;
};

ResistorNetwork ResistorNetwork::from_box(const Box& box,
                                          const CouplingFamily& family) {
  if (family.cutoff_radius() > 2 * box.half_width())
    throw std::invalid_argument("ResistorNetwork: cutoff exceeds box diameter");
  ResistorNetwork net;
  net.box_ = std::make_shared<const BoxStructure>(box, family);
  net.rebuild_classes();
  return net;
}

ResistorNetwork ResistorNetwork::from_edges(
    int node_count, std::vector<std::tuple<int, int, double>> edges) {
  if (node_count < 2)
    throw std::invalid_argument("ResistorNetwork: need at least 2 nodes");
  auto st = std::make_shared<EdgeStructure>();
  st->n = node_count;
  st->node_degree.assign(node_count, 0.0);
  for (const auto& [u, v, j] : edges) {
    if (u < 0 || v < 0 || u >= node_count || v >= node_count || u == v)
      throw std::invalid_argument("ResistorNetwork: bad edge");
    if (!(j > 0.0))
      throw std::invalid_argument("ResistorNetwork: conductance must be > 0");
    st->node_degree[u] += j;
    st->node_degree[v] += j;
  }
  st->edges = std::move(edges);
  ResistorNetwork net;
  net.edges_ = std::move(st);
  net.rebuild_classes();
  return net;
}

int ResistorNetwork::node_count() const {
  return box_ ? static_cast<int>(box_->box.vertex_count()) : edges_->n;
}

const Box& ResistorNetwork::box() const {
  if (!box_) throw std::logic_error("ResistorNetwork: not a box network");
  return box_->box;
}

void ResistorNetwork::rebuild_classes() {
  const int n = node_count();
  UnionFind uf(n);
  for (const auto& [u, v] : shorted_) uf.unite(u, v);
  node_class_.assign(n, -1);
  n_classes_ = 0;
  for (int i = 0; i < n; ++i) {
    const int root = uf.find(i);
    if (node_class_[root] < 0) node_class_[root] = n_classes_++;
    node_class_[i] = node_class_[root];
  }
}

ResistorNetwork apply_shorts(const ResistorNetwork& network, double epsilon,
                             std::uint64_t seed) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("apply_shorts: epsilon < 0");
  ResistorNetwork out = network;
  auto rng = make_stream(seed, 0);
  if (network.box_) {
    detail::for_each_open_edge(network.box_->box, network.box_->family, epsilon,
                               rng, [&](int u, int v) {
                                 out.shorted_.emplace_back(std::min(u, v),
                                                           std::max(u, v));
                               });
  } else {
    for (const auto& [u, v, j] : network.edges_->edges)
      if (uniform01(rng) < std::min(1.0, epsilon * j))
        out.shorted_.emplace_back(std::min(u, v), std::max(u, v));
  }
  out.rebuild_classes();
  return out;
}

ResistorNetwork apply_short_pair(const ResistorNetwork& network, int u, int v) {
  ResistorNetwork out = network;
  out.shorted_.emplace_back(std::min(u, v), std::max(u, v));
  out.rebuild_classes();
  return out;
}

void ResistorNetwork::apply_laplacian(const std::vector<double>& g,
                                      std::vector<double>& y) const {
  y.assign(n_classes_, 0.0);
  if (box_) {
    // Node-space slab convolution: gather g through the class map, run one
    // contiguous pass per direction (no bounds checks inside the slab), then
    // scatter-add back onto classes. Exactly S^T L S g.
    const Box& box = box_->box;
    const long V = box.vertex_count();
    const int M = box.half_width();
    const int S = box.side();
    static thread_local std::vector<double> gn, yn;
    gn.resize(V);
    yn.resize(V);
    for (long i = 0; i < V; ++i) gn[i] = g[node_class_[i]];
    for (long i = 0; i < V; ++i) yn[i] = box_->node_degree[i] * gn[i];
    // row-major over outputs with all directions fused, so the handful of
    // source rows stays cache-resident
    const auto& ball = box_->ball;
    const auto& ball_j = box_->ball_j;
    const size_t nb = ball.size();
    for (int yy = -M; yy <= M; ++yy) {
      double* dst = yn.data() + static_cast<long>(yy + M) * S + M;
      for (size_t k = 0; k < nb; ++k) {
        const int dy = ball[k].y;
        if (yy + dy < -M || yy + dy > M) continue;
        const int dx = ball[k].x;
        const double j = ball_j[k];
        const double* src =
            gn.data() + static_cast<long>(yy + dy + M) * S + M + dx;
        const int x_lo = std::max(-M, -M - dx), x_hi = std::min(M, M - dx);
        for (int xx = x_lo; xx <= x_hi; ++xx) dst[xx] -= j * src[xx];
      }
    }
    for (long i = 0; i < V; ++i) y[node_class_[i]] += yn[i];
  } else {
    for (const auto& [u, v, j] : edges_->edges) {
      const int cu = node_class_[u], cv = node_class_[v];
      const double d = j * (g[cu] - g[cv]);
      y[cu] += d;
      y[cv] -= d;
    }
  }
}

std::vector<double> ResistorNetwork::class_degree_sum() const {
  std::vector<double> deg(n_classes_, 0.0);
  const auto& nd = box_ ? box_->node_degree : edges_->node_degree;
  for (int i = 0; i < node_count(); ++i) deg[node_class_[i]] += nd[i];
  return deg;
}

std::vector<std::tuple<int, int, double>> ResistorNetwork::class_edges() const {
  std::map<std::pair<int, int>, double> acc;
  auto add = [&](int u, int v, double j) {
    const int cu = node_class_[u], cv = node_class_[v];
    if (cu == cv) return;
    acc[{std::min(cu, cv), std::max(cu, cv)}] += j;
  };
  if (box_) {
    const Box& box = box_->box;
    const long V = box.vertex_count();
    for (long idx = 0; idx < V; ++idx) {
      const Vec2i u = box.vertex(static_cast<int>(idx));
      for (size_t k = 0; k < box_->half_ball.size(); ++k) {
        const Vec2i v = u + box_->half_ball[k];
        if (box.contains(v)) add(static_cast<int>(idx), box.index(v),
                                 box_->half_j[k]);
      }
    }
  } else {
    for (const auto& [u, v, j] : edges_->edges) add(u, v, j);
  }
  std::vector<std::tuple<int, int, double>> out;
  out.reserve(acc.size());
  for (const auto& kv : acc)
    out.emplace_back(kv.first.first, kv.first.second, kv.second);
  return out;
}

ResistanceResult effective_resistance(const ResistorNetwork& network, int a,
                                      int b, double tol,
                                      const std::vector<double>* node_guess) {
  if (a == b) throw std::invalid_argument("effective_resistance: a == b");
  const int C = network.class_count();
  const int ca = network.class_of(a), cb = network.class_of(b);
  ResistanceResult out;
  if (ca == cb) {
    out.resistance = 0.0;
    out.solution.energy = std::numeric_limits<double>::infinity();
    return out;
  }

  // Solve L_ff g_f = -(L e_ca)|_f with g(ca) = 1, g(cb) = 0 fixed.
  std::vector<double> g(C, 0.0), y(C, 0.0);
  g[ca] = 1.0;
  network.apply_laplacian(g, y);

  const auto deg = network.class_degree_sum();
  auto masked = [&](std::vector<double>& v) {
    v[ca] = 0.0;
    v[cb] = 0.0;
  };
  std::vector<double> r(C), z(C), p(C), q(C);
  for (int c = 0; c < C; ++c) r[c] = -y[c];
  masked(r);

  double bnorm = 0.0;
  for (double v : r) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  const double stop = tol * (bnorm > 0 ? bnorm : 1.0);

  std::vector<double> x(C, 0.0);  // free part of the potential
  if (node_guess) {
    if (static_cast<int>(node_guess->size()) != network.node_count())
      throw std::invalid_argument("effective_resistance: bad guess size");
    std::vector<int> members(C, 0);
    for (int i = 0; i < network.node_count(); ++i) {
      x[network.class_of(i)] += (*node_guess)[i];
      ++members[network.class_of(i)];
    }
    for (int c = 0; c < C; ++c) x[c] /= members[c];
    masked(x);
    network.apply_laplacian(x, y);
    masked(y);
    for (int c = 0; c < C; ++c) r[c] -= y[c];
  }

  const int cap =
      50 * static_cast<int>(std::ceil(std::sqrt(static_cast<double>(C)))) + 10;
  double rz = 0.0;
  for (int c = 0; c < C; ++c) {
    z[c] = deg[c] > 0 ? r[c] / deg[c] : r[c];
    rz += r[c] * z[c];
  }
  p = z;
  double rnorm = 0.0;
  for (double v : r) rnorm += v * v;
  rnorm = std::sqrt(rnorm);
  int iter = 0;
  while (rnorm > stop && iter < cap) {
    masked(p);
    network.apply_laplacian(p, q);
    masked(q);
    double pq = 0.0;
    for (int c = 0; c < C; ++c) pq += p[c] * q[c];
    if (pq <= 0.0) break;  // restricted Laplacian is PD on the free set
    const double alpha = rz / pq;
    rnorm = 0.0;
    for (int c = 0; c < C; ++c) {
      x[c] += alpha * p[c];
      r[c] -= alpha * q[c];
      rnorm += r[c] * r[c];
    }
    rnorm = std::sqrt(rnorm);
    double rz_new = 0.0;
    for (int c = 0; c < C; ++c) {
      z[c] = deg[c] > 0 ? r[c] / deg[c] : r[c];
      rz_new += r[c] * z[c];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int c = 0; c < C; ++c) p[c] = z[c] + beta * p[c];
    ++iter;
  }
  if (rnorm > stop) throw SolverError(rnorm / (bnorm > 0 ? bnorm : 1.0), iter);

  for (int c = 0; c < C; ++c) g[c] = x[c];
  g[ca] = 1.0;
  g[cb] = 0.0;
  network.apply_laplacian(g, y);
  // g^T L g equals the paper's (1/2) double-sum of J (grad g)^2, i.e. each
  // unoriented pair counted once.
  double energy = 0.0;
  for (int c = 0; c < C; ++c) energy += g[c] * y[c];

  out.solution.g = g;
  out.solution.energy = energy;
  out.solution.residual = bnorm > 0 ? rnorm / bnorm : 0.0;
  out.solution.iterations = iter;
  out.resistance = 1.0 / energy;
  return out;
}

double dissipated_energy(const ResistorNetwork& network,
                         const std::vector<double>& g) {
  if (static_cast<int>(g.size()) != network.class_count())
    throw std::invalid_argument("dissipated_energy: g size != class count");
  KahanSum acc;
  for (const auto& [cu, cv, j] : network.class_edges()) {
    const double d = g[cu] - g[cv];
    acc.add(j * d * d);
  }
  return acc.value();
}

std::vector<double> radial_test_potential(const ResistorNetwork& network,
                                          int R) {
  const Box& box = network.box();
  if (R < 4 || R > box.half_width())
    throw std::invalid_argument("radial_test_potential: need 4 <= R <= M");
  const auto tilde = tilde_table(1.0, R, 2 * box.half_width());
  if (tilde[R] == 0.0)
    throw std::invalid_argument("radial_test_potential: degenerate profile");
  // value at the furthest member of each class, so it is constant on clusters
  std::vector<int> class_m(network.class_count(), 0);
  for (int i = 0; i < network.node_count(); ++i) {
    const int norm = norm_inf(box.vertex(i));
    class_m[network.class_of(i)] =
        std::max(class_m[network.class_of(i)], norm);
  }
  std::vector<double> g(network.class_count(), 0.0);
  for (int c = 0; c < network.class_count(); ++c)
    g[c] = 1.0 - tilde[class_m[c]] / tilde[R];
  return g;
}

double deterministic_slope(const CouplingFamily& family,
                           const std::vector<int>& x_norms, double tol,
                           int threads) {
  std::vector<double> lx(x_norms.size()), ry(x_norms.size());
  parallel_for(static_cast<long>(x_norms.size()), threads, [&](long i) {
    const int d = x_norms[i];
    const Box box(4 * d);
    const auto net = ResistorNetwork::from_box(box, family);
    const auto res = effective_resistance(net, box.index(Vec2i{0, 0}),
                                          box.index(Vec2i{d, 0}), tol);
    lx[i] = std::log(static_cast<double>(d));
    ry[i] = res.resistance;
  });
  return fit_line(lx, ry).slope;
}

std::vector<TheoremPoint> theorem2_experiment(
    const CouplingFamily& family, double epsilon,
    const std::vector<int>& x_norms, int replicas, double c_tilde,
    std::uint64_t seed, double tol, int threads) {
  if (replicas < 1) throw std::invalid_argument("theorem2_experiment: replicas");

  // One clean solve per x: calibrates c_tilde (half the deterministic slope)
  // and warm-starts every shorted replica at that x.
  std::vector<ResistorNetwork> bases;
  std::vector<std::vector<double>> base_potentials(x_norms.size());
  {
    std::vector<double> lx(x_norms.size()), ry(x_norms.size());
    for (size_t xi = 0; xi < x_norms.size(); ++xi) {
      const int d = x_norms[xi];
      const Box box(4 * d);
      bases.push_back(ResistorNetwork::from_box(box, family));
      const auto res =
          effective_resistance(bases[xi], box.index(Vec2i{0, 0}),
                               box.index(Vec2i{d, 0}), std::min(tol, 1e-8));
      base_potentials[xi] = res.solution.g;  // classes == nodes, no shorts
      lx[xi] = std::log(static_cast<double>(d));
      ry[xi] = res.resistance;
    }
    if (c_tilde <= 0.0) c_tilde = 0.5 * fit_line(lx, ry).slope;
  }

  std::vector<TheoremPoint> points;
  for (size_t xi = 0; xi < x_norms.size(); ++xi) {
    const int d = x_norms[xi];
    const ResistorNetwork& base = bases[xi];
    const Box& box = base.box();
    const int a = box.index(Vec2i{0, 0});
    const int b = box.index(Vec2i{d, 0});
    const double threshold = c_tilde * std::log(static_cast<double>(d));

    std::vector<double> r_values(replicas, 0.0);
    std::vector<std::uint8_t> failed(replicas, 0);
    parallel_for(replicas, threads, [&](long rep) {
      const auto net =
          apply_shorts(base, epsilon, seed + 1000003ULL * (xi + 1) + rep);
      try {
        r_values[rep] =
            effective_resistance(net, a, b, tol, &base_potentials[xi])
                .resistance;
      } catch (const SolverError&) {
        failed[rep] = 1;
      }
    });

    TheoremPoint pt;
    pt.x_norm = d;
    pt.replicas = replicas;
    pt.threshold = threshold;
    KahanSum sum, sumsq;
    long n_ok = 0;
    for (int rep = 0; rep < replicas; ++rep) {
      if (failed[rep]) {
        ++pt.solver_failures;
        continue;
      }
      ++n_ok;
      if (r_values[rep] >= threshold) ++pt.ge_threshold;
      sum.add(r_values[rep]);
      sumsq.add(r_values[rep] * r_values[rep]);
    }
    if (n_ok > 1) {
      pt.r_mean = sum.value() / n_ok;
      const double var =
          std::max(0.0, sumsq.value() / n_ok - pt.r_mean * pt.r_mean);
      const double half = 1.96 * std::sqrt(var / n_ok);
      pt.r_mean_ci = {pt.r_mean - half, pt.r_mean + half};
      pt.p_ge = static_cast<double>(pt.ge_threshold) / n_ok;
      pt.p_ci = wilson_interval(pt.ge_threshold, n_ok);
    }
    points.push_back(pt);
  }
  return points;
}

}  // namespace spinbound
