#pragma once

#include <cstdint>
#include <memory>
#include <tuple>
#include <vector>

#include "spinbound/lattice.hpp"
#include "spinbound/stats.hpp"

namespace spinbound {

// Resistor network with conductances J_uv (resistance 1/J_uv). Shorted pairs
// have zero resistance: their endpoints are identified into node classes and
// parallel conductances accumulate. Value semantics; the underlying
// conductance structure is shared between the shorted variants.
class ResistorNetwork {
 public:
  // Every in-box pair within the family cutoff gets conductance J_uv.
  static ResistorNetwork from_box(const Box& box, const CouplingFamily& family);
  // Explicit small networks (tests, series/parallel oracles).
  static ResistorNetwork from_edges(
      int node_count, std::vector<std::tuple<int, int, double>> edges);

  int node_count() const;
  int class_count() const { return n_classes_; }
  int class_of(int node) const { return node_class_[node]; }
  long shorted_pair_count() const { return static_cast<long>(shorted_.size()); }
  const std::vector<std::pair<int, int>>& shorted_pairs() const { return shorted_; }
  bool is_box() const { return box_ != nullptr; }
  const Box& box() const;

  // Class-level Laplacian-vector product, y = L g (g indexed by class).
  void apply_laplacian(const std::vector<double>& g, std::vector<double>& y) const;
  // Sum of node degrees per class (Jacobi scale; upper bound of diag L).
  std::vector<double> class_degree_sum() const;
  // Accumulated conductance per unordered class pair (parallel law applied).
  std::vector<std::tuple<int, int, double>> class_edges() const;

  friend ResistorNetwork apply_shorts(const ResistorNetwork& network,
                                      double epsilon, std::uint64_t seed);
  friend ResistorNetwork apply_short_pair(const ResistorNetwork& network,
                                          int u, int v);

 private:
  struct BoxStructure;
  struct EdgeStructure;
  std::shared_ptr<const BoxStructure> box_;
  std::shared_ptr<const EdgeStructure> edges_;
  std::vector<int> node_class_;  // dense ids 0..n_classes_-1
  int n_classes_ = 0;
  std::vector<std::pair<int, int>> shorted_;

  void rebuild_classes();
};

// Each pair is shorted independently with probability min(1, epsilon * J_uv);
// shorted endpoints are merged. Deterministic given the seed.
ResistorNetwork apply_shorts(const ResistorNetwork& network, double epsilon,
                             std::uint64_t seed);
ResistorNetwork apply_short_pair(const ResistorNetwork& network, int u, int v);

struct PotentialSolution {
  std::vector<double> g;   // per class; g[class(a)] = 1, g[class(b)] = 0
  double energy = 0.0;     // dissipated energy at the solution
  double residual = 0.0;   // relative residual norm
  int iterations = 0;
};

struct ResistanceResult {
  double resistance = 0.0;
  PotentialSolution solution;
};

// Minimises the dissipated energy over potentials with g(a)=1, g(b)=0 by
// Jacobi-preconditioned conjugate gradient on the class Laplacian; returns
// R = 1/E_eff. Iteration cap 50*sqrt(class count). Returns 0 immediately if
// a and b share a class. node_guess (per node) warm-starts the solve.
ResistanceResult effective_resistance(
    const ResistorNetwork& network, int a, int b, double tol = 1e-8,
    const std::vector<double>* node_guess = nullptr);

// (1/2) sum_{u,v} J_uv (g(u) - g(v))^2, i.e. each unoriented pair once.
double dissipated_energy(const ResistorNetwork& network,
                         const std::vector<double>& g_class);

// Test potential from the truncated harmonic profile, taken at the furthest
// member of each class (constant on shorted clusters), normalised to 1 at the
// origin class and 0 on L_R and beyond. Box networks only.
std::vector<double> radial_test_potential(const ResistorNetwork& network, int R);

struct TheoremPoint {
  int x_norm = 0;
  long replicas = 0;
  long ge_threshold = 0;   // # replicas with R(0,x) >= c_tilde log x
  long solver_failures = 0;
  double p_ge = 0.0;
  Interval p_ci;
  double r_mean = 0.0;
  Interval r_mean_ci;      // normal-approximation CI of the mean
  double threshold = 0.0;
};

// Monte-Carlo over shorts at per-x boxes M = 4 * ||x||; c_tilde <= 0 means
// "calibrate to half the deterministic slope of R vs log x".
std::vector<TheoremPoint> theorem2_experiment(
    const CouplingFamily& family, double epsilon,
    const std::vector<int>& x_norms, int replicas, double c_tilde,
    std::uint64_t seed, double tol = 1e-6, int threads = 1);

// Slope of the no-short fit R(0,x) ~ a + s log x over the given norms.
double deterministic_slope(const CouplingFamily& family,
                           const std::vector<int>& x_norms, double tol = 1e-8,
                           int threads = 1);

}  // namespace spinbound
