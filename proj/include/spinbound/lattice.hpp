#pragma once

#include <cmath>
#include <cstdlib>
#include <vector>

namespace spinbound {

struct Vec2i {
  int x = 0;
  int y = 0;
  friend bool operator==(Vec2i a, Vec2i b) { return a.x == b.x && a.y == b.y; }
  friend Vec2i operator+(Vec2i a, Vec2i b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2i operator-(Vec2i a, Vec2i b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2i operator-(Vec2i a) { return {-a.x, -a.y}; }
};

inline int norm_inf(Vec2i v) { return std::max(std::abs(v.x), std::abs(v.y)); }
inline int norm_one(Vec2i v) { return std::abs(v.x) + std::abs(v.y); }

// The box Lambda_M = {-M..M}^2, with a row-major vertex indexing.
class Box {
 public:
  explicit Box(int half_width);
  int half_width() const { return m_; }
  int side() const { return 2 * m_ + 1; }
  long vertex_count() const { return static_cast<long>(side()) * side(); }
  bool contains(Vec2i p) const {
    return std::abs(p.x) <= m_ && std::abs(p.y) <= m_;
  }
  int index(Vec2i p) const { return (p.y + m_) * side() + (p.x + m_); }
  Vec2i vertex(int idx) const {
    return {idx % side() - m_, idx / side() - m_};
  }

 private:
  int m_;
};

// The layer L_i = { z : ||z||_inf = i }; |L_i| = 8i for i >= 1, L_0 = {0}.
std::vector<Vec2i> lattice_layer(int i);

// ceil(sqrt(R)), the inner radius used for Delta_R.
int annulus_inner_radius(int R);

// Delta_R = Lambda_R \ Lambda_{ceil(sqrt R)}. Throws for R < 4 (degenerate).
std::vector<Vec2i> delta_annulus(int R);

// Translation-invariant couplings J_x = c * ||x||_inf^{-alpha} for
// 0 < ||x||_inf <= cutoff, zero beyond. Saturates assumption
// J_x <= J ||x||^-alpha with J = c.
class CouplingFamily {
 public:
  // c given explicitly ("raw" mode).
  static CouplingFamily raw(double alpha, double amplitude, int cutoff_radius);
  // c chosen so the untruncated law has total mass 1: c = 1/(8 zeta(alpha-1)).
  static CouplingFamily normalized(double alpha, int cutoff_radius);

  double alpha() const { return alpha_; }
  double amplitude() const { return amplitude_; }
  int cutoff_radius() const { return cutoff_; }
  bool normalized_mode() const { return normalized_; }
  // The constant J of the decay assumption (equals the amplitude here).
  double bound_constant() const { return amplitude_; }
  // Analytic mass the untruncated law carries beyond the cutoff.
  double tail_bound() const { return tail_bound_; }

  double coupling(Vec2i x) const;      // throws domain_error at x = 0
  double coupling_at(int dist) const {  // J at ||x||_inf = dist, 0 out of range
    return (dist >= 1 && dist <= cutoff_) ? j_table_[dist] : 0.0;
  }
  // sum of J_x over 0 < ||x||_inf <= cutoff.
  double total_mass_within_cutoff() const;
  // sum_{u in L_i} sum_{v in L_{i+j}} J_{u,v} by direct enumeration.
  double layer_pair_mass(int i, int j) const;

 private:
  CouplingFamily(double alpha, double amplitude, int cutoff, bool normalized);
  double alpha_;
  double amplitude_;
  int cutoff_;
  bool normalized_;
  double tail_bound_;
  std::vector<double> j_table_;  // j_table_[d] = c * d^-alpha, d = 1..cutoff
};

}  // namespace spinbound
