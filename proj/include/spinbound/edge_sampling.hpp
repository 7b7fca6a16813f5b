#pragma once

#include <cmath>
#include <iostream>
#include <random>
#include <vector>

#include "spinbound/lattice.hpp"
#include "spinbound/rng.hpp"

namespace spinbound::detail {

// Number of Bernoulli(p) slots to jump to reach the next open one (>= 1).
inline long geometric_jump(std::mt19937_64& rng, double log1m_p) {
  const double u = 1.0 - uniform01(rng);  // in (0, 1]
  return 1 + static_cast<long>(std::floor(std::log(u) / log1m_p));
}

struct DirectionClasses {
  std::vector<Vec2i> half;               // dy > 0, or dy == 0 and dx > 0
  std::vector<std::vector<Vec2i>> ring;  // ring[d]: the 8d directions at distance d
  explicit DirectionClasses(int cutoff) : ring(cutoff + 1) {
    for (int dy = -cutoff; dy <= cutoff; ++dy)
      for (int dx = -cutoff; dx <= cutoff; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Vec2i d{dx, dy};
        ring[norm_inf(d)].push_back(d);
        if (dy > 0 || (dy == 0 && dx > 0)) half.push_back(d);
      }
  }
};

// Opens each in-box pair within the cutoff independently with
// p = min(1, rho * J). Enumerates direction class by direction class with
// geometric skipping: cost O(#open + #directions) instead of O(V * ball).
template <typename Fn>
void for_each_open_edge(const Box& box, const CouplingFamily& family,
                        double rho, std::mt19937_64& rng, Fn&& fn) {
  static thread_local int warned_for = -1;
  const long V = box.vertex_count();
  const int cutoff = family.cutoff_radius();
  double max_p = 0.0;
  for (int dy = 0; dy <= cutoff; ++dy)
    for (int dx = -cutoff; dx <= cutoff; ++dx) {
      if (dy == 0 && dx <= 0) continue;
      const Vec2i d{dx, dy};
      const double p_raw = rho * family.coupling_at(norm_inf(d));
      max_p = std::max(max_p, p_raw);
      const double p = std::min(1.0, p_raw);
      if (p <= 0.0) continue;
      if (p >= 1.0) {
        for (long idx = 0; idx < V; ++idx) {
          const Vec2i u = box.vertex(static_cast<int>(idx));
          const Vec2i v = u + d;
          if (box.contains(v)) fn(static_cast<int>(idx), box.index(v));
        }
        continue;
      }
      const double log1m_p = std::log1p(-p);
      long idx = -1;
      while (true) {
        idx += geometric_jump(rng, log1m_p);
        if (idx >= V) break;
        const Vec2i u = box.vertex(static_cast<int>(idx));
        const Vec2i v = u + d;
        if (box.contains(v)) fn(static_cast<int>(idx), box.index(v));
      }
    }
  if (max_p > 1.0 && warned_for != box.half_width()) {
    warned_for = box.half_width();
    std::cerr << "spinbound: warning: rho * max J = " << max_p
              << " > 1, edge probabilities clipped\n";
  }
}

}  // namespace spinbound::detail
