#include "spinbound/lattice.hpp"

#include <cmath>
#include <stdexcept>

#include "spinbound/series.hpp"

namespace spinbound {

Box::Box(int half_width) : m_(half_width) {
  if (half_width < 0) throw std::invalid_argument("Box: negative half width");
}

std::vector<Vec2i> lattice_layer(int i) {
  if (i < 0) throw std::invalid_argument("lattice_layer: negative index");
  if (i == 0) return {Vec2i{0, 0}};
  std::vector<Vec2i> out;
  out.reserve(8 * i);
  for (int x = -i; x <= i; ++x) {
    out.push_back({x, i});
    out.push_back({x, -i});
  }
  for (int y = -i + 1; y <= i - 1; ++y) {
    out.push_back({i, y});
    out.push_back({-i, y});
  }
  return out;
}

int annulus_inner_radius(int R) {
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(R))));
}

std::vector<Vec2i> delta_annulus(int R) {
  if (R < 4) throw std::domain_error("delta_annulus: R < 4 is degenerate");
  const int r0 = annulus_inner_radius(R);
  std::vector<Vec2i> out;
  out.reserve((2 * R + 1) * (2 * R + 1) - (2 * r0 + 1) * (2 * r0 + 1));
  for (int i = r0 + 1; i <= R; ++i) {
    auto layer = lattice_layer(i);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

CouplingFamily::CouplingFamily(double alpha, double amplitude, int cutoff,
                               bool normalized)
    : alpha_(alpha),
      amplitude_(amplitude),
      cutoff_(cutoff),
      normalized_(normalized) {
  if (!(alpha > 4.0))
    throw std::invalid_argument("CouplingFamily: alpha must exceed 4");
  if (!(amplitude > 0.0))
    throw std::invalid_argument("CouplingFamily: amplitude must be positive");
  if (cutoff < 1)
    throw std::invalid_argument("CouplingFamily: cutoff must be >= 1");
  j_table_.assign(cutoff_ + 1, 0.0);
  for (int d = 1; d <= cutoff_; ++d)
    j_table_[d] = amplitude_ * std::pow(static_cast<double>(d), -alpha_);
  // Mass of the untruncated law beyond the cutoff: 8 c sum_{i>cutoff} i^{1-a}.
  tail_bound_ = 8.0 * amplitude_ * zeta_tail(alpha_ - 1.0, cutoff_);
}

CouplingFamily CouplingFamily::raw(double alpha, double amplitude,
                                   int cutoff_radius) {
  return CouplingFamily(alpha, amplitude, cutoff_radius, false);
}

CouplingFamily CouplingFamily::normalized(double alpha, int cutoff_radius) {
  const double c = 1.0 / (8.0 * riemann_zeta(alpha - 1.0));
  return CouplingFamily(alpha, c, cutoff_radius, true);
}

double CouplingFamily::coupling(Vec2i x) const {
  if (x.x == 0 && x.y == 0)
    throw std::domain_error("coupling: no self-coupling at x = 0");
  return coupling_at(norm_inf(x));
}

double CouplingFamily::total_mass_within_cutoff() const {
  KahanSum acc;
  for (int d = 1; d <= cutoff_; ++d) acc.add(8.0 * d * j_table_[d]);
  return acc.value();
}

double CouplingFamily::layer_pair_mass(int i, int j) const {
  if (i < 0 || j < 1) throw std::invalid_argument("layer_pair_mass: i>=0, j>=1");
  const auto inner = lattice_layer(i);
  const auto outer = lattice_layer(i + j);
  KahanSum acc;
  for (const auto& u : inner)
    for (const auto& v : outer) {
      const int d = norm_inf(v - u);
      if (d <= cutoff_) acc.add(coupling_at(d));
    }
  return acc.value();
}

}  // namespace spinbound
