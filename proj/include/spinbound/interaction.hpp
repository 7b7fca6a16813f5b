#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace spinbound {

// A continuous even 2pi-periodic interaction, applied as f = beta * f0.
// Built-ins: "xy" (cos x), "clock_smooth" (cos x + cos(4x)/4),
// "abs_kink" (|x| on [-pi,pi], periodised).
struct Interaction {
  std::function<double(double)> f0;
  double beta = 1.0;
  std::optional<double> smoothness_hint;
  // Exact cosine coefficients of f0 (index k-1 holds c_k) when f0 is a
  // trigonometric polynomial; enables the fast Metropolis path.
  std::optional<std::vector<double>> exact_coefficients;
  std::string name;

  double operator()(double x) const { return beta * f0(x); }
};

Interaction make_interaction(const std::string& name, double beta);
Interaction interaction_from_coefficients(std::vector<double> ck, double beta,
                                          std::string name = "custom");
// CSV with rows "k,c_k"; a header row is allowed.
Interaction interaction_from_csv(const std::string& path, double beta);

// Trigonometric polynomial sum_{k=1..K} c_k cos(kx) plus a certified
// nonnegative remainder. The dropped constant c0 is kept as const_offset so
// the remainder can be evaluated: eps_bar(x) = f(x) - const_offset - partial(x).
struct TrigApprox {
  std::vector<double> coefficients;  // c_1..c_K, beta included
  double epsilon = 0.0;
  double remainder_min = 0.0;
  double remainder_max = 0.0;
  double const_offset = 0.0;

  int K() const { return static_cast<int>(coefficients.size()); }
  double C_K() const;  // sum |c_k|
  double D_K() const;  // sum |c_k| k^2
  double partial_sum(double x) const;
  double remainder(const Interaction& f, double x) const {
    return f(x) - const_offset - partial_sum(x);
  }
};

// (1/pi) * integral_{-pi}^{pi} f(x) cos(kx) dx on a uniform grid;
// exact for pure cosines below the grid Nyquist.
double fourier_coefficient(const Interaction& f, int k, int grid_points = 8192);

// Sup error of the K-term cosine partial sum (constant term included) on a
// uniform certification grid.
double partial_sum_sup_error(const Interaction& f, int K, int grid_points = 8192);

// Smallest K <= k_max whose partial sum has certified sup error <= epsilon/2;
// the remainder is shifted by epsilon/2 (absorbed into the dropped constant)
// so it is nonnegative with sup <= epsilon on the certification grid.
TrigApprox approximate(const Interaction& f, double epsilon, int k_max = 512,
                       int cert_grid = 8192);

struct DecayFit {
  double exponent = 0.0;  // fitted slope of log|c_k| vs log k (negative)
  double residual = 0.0;
  int points = 0;
};

// Least-squares slope of log|c_k| against log k over nonzero coefficients.
DecayFit coefficient_decay_check(const TrigApprox& approx,
                                 double zero_threshold = 1e-12);

TrigApprox approx_from_coefficients(std::vector<double> ck, double epsilon);

}  // namespace spinbound
