#pragma once

#include <functional>
#include <vector>

namespace spinbound {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Wilson score interval for a binomial proportion.
Interval wilson_interval(long successes, long trials, double z = 1.96);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double rss = 0.0;  // residual sum of squares
  int n = 0;
};

// Ordinary least squares y ~ a + b x, with the usual standard error on b.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Weighted least squares; weights are inverse-variance style.
LineFit fit_line_weighted(const std::vector<double>& x,
                          const std::vector<double>& y,
                          const std::vector<double>& w);

// Standard error of the mean via batch means (accounts for autocorrelation).
double batch_means_stderr(const std::vector<double>& series, int batches = 32);

// Golden-section minimiser on [lo, hi] for a unimodal function.
double golden_section_minimize(const std::function<double(double)>& f,
                               double lo, double hi, double tol = 1e-10,
                               int max_iter = 200);

// MLE for the exponent of a discrete power-law survival P(X >= k) ~ k^-gamma,
// from samples conditioned on X >= k_min, right-censored at k_max.
// Returns the maximising gamma over (0.05, 50).
double power_tail_exponent_mle(const std::vector<int>& samples, int k_min,
                               int k_max);

}  // namespace spinbound
