#include "spinbound/stats.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace spinbound {

Interval wilson_interval(long successes, long trials, double z) {
  if (trials <= 0) throw std::invalid_argument("wilson_interval: trials <= 0");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {center - half, center + half};
}

static LineFit fit_impl(const std::vector<double>& x,
                        const std::vector<double>& y,
                        const std::vector<double>* w) {
  const int n = static_cast<int>(x.size());
  if (n != static_cast<int>(y.size()) || n < 2)
    throw std::invalid_argument("fit_line: need >= 2 matching points");
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    double s = w ? std::sqrt((*w)[i]) : 1.0;
    A(i, 0) = s;
    A(i, 1) = s * x[i];
    b(i) = s * y[i];
  }
  Eigen::Vector2d coef = A.colPivHouseholderQr().solve(b);
  Eigen::VectorXd resid = b - A * coef;
  LineFit fit;
  fit.intercept = coef(0);
  fit.slope = coef(1);
  fit.rss = resid.squaredNorm();
  fit.n = n;
  if (n > 2) {
    const double sigma2 = fit.rss / (n - 2);
    Eigen::Matrix2d xtx_inv = (A.transpose() * A).inverse();
    fit.slope_se = std::sqrt(sigma2 * xtx_inv(1, 1));
  }
  return fit;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  return fit_impl(x, y, nullptr);
}

LineFit fit_line_weighted(const std::vector<double>& x,
                          const std::vector<double>& y,
                          const std::vector<double>& w) {
  return fit_impl(x, y, &w);
}

double batch_means_stderr(const std::vector<double>& series, int batches) {
  const long n = static_cast<long>(series.size());
  if (batches < 2 || n < 2 * batches)
    throw std::invalid_argument("batch_means_stderr: series too short");
  const long len = n / batches;
  std::vector<double> means(batches, 0.0);
  for (int b = 0; b < batches; ++b) {
    double s = 0.0;
    for (long i = b * len; i < (b + 1) * len; ++i) s += series[i];
    means[b] = s / static_cast<double>(len);
  }
  double mu = 0.0;
  for (double m : means) mu += m;
  mu /= batches;
  double var = 0.0;
  for (double m : means) var += (m - mu) * (m - mu);
  var /= (batches - 1);
  return std::sqrt(var / batches);
}

double golden_section_minimize(const std::function<double(double)>& f,
                               double lo, double hi, double tol,
                               int max_iter) {
  if (!(lo < hi)) throw std::invalid_argument("golden_section: lo >= hi");
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double power_tail_exponent_mle(const std::vector<int>& samples, int k_min,
                               int k_max) {
  if (k_min < 1 || k_max <= k_min)
    throw std::invalid_argument("power_tail_exponent_mle: bad k range");
  long n_obs = 0, n_cens = 0;
  std::vector<int> obs;
  for (int v : samples) {
    if (v < k_min) continue;
    if (v > k_max) {
      ++n_cens;
    } else {
      obs.push_back(v);
      ++n_obs;
    }
  }
  if (n_obs + n_cens < 3)
    throw std::invalid_argument("power_tail_exponent_mle: too few tail events");
  auto neg_loglik = [&](double gamma) {
    const double log_kmin = std::log(static_cast<double>(k_min));
    double ll = 0.0;
    for (int v : obs) {
      const double pv = std::pow(static_cast<double>(v), -gamma) -
                        std::pow(static_cast<double>(v) + 1.0, -gamma);
      ll += std::log(pv > 0 ? pv : 1e-300) + gamma * log_kmin;
    }
    if (n_cens > 0) {
      ll += n_cens * (-gamma * std::log(static_cast<double>(k_max) + 1.0) +
                      gamma * log_kmin);
    }
    return -ll;
  };
  return golden_section_minimize(neg_loglik, 0.05, 50.0, 1e-8, 300);
}

}  // namespace spinbound
