#include "spinbound/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <memory>

#include "spinbound/errors.hpp"
#include "spinbound/series.hpp"
#include "spinbound/stats.hpp"

namespace spinbound {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_to_pi(double x) {
  double y = std::remainder(x, 2.0 * kPi);
  return y;
}

void check_even(const Interaction& f) {
  for (int i = 0; i < 2048; ++i) {
    const double x = -kPi + 2.0 * kPi * i / 2048.0;
    if (std::abs(f.f0(x) - f.f0(-x)) > 1e-12)
      throw std::invalid_argument("interaction is not even at x = " +
                                  std::to_string(x));
  }
}

}  // namespace

Interaction make_interaction(const std::string& name, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("interaction: beta must be > 0");
  Interaction f;
  f.beta = beta;
  f.name = name;
  if (name == "xy") {
    f.f0 = [](double x) { return std::cos(x); };
    f.exact_coefficients = std::vector<double>{1.0};
  } else if (name == "clock_smooth") {
    f.f0 = [](double x) { return std::cos(x) + 0.25 * std::cos(4.0 * x); };
    f.exact_coefficients = std::vector<double>{1.0, 0.0, 0.0, 0.25};
  } else if (name == "abs_kink") {
    f.f0 = [](double x) { return std::abs(wrap_to_pi(x)); };
    f.smoothness_hint = 1.0;  // Lipschitz
  } else {
    throw std::invalid_argument("unknown interaction '" + name + "'");
  }
  check_even(f);
  return f;
}

Interaction interaction_from_coefficients(std::vector<double> ck, double beta,
                                          std::string name) {
  if (!(beta > 0.0)) throw std::invalid_argument("interaction: beta must be > 0");
  Interaction f;
  f.beta = beta;
  f.name = std::move(name);
  auto coeffs = std::make_shared<std::vector<double>>(std::move(ck));
  f.exact_coefficients = *coeffs;
  f.f0 = [coeffs](double x) {
    double s = 0.0;
    for (int k = static_cast<int>(coeffs->size()); k >= 1; --k)
      s += (*coeffs)[k - 1] * std::cos(k * x);
    return s;
  };
  return f;
}

Interaction interaction_from_csv(const std::string& path, double beta) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open coefficient file " + path);
  std::vector<double> ck;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string k_str, c_str;
    if (!std::getline(row, k_str, ',') || !std::getline(row, c_str))
      throw std::invalid_argument("malformed coefficient row: " + line);
    if (k_str == "k") continue;  // header
    const int k = std::stoi(k_str);
    const double c = std::stod(c_str);
    if (k < 1) throw std::invalid_argument("coefficient index k must be >= 1");
    if (static_cast<int>(ck.size()) < k) ck.resize(k, 0.0);
    ck[k - 1] = c;
  }
  if (ck.empty()) throw std::invalid_argument("no coefficients in " + path);
  return interaction_from_coefficients(std::move(ck), beta, "csv:" + path);
}

double TrigApprox::C_K() const {
  double s = 0.0;
  for (double c : coefficients) s += std::abs(c);
  return s;
}

double TrigApprox::D_K() const {
  double s = 0.0;
  for (int k = 1; k <= K(); ++k)
    s += std::abs(coefficients[k - 1]) * static_cast<double>(k) * k;
  return s;
}

double TrigApprox::partial_sum(double x) const {
  double s = 0.0;
  for (int k = K(); k >= 1; --k) s += coefficients[k - 1] * std::cos(k * x);
  return s;
}

double fourier_coefficient(const Interaction& f, int k, int grid_points) {
  if (k < 1) throw std::invalid_argument("fourier_coefficient: k >= 1");
  if (grid_points < 4096)
    throw std::invalid_argument("fourier_coefficient: need >= 4096 points");
  // Uniform rectangle rule; discrete orthogonality makes it exact for pure
  // cosines up to the grid Nyquist.
  KahanSum acc;
  const double h = 2.0 * kPi / grid_points;
  for (int i = 0; i < grid_points; ++i) {
    const double x = -kPi + h * i;
    acc.add(f(x) * std::cos(k * x));
  }
  return acc.value() * h / kPi;
}

namespace {

double mean_value(const std::vector<double>& fx) {
  KahanSum acc;
  for (double v : fx) acc.add(v);
  return acc.value() / static_cast<double>(fx.size());
}

std::vector<double> tabulate(const Interaction& f, int grid) {
  std::vector<double> fx(grid);
  for (int i = 0; i < grid; ++i) fx[i] = f(-kPi + 2.0 * kPi * i / grid);
  return fx;
}

}  // namespace

double partial_sum_sup_error(const Interaction& f, int K, int grid_points) {
  const auto fx = tabulate(f, grid_points);
  const double a0 = mean_value(fx);
  std::vector<double> residual(fx);
  for (auto& v : residual) v -= a0;
  for (int k = 1; k <= K; ++k) {
    const double ck = fourier_coefficient(f, k, 2 * grid_points);
    for (int i = 0; i < grid_points; ++i)
      residual[i] -= ck * std::cos(k * (-kPi + 2.0 * kPi * i / grid_points));
  }
  double sup = 0.0;
  for (double v : residual) sup = std::max(sup, std::abs(v));
  return sup;
}

TrigApprox approximate(const Interaction& f, double epsilon, int k_max,
                       int cert_grid) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("approximate: epsilon <= 0");
  check_even(f);
  const auto fx = tabulate(f, cert_grid);
  const double a0 = mean_value(fx);

  // residual_i tracks f - a0 - partial_K on the certification grid; update it
  // incrementally so the smallest admissible K is found in one sweep.
  std::vector<double> residual(fx);
  for (auto& v : residual) v -= a0;
  std::vector<double> coeffs;
  double best_sup = 0.0;

  for (int K = 0; K <= k_max; ++K) {
    if (K > 0) {
      const double ck = fourier_coefficient(f, K, 2 * cert_grid);
      coeffs.push_back(ck);
      for (int i = 0; i < cert_grid; ++i)
        residual[i] -= ck * std::cos(K * (-kPi + 2.0 * kPi * i / cert_grid));
    }
    double lo = residual[0], hi = residual[0];
    for (double v : residual) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    best_sup = std::max(std::abs(lo), std::abs(hi));
    if (best_sup <= epsilon / 2.0) {
      TrigApprox out;
      out.coefficients = coeffs;
      out.epsilon = epsilon;
      // Shift by the certified budget eps/2: remainder is nonnegative and
      // bounded by eps; the shift lives in the dropped constant term.
      out.const_offset = a0 - epsilon / 2.0;
      out.remainder_min = lo + epsilon / 2.0;
      out.remainder_max = hi + epsilon / 2.0;
      return out;
    }
  }
  throw ApproximationError(best_sup, k_max);
}

TrigApprox approx_from_coefficients(std::vector<double> ck, double epsilon) {
  TrigApprox out;
  out.coefficients = std::move(ck);
  out.epsilon = epsilon;
  out.remainder_min = 0.0;
  out.remainder_max = epsilon;
  out.const_offset = 0.0;
  return out;
}

DecayFit coefficient_decay_check(const TrigApprox& approx,
                                 double zero_threshold) {
  if (approx.K() < 8)
    throw std::invalid_argument("coefficient_decay_check: K >= 8 required");
  std::vector<double> lx, ly;
  for (int k = 1; k <= approx.K(); ++k) {
    const double c = std::abs(approx.coefficients[k - 1]);
    if (c > zero_threshold) {
      lx.push_back(std::log(static_cast<double>(k)));
      ly.push_back(std::log(c));
    }
  }
  if (lx.size() < 4)
    throw std::invalid_argument(
        "coefficient_decay_check: fewer than 4 nonzero coefficients");
  const LineFit fit = fit_line(lx, ly);
  DecayFit out;
  out.exponent = fit.slope;
  out.residual = fit.rss;
  out.points = static_cast<int>(lx.size());
  return out;
}

}  // namespace spinbound
