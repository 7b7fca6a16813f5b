#include "spinbound/series.hpp"

#include <cmath>
#include <stdexcept>

namespace spinbound {

double zeta_partial_sum(double s, long n) {
  KahanSum acc;
  for (long i = 1; i <= n; ++i) acc.add(std::pow(static_cast<double>(i), -s));
  return acc.value();
}

double riemann_zeta(double s) {
  if (!(s > 1.0)) throw std::domain_error("riemann_zeta requires s > 1");
  // sum_{k<N} k^-s + N^-s/2 + N^(1-s)/(s-1) + Bernoulli corrections.
  const long N = 64;
  KahanSum acc;
  for (long k = 1; k < N; ++k) acc.add(std::pow(static_cast<double>(k), -s));
  const double Nd = static_cast<double>(N);
  double result = acc.value();
  result += 0.5 * std::pow(Nd, -s);
  result += std::pow(Nd, 1.0 - s) / (s - 1.0);
  // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
  static const double b2j_over_fact[] = {
      1.0 / 12.0,          // B2/2!
      -1.0 / 720.0,        // B4/4!
      1.0 / 30240.0,       // B6/6!
      -1.0 / 1209600.0,    // B8/8!
      1.0 / 47900160.0,    // B10/10!
  };
  double rising = s;            // s(s+1)...(s+2j-2), starts at j=1 with s
  double npow = std::pow(Nd, -s - 1.0);
  for (int j = 0; j < 5; ++j) {
    result += b2j_over_fact[j] * rising * npow;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    npow /= Nd * Nd;
  }
  return result;
}

double zeta_tail(double s, long n) {
  double t = riemann_zeta(s) - zeta_partial_sum(s, n);
  return t < 0.0 ? 0.0 : t;
}

double harmonic_number(long n) {
  if (n < 0) throw std::domain_error("harmonic_number requires n >= 0");
  KahanSum acc;
  for (long i = 1; i <= n; ++i) acc.add(1.0 / static_cast<double>(i));
  return acc.value();
}

}  // namespace spinbound
