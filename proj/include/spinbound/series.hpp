#pragma once

#include <cstdint>

namespace spinbound {

// Compensated (Kahan) accumulator for long sums of small terms.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

// Riemann zeta for s > 1, direct series plus Euler-Maclaurin tail.
// Remainder below 1e-12 over the range used here (s >= 1.1).
double riemann_zeta(double s);

// sum_{i=1}^{n} i^{-s}, compensated.
double zeta_partial_sum(double s, long n);

// zeta(s) - zeta_partial_sum(s, n), clamped at 0 against roundoff.
double zeta_tail(double s, long n);

// H_n by direct compensated summation (n <= 1e6 intended).
double harmonic_number(long n);

}  // namespace spinbound
