#pragma once

#include <stdexcept>
#include <string>

namespace spinbound {

// Numerical failures map to exit code 3 in the CLI; plain invalid_argument /
// domain_error map to exit code 2 (validation).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The complex-rotation functional overflowed: delta is too large for the box.
struct DivergedProfileError : NumericalError {
  double max_argument;
  explicit DivergedProfileError(double arg)
      : NumericalError("rotation profile diverged: cosh argument " +
                       std::to_string(arg) + " exceeds overflow threshold"),
        max_argument(arg) {}
};

// approximate() ran out of harmonics before meeting the sup-norm budget.
struct ApproximationError : NumericalError {
  double best_error;
  int k_max;
  ApproximationError(double best, int kmax)
      : NumericalError("trigonometric approximation failed: best sup error " +
                       std::to_string(best) + " with K_max " +
                       std::to_string(kmax)),
        best_error(best),
        k_max(kmax) {}
};

// Conjugate gradient did not reach the requested residual within the cap.
struct SolverError : NumericalError {
  double residual;
  int iterations;
  SolverError(double res, int iters)
      : NumericalError("effective-resistance solver did not converge: residual " +
                       std::to_string(res) + " after " +
                       std::to_string(iters) + " iterations"),
        residual(res),
        iterations(iters) {}
};

}  // namespace spinbound
