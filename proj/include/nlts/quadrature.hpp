#pragma once

#include <functional>

#include <Eigen/Dense>

namespace nlts {

/// Gauss-Hermite rule for the standard normal law: sum_i w_i f(x_i)
/// approximates E f(Z), Z ~ N(0, 1). Weights sum to one.
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Rules are computed once per order and shared. Thread-safe.
const GaussHermiteRule& gauss_hermite(int order);

struct HalfLineResult {
  double value = 0.0;
  /// Integral of |f|, the natural scale for judging the error of `value`.
  double absolute = 0.0;
  double error = 0.0;
  int levels = 0;
};

/// Integral of f over (0, inf) by the exp-sinh substitution
/// y = exp(pi/2 sinh t) and trapezoid refinement until successive levels
/// agree to `tolerance` relative to the absolute integral.
/// Throws NumericalError when refinement does not settle.
HalfLineResult integrate_half_line(const std::function<double(double)>& f, double tolerance = 1e-11);

/// Integral over the real line as two half-line integrals split at zero.
HalfLineResult integrate_real_line(const std::function<double(double)>& f, double tolerance = 1e-11);

}  // namespace nlts
