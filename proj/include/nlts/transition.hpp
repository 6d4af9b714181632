#pragma once

#include <cmath>

namespace nlts {

/// Smooth-transition GARCH weight F(x, gamma) = 1/(1 + exp(gamma x)) - 1/2.
///
/// Written as -tanh(gamma x / 2) / 2, which is the same function without an
/// explicit exponential, so it never overflows and is exactly odd in x.
template <typename Scalar>
Scalar stgarch_transition(Scalar x, Scalar gamma) {
  using std::tanh;
  return Scalar(-0.5) * tanh(Scalar(0.5) * gamma * x);
}

/// Logistic regime weight G(x; gamma, c) = 1/(1 + exp(-gamma (x - c))).
///
/// The exponent is always taken with a non-positive argument.
template <typename Scalar>
Scalar star_transition(Scalar x, Scalar gamma, Scalar c) {
  using std::exp;
  const Scalar z = gamma * (x - c);
  if (z >= Scalar(0)) {
    return Scalar(1) / (Scalar(1) + exp(-z));
  }
  const Scalar e = exp(z);
  return e / (Scalar(1) + e);
}

/// AGARCH news impact alpha (|x| - gamma x)^2.
template <typename Scalar>
Scalar agarch_news_impact(Scalar x, Scalar alpha, Scalar gamma) {
  using std::abs;
  const Scalar u = abs(x) - gamma * x;
  return alpha * u * u;
}

}  // namespace nlts
