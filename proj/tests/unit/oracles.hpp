#pragma once

// Straight-line reference implementations used as independent oracles. They
// follow the model definitions literally (exponential forms, explicit loops)
// and share no code with the library.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double stgarch_weight(double x, double gamma) { return 1.0 / (1.0 + std::exp(gamma * x)) - 0.5; }

inline double logistic(double x, double gamma, double c) { return 1.0 / (1.0 + std::exp(-gamma * (x - c))); }

// sigma2_t = omega + sum_i (a1_i + a2_i F(x_{t-d})) x_{t-i}^2 + sum_j b_j sigma2_{t-j},
// with pre-sample x = 0 and pre-sample sigma2 = init.
inline Eigen::VectorXd stgarch(const Eigen::VectorXd& x, double gamma, double omega, const std::vector<double>& a1,
                               const std::vector<double>& a2, const std::vector<double>& b, int d, double init) {
  const auto n = x.size();
  Eigen::VectorXd h(n);
  auto xs = [&](Eigen::Index t) { return t >= 0 ? x[t] : 0.0; };
  for (Eigen::Index t = 0; t < n; ++t) {
    double s = omega;
    const double f = t - d >= 0 ? stgarch_weight(x[t - d], gamma) : 0.0;
    for (std::size_t i = 1; i <= a1.size(); ++i) {
      const double xi = xs(t - static_cast<Eigen::Index>(i));
      s += (a1[i - 1] + a2[i - 1] * f) * xi * xi;
    }
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const auto tj = t - static_cast<Eigen::Index>(j);
      s += b[j - 1] * (tj >= 0 ? h[tj] : init);
    }
    h[t] = s;
  }
  return h;
}

inline Eigen::VectorXd agarch(const Eigen::VectorXd& x, double omega, double alpha, double beta, double gamma,
                              double init) {
  Eigen::VectorXd h(x.size());
  for (Eigen::Index t = 0; t < x.size(); ++t) {
    const double xp = t > 0 ? x[t - 1] : 0.0;
    const double news = xp >= 0 ? (1.0 - gamma) * xp : -(1.0 + gamma) * xp;
    h[t] = omega + alpha * news * news + beta * (t > 0 ? h[t - 1] : init);
  }
  return h;
}

// Two-branch threshold form: alpha1 y below or at l, alpha2 beyond it.
inline Eigen::VectorXd intgarch(const Eigen::VectorXd& y, double omega, double a1, double a2, double beta, int l) {
  Eigen::VectorXd lam(y.size());
  double prev = omega / (1.0 - beta);
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    const double yp = t > 0 ? y[t - 1] : 0.0;
    const double arch = yp <= l ? a1 * yp : a1 * l + a2 * (yp - l);
    lam[t] = omega + arch + beta * prev;
    prev = lam[t];
  }
  return lam;
}

// M = 1, p = 1 STAR mean.
inline Eigen::VectorXd star11(const Eigen::VectorXd& x, double p00, double p01, double p10, double p11, double gamma,
                              double c) {
  Eigen::VectorXd m(x.size());
  for (Eigen::Index t = 0; t < x.size(); ++t) {
    const double xl = t > 0 ? x[t - 1] : 0.0;
    m[t] = p00 + p01 * xl + (p10 + p11 * xl) * logistic(xl, gamma, c);
  }
  return m;
}

// Composite Simpson on [a, b] with n (even) panels.
template <typename F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace oracle
