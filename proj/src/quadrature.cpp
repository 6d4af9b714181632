#include "nlts/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "nlts/errors.hpp"

namespace nlts {

namespace {

constexpr double kRescale = 1e150;

// Orthonormal Hermite values p_{n-1}(x), p_n(x) for the standard normal law,
// plus log of sum_{k<n} p_k(x)^2. Values are rescaled as they grow; only the
// ratio p_n / p_{n-1} and the log-sum are meaningful afterwards.
struct Recurrence {
  double previous;
  double current;
  double log_sum;
};

Recurrence orthonormal_hermite(int n, double x) {
  double pm1 = 0.0;
  double p = 1.0;
  double sum = 1.0;
  double log_scale = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double next = (x * p - std::sqrt(static_cast<double>(k)) * pm1) / std::sqrt(k + 1.0);
    pm1 = p;
    p = next;
    sum += p * p;
    if (std::abs(p) > kRescale) {
      pm1 /= kRescale;
      p /= kRescale;
      sum /= kRescale * kRescale;
      log_scale += 2.0 * std::log(kRescale);
    }
  }
  // One more step gives p_n from p_{n-1}; the sum stops at p_{n-1}.
  const double pn = (x * p - std::sqrt(n - 1.0) * pm1) / std::sqrt(static_cast<double>(n));
  return {p, pn, std::log(sum) + log_scale};
}

GaussHermiteRule build_rule(int n) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Gauss-Hermite eigenvalue computation failed");
  Eigen::VectorXd x = solver.eigenvalues();

  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double xi = x[i];
    for (int it = 0; it < 3; ++it) {
      const Recurrence r = orthonormal_hermite(n, xi);
      // p_n' = sqrt(n) p_{n-1}
      const double step = r.current / (std::sqrt(static_cast<double>(n)) * r.previous);
      if (!std::isfinite(step)) break;
      xi -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(xi))) break;
    }
    rule.nodes[i] = xi;
  }
  for (int i = 0; i < n / 2; ++i) {
    const double a = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    rule.nodes[i] = -a;
    rule.nodes[n - 1 - i] = a;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  for (int i = 0; i < n; ++i) {
    rule.weights[i] = std::exp(-orthonormal_hermite(n, rule.nodes[i]).log_sum);
  }
  rule.weights /= rule.weights.sum();
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int order) {
  if (order < 1) throw ValidationError("Gauss-Hermite order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    slot = std::make_unique<GaussHermiteRule>(order == 1 ? GaussHermiteRule{Eigen::VectorXd::Zero(1),
                                                                            Eigen::VectorXd::Ones(1)}
                                                         : build_rule(order));
  }
  return *slot;
}

HalfLineResult integrate_half_line(const std::function<double(double)>& f, double tolerance) {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  constexpr double kT = 6.0;
  auto term = [&](double t, double& abs_acc) {
    const double y = std::exp(kHalfPi * std::sinh(t));
    if (y == 0.0 || !std::isfinite(y)) return 0.0;
    const double jac = kHalfPi * std::cosh(t) * y;
    const double v = f(y) * jac;
    if (!std::isfinite(v)) return 0.0;
    abs_acc += std::abs(v);
    return v;
  };

  double h = 0.5;
  long long count = static_cast<long long>(kT / h);
  double abs_sum = 0.0;
  double sum = term(0.0, abs_sum);
  for (long long k = 1; k <= count; ++k) sum += term(k * h, abs_sum) + term(-k * h, abs_sum);
  HalfLineResult result;
  result.value = sum * h;
  result.absolute = abs_sum * h;

  for (int level = 1; level <= 12; ++level) {
    h *= 0.5;
    count *= 2;
    // New points are the odd multiples of the halved step.
    for (long long k = 1; k <= count; k += 2) sum += term(k * h, abs_sum) + term(-k * h, abs_sum);
    const double value = sum * h;
    result.error = std::abs(value - result.value);
    result.value = value;
    result.absolute = abs_sum * h;
    result.levels = level;
    if (level >= 3 && result.error <= tolerance * std::max(result.absolute, 1e-300)) return result;
  }
  throw NumericalError("exp-sinh quadrature did not converge");
}

HalfLineResult integrate_real_line(const std::function<double(double)>& f, double tolerance) {
  const HalfLineResult pos = integrate_half_line(f, tolerance);
  const HalfLineResult neg = integrate_half_line([&](double y) { return f(-y); }, tolerance);
  return {pos.value + neg.value, pos.absolute + neg.absolute, pos.error + neg.error,
          std::max(pos.levels, neg.levels)};
}

}  // namespace nlts
