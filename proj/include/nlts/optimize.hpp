#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace nlts {

using ScalarObjective = std::function<double(const Eigen::VectorXd&)>;
/// Writes the residual vector r(x); the objective is |r|^2.
using ResidualFunction = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LocalResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  int max_evaluations = 2000;
  double f_tolerance = 1e-12;
  double x_tolerance = 1e-9;
  double initial_step = 0.25;
  /// Budget-limited use as a first stage: running out is not a failure.
  bool budget_is_convergence = false;
};

/// Unconstrained downhill simplex. Non-finite objective values count as +inf.
LocalResult nelder_mead(const ScalarObjective& f, const Eigen::VectorXd& x0, const NelderMeadOptions& options = {});

struct BfgsOptions {
  int max_iterations = 300;
  double gradient_tolerance = 1e-7;
  double f_tolerance = 1e-15;
  double step = 1e-6;
};

/// Quasi-Newton with central-difference gradients and Armijo backtracking.
LocalResult bfgs(const ScalarObjective& f, const Eigen::VectorXd& x0, const BfgsOptions& options = {});

struct LevenbergMarquardtOptions {
  int max_iterations = 200;
  double step = 1e-6;
  /// Stop as soon as |r|^2 falls below this.
  double target = 0.0;
  double f_tolerance = 1e-14;
  double x_tolerance = 1e-13;
};

/// Levenberg-Marquardt on a residual vector with a central-difference Jacobian.
LocalResult levenberg_marquardt(const ResidualFunction& residual, const Eigen::VectorXd& x0,
                                const LevenbergMarquardtOptions& options = {});

/// Central differences with step h_k = step * max(1, |x_k|).
Eigen::VectorXd central_gradient(const ScalarObjective& f, const Eigen::VectorXd& x, double step = 1e-6);
/// Fourth-order five-point stencil with the same step rule.
Eigen::VectorXd five_point_gradient(const ScalarObjective& f, const Eigen::VectorXd& x, double step = 1e-4);

/// `count` Latin-hypercube points (rows) in the box [lower, upper].
Eigen::MatrixXd latin_hypercube(int count, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                std::uint64_t seed, std::uint32_t stream);

/// Runs task(i) for i in [0, count) on up to `threads` threads. Each index
/// runs exactly once; results must be written to per-index slots.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

/// NLTS_THREADS if set and positive, else 1.
int default_threads();

}  // namespace nlts
