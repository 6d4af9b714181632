#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlts/errors.hpp"
#include "nlts/params.hpp"
#include "nlts/reparam.hpp"

namespace nlts {

struct EstimationOptions {
  int n_starts = 20;
  std::uint64_t seed = 0;
  /// 0 means default_threads().
  int threads = 0;
  SearchBox box;
  std::size_t min_length = 500;
  /// Leading observations excluded from the objective; 0 picks the family
  /// default (min(500, n/10), at least the model's lag order; p for STAR).
  std::size_t warm_up = 0;
  int nm_evaluations = 300;
  /// Length of the prefix used by the first (coarse) search stage.
  Eigen::Index coarse_length = 5000;
  bool compute_curvature = true;
};

struct StartTrace {
  int start_id = 0;
  int integer_value = 0;
  Eigen::VectorXd start;
  Eigen::VectorXd end;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct Curvature {
  std::vector<std::string> coordinates;
  Eigen::VectorXd eigenvalues;
  double min_eigenvalue = 0.0;
  double condition_number = 0.0;
};

struct FitResult {
  AnyParams theta_hat;
  double objective = 0.0;
  std::size_t n_effective = 0;
  std::size_t warm_up = 0;
  int starts = 0;
  std::vector<std::string> coordinate_names;
  std::vector<StartTrace> trace;
  /// Name of the profiled integer parameter (d or l) and its profile.
  std::string profiled_name;
  std::map<int, double> profile;
  std::optional<Curvature> curvature;
  std::vector<std::string> warnings;
};

/// Every start failed to converge.
class FitFailure : public NumericalError {
 public:
  FitFailure(const std::string& what, std::vector<StartTrace> trace)
      : NumericalError(what), trace_(std::move(trace)) {}
  const std::vector<StartTrace>& trace() const noexcept { return trace_; }

 private:
  std::vector<StartTrace> trace_;
};

enum class ObjectiveKind { gaussian_qmle, poisson_qmle, least_squares, discrepancy };

std::size_t default_objective_warm_up(const AnyParams& shape, std::size_t n);

/// (1/n_eff) sum_{t >= warm_up} [log sigma_t^2 + x_t^2 / sigma_t^2].
double gaussian_qmle_objective(const AnyParams& theta, const Eigen::Ref<const Eigen::VectorXd>& x,
                               std::size_t warm_up);
/// (1/n_eff) sum_{t >= warm_up} [lambda_t - x_t log lambda_t].
double poisson_qmle_objective(const IntgarchParams& theta, const Eigen::Ref<const Eigen::VectorXd>& x,
                              std::size_t warm_up);
/// (1/n_eff) sum_{t >= warm_up} (x_t - m_t)^2.
double star_nls_objective(const StarParams& theta, const Eigen::Ref<const Eigen::VectorXd>& x, std::size_t warm_up);

struct StgarchOrders {
  int p = 1;
  int q = 1;
};

/// Gaussian QMLE for STGARCH (delay profiled over `d_grid`, default {1}).
FitResult gaussian_qmle(const Eigen::Ref<const Eigen::VectorXd>& x, StgarchOrders orders,
                        std::vector<int> d_grid, const EstimationOptions& options = {});
/// Gaussian QMLE for AGARCH(1,1).
FitResult gaussian_qmle_agarch(const Eigen::Ref<const Eigen::VectorXd>& x, const EstimationOptions& options = {});

/// Poisson QMLE for INTGARCH with the threshold profiled over `l_grid`.
FitResult poisson_qmle(const Eigen::Ref<const Eigen::VectorXd>& x, const std::vector<int>& l_grid,
                       const EstimationOptions& options = {});

/// Nonlinear least squares for an M-regime STAR(p), delay profiled over `d_grid`.
FitResult star_nls(const Eigen::Ref<const Eigen::VectorXd>& x, const std::vector<int>& d_grid, int M, int p,
                   const EstimationOptions& options = {});

struct CurvatureOptions {
  double relative_step = 1e-5;
  /// Steps never go below relative_step * step_floor.
  double step_floor = 0.1;
  SearchBox box;
  /// 0 picks the family default.
  std::size_t warm_up = 0;
};

/// Outer product of central-difference latent gradients, averaged over t,
/// after scaling each gradient coordinate to unit root-mean-square (columns
/// that vanish identically stay zero). Throws DomainError when a step would
/// leave the parameter space or the search box.
Curvature curvature_at(const AnyParams& theta, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const CurvatureOptions& options = {});

}  // namespace nlts
