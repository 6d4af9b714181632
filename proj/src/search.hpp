#pragma once

// Objectives and the staged local search shared by estimation and
// identification searches.

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "nlts/estimate.hpp"
#include "nlts/filter.hpp"
#include "nlts/optimize.hpp"
#include "nlts/reparam.hpp"

namespace nlts::detail {

class Objective {
 public:
  virtual ~Objective() = default;
  virtual bool least_squares() const = 0;
  /// +inf when the latent path is not admissible (non-finite, non-positive).
  virtual double value(const AnyParams& theta) = 0;
  /// Residuals whose squared norm is value(); least-squares objectives only.
  virtual void residual(const AnyParams& theta, Eigen::VectorXd& r) = 0;
  virtual std::size_t n_effective() const = 0;
};

/// Builds the objective on the first `length` observations.
using ObjectiveFactory = std::function<std::unique_ptr<Objective>(Eigen::Index length)>;

ObjectiveFactory make_objective_factory(ObjectiveKind kind, std::shared_ptr<const Eigen::VectorXd> x,
                                        std::size_t warm_up,
                                        std::shared_ptr<const Eigen::VectorXd> target = nullptr);

struct LocalOptions {
  int nm_evaluations = 300;
  Eigen::Index coarse_length = 5000;
  int coarse_iterations = 100;
  int final_iterations = 200;
};

struct LocalOutcome {
  AnyParams theta;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead on a prefix, a gradient-based refinement on the same prefix,
/// then a refinement on the full series (Levenberg-Marquardt for
/// least-squares objectives, BFGS otherwise).
LocalOutcome local_search(const ObjectiveFactory& factory, const ParameterMap& map, const AnyParams& start,
                          Eigen::Index n, const LocalOptions& options);

struct StartTask {
  int start_id = 0;
  int integer_value = 0;
  AnyParams start;
};

struct TaskOutcome {
  StartTask task;
  LocalOutcome outcome;
};

/// Runs every task (in parallel when threads > 1); results are in task order.
std::vector<TaskOutcome> run_tasks(const std::vector<StartTask>& tasks, const ObjectiveFactory& factory,
                                   const std::function<ParameterMap(const AnyParams& start)>& map_for,
                                   Eigen::Index n, const LocalOptions& options, int threads);

/// Latin-hypercube start points for `shape`.
std::vector<AnyParams> lhs_starts(const AnyParams& shape, int count, const DataScale& scale, std::uint64_t seed);

}  // namespace nlts::detail
