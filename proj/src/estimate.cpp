#include "nlts/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "nlts/filter.hpp"
#include "nlts/optimize.hpp"
#include "search.hpp"

namespace nlts {

namespace {

using detail::make_objective_factory;

std::shared_ptr<const Eigen::VectorXd> share(const Eigen::Ref<const Eigen::VectorXd>& x) {
  return std::make_shared<const Eigen::VectorXd>(x);
}

int lag_order(const AnyParams& shape) {
  return std::visit(
      [](const auto& p) -> int {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StgarchParams>) {
          return std::max({p.p(), p.q(), p.d});
        } else if constexpr (std::is_same_v<T, StarParams>) {
          return p.p();
        } else {
          return 1;
        }
      },
      shape);
}

FitResult fit_profiled(ObjectiveKind kind, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const std::vector<AnyParams>& shapes, const EstimationOptions& options) {
  if (shapes.empty()) throw ValidationError("integer parameter grid is empty");
  if (static_cast<std::size_t>(x.size()) < options.min_length) {
    throw ValidationError("series length " + std::to_string(x.size()) + " is below the minimum " +
                          std::to_string(options.min_length));
  }
  if (!x.allFinite()) throw ValidationError("series contains non-finite values");
  if (options.n_starts < 1) throw ValidationError("n_starts must be at least 1");

  std::size_t warm_up = options.warm_up;
  for (const auto& s : shapes) {
    warm_up = std::max(warm_up, options.warm_up > 0 ? static_cast<std::size_t>(lag_order(s))
                                                    : default_objective_warm_up(s, static_cast<std::size_t>(x.size())));
  }
  const auto series = share(x);
  const auto factory = make_objective_factory(kind, series, warm_up);
  const DataScale scale = data_scale(x);

  std::vector<detail::StartTask> tasks;
  for (const auto& shape : shapes) {
    const auto starts = detail::lhs_starts(shape, options.n_starts, scale, options.seed);
    for (const auto& s : starts) {
      tasks.push_back({static_cast<int>(tasks.size()), integer_parameter(shape), s});
    }
  }
  detail::LocalOptions local;
  local.nm_evaluations = options.nm_evaluations;
  local.coarse_length = options.coarse_length;
  const int threads = options.threads > 0 ? options.threads : default_threads();
  const auto outcomes = detail::run_tasks(
      tasks, factory, [&](const AnyParams& start) { return ParameterMap(start, options.box); }, x.size(), local,
      threads);

  FitResult result;
  result.warm_up = warm_up;
  result.starts = static_cast<int>(tasks.size());
  result.coordinate_names = coordinate_names(shapes.front());
  result.profiled_name = integer_parameter_name(shapes.front());
  const ParameterMap names_only(shapes.front(), options.box);
  int best = -1;
  for (const auto& o : outcomes) {
    StartTrace tr;
    tr.start_id = o.task.start_id;
    tr.integer_value = o.task.integer_value;
    tr.start = coordinates(o.task.start);
    tr.end = coordinates(o.outcome.theta);
    tr.objective = o.outcome.value;
    tr.iterations = o.outcome.iterations;
    tr.converged = o.outcome.converged;
    result.trace.push_back(tr);
    if (!tr.converged) continue;
    auto it = result.profile.find(tr.integer_value);
    if (it == result.profile.end() || tr.objective < it->second) result.profile[tr.integer_value] = tr.objective;
    if (best < 0 || tr.objective < outcomes[static_cast<std::size_t>(best)].outcome.value) best = tr.start_id;
  }
  if (best < 0) throw FitFailure("no start converged", result.trace);
  const auto& winner = outcomes[static_cast<std::size_t>(best)].outcome;
  result.theta_hat = winner.theta;
  result.objective = winner.value;
  result.n_effective = factory(x.size())->n_effective();
  if (options.compute_curvature) {
    try {
      CurvatureOptions co;
      co.box = options.box;
      co.warm_up = warm_up;
      result.curvature = curvature_at(result.theta_hat, x, co);
    } catch (const DomainError& e) {
      result.warnings.push_back(std::string("curvature not computed: ") + e.what());
    }
  }
  return result;
}

}  // namespace

std::size_t default_objective_warm_up(const AnyParams& shape, std::size_t n) {
  const auto lags = static_cast<std::size_t>(lag_order(shape));
  if (std::holds_alternative<StarParams>(shape)) return lags;
  return std::max(lags, std::min<std::size_t>(500, n / 10));
}

double gaussian_qmle_objective(const AnyParams& theta, const Eigen::Ref<const Eigen::VectorXd>& x,
                               std::size_t warm_up) {
  if (violations(theta).size() > 0) throw ValidationError(violations(theta));
  return make_objective_factory(ObjectiveKind::gaussian_qmle, share(x), warm_up)(x.size())->value(theta);
}

double poisson_qmle_objective(const IntgarchParams& theta, const Eigen::Ref<const Eigen::VectorXd>& x,
                              std::size_t warm_up) {
  require_valid(theta);
  require_counts(x);
  return make_objective_factory(ObjectiveKind::poisson_qmle, share(x), warm_up)(x.size())->value(theta);
}

double star_nls_objective(const StarParams& theta, const Eigen::Ref<const Eigen::VectorXd>& x, std::size_t warm_up) {
  require_valid(theta);
  return make_objective_factory(ObjectiveKind::least_squares, share(x), warm_up)(x.size())->value(theta);
}

FitResult gaussian_qmle(const Eigen::Ref<const Eigen::VectorXd>& x, StgarchOrders orders, std::vector<int> d_grid,
                        const EstimationOptions& options) {
  if (orders.q < 1 || orders.p < 0) throw ValidationError("STGARCH orders need q >= 1 and p >= 0");
  if (d_grid.empty()) d_grid = {1};
  std::vector<AnyParams> shapes;
  for (int d : d_grid) {
    if (d < 1 || d > orders.q) throw ValidationError("delay grid entries must lie in 1..q");
    StgarchParams s;
    s.gamma = 1.0;
    s.omega = 1.0;
    s.alpha1.assign(static_cast<std::size_t>(orders.q), 0.1);
    s.alpha2.assign(static_cast<std::size_t>(orders.q), 0.0);
    s.beta.assign(static_cast<std::size_t>(orders.p), 0.5 / std::max(orders.p, 1));
    s.d = d;
    shapes.emplace_back(s);
  }
  return fit_profiled(ObjectiveKind::gaussian_qmle, x, shapes, options);
}

FitResult gaussian_qmle_agarch(const Eigen::Ref<const Eigen::VectorXd>& x, const EstimationOptions& options) {
  return fit_profiled(ObjectiveKind::gaussian_qmle, x, {AnyParams{AgarchParams{1.0, 0.1, 0.5, 0.0}}}, options);
}

FitResult poisson_qmle(const Eigen::Ref<const Eigen::VectorXd>& x, const std::vector<int>& l_grid,
                       const EstimationOptions& options) {
  if (l_grid.empty()) throw ValidationError("threshold grid is empty");
  require_counts(x);
  std::vector<AnyParams> shapes;
  for (int l : l_grid) {
    if (l < 1) throw ValidationError("threshold grid entries must be positive");
    shapes.emplace_back(IntgarchParams{1.0, 0.2, 0.2, 0.2, l});
  }
  return fit_profiled(ObjectiveKind::poisson_qmle, x, shapes, options);
}

FitResult star_nls(const Eigen::Ref<const Eigen::VectorXd>& x, const std::vector<int>& d_grid, int M, int p,
                   const EstimationOptions& options) {
  if (M < 1 || p < 1) throw ValidationError("STAR needs M >= 1 and p >= 1");
  if (d_grid.empty()) throw ValidationError("delay grid is empty");
  std::vector<AnyParams> shapes;
  for (int d : d_grid) {
    if (d < 1 || d > p) throw ValidationError("delay grid entries must lie in 1..p");
    StarParams s;
    s.phi = Eigen::MatrixXd::Zero(M + 1, p + 1);
    s.gamma = Eigen::VectorXd::Ones(M);
    s.c = Eigen::VectorXd::LinSpaced(M, 0.0, static_cast<double>(M - 1));
    s.d = d;
    shapes.emplace_back(s);
  }
  EstimationOptions o = options;
  o.min_length = std::max<std::size_t>(static_cast<std::size_t>(p) + 1, std::min(options.min_length,
                                                                                   static_cast<std::size_t>(x.size())));
  return fit_profiled(ObjectiveKind::least_squares, x, shapes, o);
}

Curvature curvature_at(const AnyParams& theta, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const CurvatureOptions& options) {
  if (auto v = violations(theta); !v.empty()) throw ValidationError(v);
  const Eigen::VectorXd coords = coordinates(theta);
  const Eigen::Index dim = coords.size();
  const std::size_t warm_up =
      options.warm_up > 0 ? options.warm_up : default_objective_warm_up(theta, static_cast<std::size_t>(x.size()));
  const Eigen::Index w = static_cast<Eigen::Index>(warm_up);
  if (x.size() <= w + 1) throw ValidationError("series too short for curvature");

  auto in_box = [&](const AnyParams& t) {
    if (!violations(t).empty()) return false;
    if (const auto* s = std::get_if<StgarchParams>(&t)) {
      return s->gamma >= 0.0 && s->gamma <= options.box.stgarch_gamma_max;
    }
    if (const auto* s = std::get_if<StarParams>(&t)) {
      return s->gamma.minCoeff() >= options.box.star_gamma_min && s->gamma.maxCoeff() <= options.box.star_gamma_max;
    }
    return true;
  };

  LatentEvaluator evaluator(share(x));
  const Eigen::Index rows = x.size() - w;
  Eigen::MatrixXd J(rows, dim);
  Eigen::VectorXd hp, hm;
  const auto names = coordinate_names(theta);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double h = options.relative_step * std::max(std::abs(coords[k]), options.step_floor);
    Eigen::VectorXd plus = coords;
    Eigen::VectorXd minus = coords;
    plus[k] += h;
    minus[k] -= h;
    const AnyParams tp = with_coordinates(theta, plus);
    const AnyParams tm = with_coordinates(theta, minus);
    if (!in_box(tp) || !in_box(tm)) {
      throw DomainError("curvature step in " + names[static_cast<std::size_t>(k)] +
                        " leaves the parameter space: theta is on a boundary");
    }
    evaluator.evaluate(tp, hp);
    evaluator.evaluate(tm, hm);
    J.col(k) = (hp.tail(rows) - hm.tail(rows)) / (2.0 * h);
    const double rms = std::sqrt(J.col(k).squaredNorm() / static_cast<double>(rows));
    if (rms > 0.0 && std::isfinite(rms)) J.col(k) /= rms;
  }
  if (!J.allFinite()) throw NumericalError("non-finite latent gradient");
  const Eigen::MatrixXd opg = J.transpose() * J / static_cast<double>(rows);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(opg, Eigen::EigenvaluesOnly);
  Curvature c;
  c.coordinates = names;
  c.eigenvalues = solver.eigenvalues();
  c.min_eigenvalue = c.eigenvalues[0];
  const double max_eig = c.eigenvalues[dim - 1];
  c.condition_number = c.min_eigenvalue > 0.0 ? max_eig / c.min_eigenvalue : std::numeric_limits<double>::infinity();
  return c;
}

}  // namespace nlts
