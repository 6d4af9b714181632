#include "search.hpp"

#include <cmath>
#include <limits>

#include "nlts/rng.hpp"

namespace nlts::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::shared_ptr<const Eigen::VectorXd> prefix(const std::shared_ptr<const Eigen::VectorXd>& v, Eigen::Index length) {
  if (!v || length >= v->size()) return v;
  return std::make_shared<const Eigen::VectorXd>(v->head(length));
}

class LatentObjective : public Objective {
 public:
  LatentObjective(std::shared_ptr<const Eigen::VectorXd> x, std::size_t warm_up)
      : evaluator_(std::move(x)), warm_up_(static_cast<Eigen::Index>(warm_up)) {}

  std::size_t n_effective() const override {
    return static_cast<std::size_t>(std::max<Eigen::Index>(evaluator_.size() - warm_up_, 0));
  }

 protected:
  const Eigen::VectorXd& latent(const AnyParams& theta) {
    evaluator_.evaluate(theta, h_);
    return h_;
  }
  const Eigen::VectorXd& x() const { return evaluator_.series(); }
  Eigen::Index n() const { return evaluator_.size(); }
  Eigen::Index w() const { return warm_up_; }
  double inv_n() const { return 1.0 / static_cast<double>(n_effective()); }

 private:
  LatentEvaluator evaluator_;
  Eigen::Index warm_up_;
  Eigen::VectorXd h_;
};

class LeastSquaresObjective : public LatentObjective {
 public:
  using LatentObjective::LatentObjective;
  bool least_squares() const override { return true; }
  double value(const AnyParams& theta) override {
    residual(theta, r_);
    const double v = r_.squaredNorm();
    return std::isfinite(v) ? v : kInf;
  }

 private:
  Eigen::VectorXd r_;
};

class DiscrepancyObjective : public LeastSquaresObjective {
 public:
  DiscrepancyObjective(std::shared_ptr<const Eigen::VectorXd> x, std::size_t warm_up,
                       std::shared_ptr<const Eigen::VectorXd> target)
      : LeastSquaresObjective(std::move(x), warm_up), target_(std::move(target)) {}
  void residual(const AnyParams& theta, Eigen::VectorXd& r) override {
    const Eigen::VectorXd& h = latent(theta);
    const double s = std::sqrt(inv_n());
    r = (h.tail(n() - w()) - target_->tail(n() - w())) * s;
  }

 private:
  std::shared_ptr<const Eigen::VectorXd> target_;
};

class StarResidualObjective : public LeastSquaresObjective {
 public:
  using LeastSquaresObjective::LeastSquaresObjective;
  void residual(const AnyParams& theta, Eigen::VectorXd& r) override {
    const Eigen::VectorXd& m = latent(theta);
    const double s = std::sqrt(inv_n());
    r = (x().tail(n() - w()) - m.tail(n() - w())) * s;
  }
};

class GaussianObjective : public LatentObjective {
 public:
  using LatentObjective::LatentObjective;
  bool least_squares() const override { return false; }
  double value(const AnyParams& theta) override {
    const Eigen::VectorXd& h = latent(theta);
    const Eigen::VectorXd& xs = x();
    double sum = 0.0;
    for (Eigen::Index t = w(); t < n(); ++t) {
      const double v = h[t];
      if (!(v > 0.0) || !std::isfinite(v)) return kInf;
      sum += std::log(v) + xs[t] * xs[t] / v;
    }
    const double out = sum * inv_n();
    return std::isfinite(out) ? out : kInf;
  }
  void residual(const AnyParams&, Eigen::VectorXd&) override {}
};

class PoissonObjective : public LatentObjective {
 public:
  using LatentObjective::LatentObjective;
  bool least_squares() const override { return false; }
  double value(const AnyParams& theta) override {
    const Eigen::VectorXd& h = latent(theta);
    const Eigen::VectorXd& xs = x();
    double sum = 0.0;
    for (Eigen::Index t = w(); t < n(); ++t) {
      const double v = h[t];
      if (!(v > 0.0) || !std::isfinite(v)) return kInf;
      sum += v - xs[t] * std::log(v);
    }
    const double out = sum * inv_n();
    return std::isfinite(out) ? out : kInf;
  }
  void residual(const AnyParams&, Eigen::VectorXd&) override {}
};

}  // namespace

ObjectiveFactory make_objective_factory(ObjectiveKind kind, std::shared_ptr<const Eigen::VectorXd> x,
                                        std::size_t warm_up, std::shared_ptr<const Eigen::VectorXd> target) {
  return [kind, x, warm_up, target](Eigen::Index length) -> std::unique_ptr<Objective> {
    auto xs = prefix(x, length);
    switch (kind) {
      case ObjectiveKind::gaussian_qmle:
        return std::make_unique<GaussianObjective>(xs, warm_up);
      case ObjectiveKind::poisson_qmle:
        return std::make_unique<PoissonObjective>(xs, warm_up);
      case ObjectiveKind::least_squares:
        return std::make_unique<StarResidualObjective>(xs, warm_up);
      case ObjectiveKind::discrepancy:
        return std::make_unique<DiscrepancyObjective>(xs, warm_up, prefix(target, length));
    }
    return nullptr;
  };
}

namespace {

struct StageResult {
  Eigen::VectorXd u;
  int iterations = 0;
  bool converged = false;
};

StageResult refine(Objective& objective, const ParameterMap& map, const Eigen::VectorXd& u0, int iterations) {
  StageResult out;
  if (objective.least_squares()) {
    LevenbergMarquardtOptions o;
    o.max_iterations = iterations;
    const LocalResult r = levenberg_marquardt(
        [&](const Eigen::VectorXd& u, Eigen::VectorXd& res) { objective.residual(map.decode(u), res); }, u0, o);
    out.u = r.x;
    out.iterations = r.iterations;
    out.converged = r.converged;
  } else {
    BfgsOptions o;
    o.max_iterations = iterations;
    const LocalResult r = bfgs([&](const Eigen::VectorXd& u) { return objective.value(map.decode(u)); }, u0, o);
    out.u = r.x;
    out.iterations = r.iterations;
    out.converged = r.converged;
  }
  return out;
}

}  // namespace

LocalOutcome local_search(const ObjectiveFactory& factory, const ParameterMap& map, const AnyParams& start,
                          Eigen::Index n, const LocalOptions& options) {
  Eigen::VectorXd u = map.encode(start);
  int iterations = 0;
  const bool staged = n > 2 * options.coarse_length;
  {
    auto coarse = factory(staged ? options.coarse_length : n);
    NelderMeadOptions nm;
    nm.max_evaluations = options.nm_evaluations;
    nm.budget_is_convergence = true;
    const LocalResult r = nelder_mead([&](const Eigen::VectorXd& v) { return coarse->value(map.decode(v)); }, u, nm);
    u = r.x;
    iterations += r.iterations;
    if (staged) {
      const StageResult s = refine(*coarse, map, u, options.coarse_iterations);
      u = s.u;
      iterations += s.iterations;
    }
  }
  auto full = factory(n);
  const StageResult s = refine(*full, map, u, options.final_iterations);
  iterations += s.iterations;

  LocalOutcome out;
  out.theta = map.decode(s.u);
  out.value = full->value(out.theta);
  out.iterations = iterations;
  out.converged = s.converged && std::isfinite(out.value) && violations(out.theta).empty();
  return out;
}

std::vector<TaskOutcome> run_tasks(const std::vector<StartTask>& tasks, const ObjectiveFactory& factory,
                                   const std::function<ParameterMap(const AnyParams& start)>& map_for,
                                   Eigen::Index n, const LocalOptions& options, int threads) {
  std::vector<TaskOutcome> out(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t i) {
    const ParameterMap map = map_for(tasks[i].start);
    out[i].task = tasks[i];
    out[i].outcome = local_search(factory, map, tasks[i].start, n, options);
  });
  return out;
}

std::vector<AnyParams> lhs_starts(const AnyParams& shape, int count, const DataScale& scale, std::uint64_t seed) {
  const Eigen::Index dim = coordinates(shape).size();
  const Eigen::MatrixXd unit =
      latin_hypercube(count, Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim), seed, streams::starts);
  std::vector<AnyParams> starts;
  starts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) starts.push_back(start_point(shape, unit.row(i).transpose(), scale));
  return starts;
}

}  // namespace nlts::detail
