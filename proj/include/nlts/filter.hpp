#pragma once

#include <cstddef>
#include <memory>

#include <Eigen/Dense>

#include "nlts/params.hpp"

namespace nlts {

/// Candidate latent process h_t(theta) (variance, intensity or conditional
/// mean) reconstructed on a fixed observed series. values[t] is aligned with
/// x[t]; the first `warm_up` entries carry initialization effects.
struct LatentPath {
  Eigen::VectorXd values;
  std::size_t warm_up = 0;
  AnyParams theta;
};

/// max(p,q,d) + ceil(log 1e-12 / log(sum beta + 1e-9)), capped at 500.
std::size_t default_warm_up(const AnyParams& theta);

LatentPath stgarch_filter(const Valid<StgarchParams>& theta, const Eigen::Ref<const Eigen::VectorXd>& x);
LatentPath agarch_filter(const Valid<AgarchParams>& theta, const Eigen::Ref<const Eigen::VectorXd>& x);
/// Throws ValidationError on negative or non-integer observations.
LatentPath intgarch_filter(const Valid<IntgarchParams>& theta, const Eigen::Ref<const Eigen::VectorXd>& x);
LatentPath star_mean(const Valid<StarParams>& theta, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Validates `theta` and dispatches on its family.
LatentPath filter(const AnyParams& theta, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Throws ValidationError unless every entry is a non-negative integer.
void require_counts(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Low-level recursions on unchecked parameters. Pre-sample observations are
/// zero; pre-sample latent values are `init`.
namespace kernel {

/// `weight` holds F(x_t, gamma) for every t; an empty vector stands for F = 0.
void stgarch_latent(const StgarchParams& p, const Eigen::Ref<const Eigen::VectorXd>& x2,
                    const Eigen::Ref<const Eigen::VectorXd>& weight, double init,
                    Eigen::Ref<Eigen::VectorXd> out);
void agarch_latent(const AgarchParams& p, const Eigen::Ref<const Eigen::VectorXd>& x, double init,
                   Eigen::Ref<Eigen::VectorXd> out);
void intgarch_latent(const IntgarchParams& p, const Eigen::Ref<const Eigen::VectorXd>& x, double init,
                     Eigen::Ref<Eigen::VectorXd> out);
void star_latent(const StarParams& p, const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Ref<Eigen::VectorXd> out);

/// Conditional mean m(x_{t-1}, ..., x_{t-p}) given lags[k] = x_{t-1-k}.
double star_mean_value(const StarParams& p, const double* lags);

/// One INTGARCH intensity update.
double intgarch_step(const IntgarchParams& p, double x_prev, double lambda_prev);

}  // namespace kernel

/// Repeated filtering of one shared series at many parameter points, the hot
/// path of estimation and identification searches. Caches the transition
/// weights for the last STGARCH gamma, so one instance must not be shared
/// between threads.
class LatentEvaluator {
 public:
  explicit LatentEvaluator(std::shared_ptr<const Eigen::VectorXd> x);

  const Eigen::VectorXd& series() const noexcept { return *x_; }
  Eigen::Index size() const noexcept { return x_->size(); }

  /// Filters at unchecked `theta` into `out` (resized to the series length).
  void evaluate(const AnyParams& theta, Eigen::VectorXd& out);

 private:
  std::shared_ptr<const Eigen::VectorXd> x_;
  Eigen::VectorXd x2_;
  double second_moment_ = 0.0;
  double cached_gamma_;
  Eigen::VectorXd weight_;
};

/// Initial variance for the GARCH-type filters: sample second moment clipped
/// below by omega.
double variance_init(const Eigen::Ref<const Eigen::VectorXd>& x, double omega);

}  // namespace nlts
