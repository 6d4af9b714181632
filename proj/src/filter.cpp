#include "nlts/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlts/transition.hpp"

namespace nlts {

namespace {

constexpr std::size_t kWarmUpCap = 500;

std::size_t geometric_warm_up(double rate) {
  const double steps = std::ceil(std::log(1e-12) / std::log(rate + 1e-9));
  if (!std::isfinite(steps) || steps > static_cast<double>(kWarmUpCap)) return kWarmUpCap;
  return static_cast<std::size_t>(std::max(steps, 0.0));
}

void require_length(const Eigen::Ref<const Eigen::VectorXd>& x, std::size_t warm_up) {
  if (static_cast<std::size_t>(x.size()) < warm_up + 1) {
    throw ValidationError("series length " + std::to_string(x.size()) + " is shorter than warm_up+1 = " +
                          std::to_string(warm_up + 1));
  }
}

}  // namespace

std::size_t default_warm_up(const AnyParams& theta) {
  return std::visit(
      [](const auto& p) -> std::size_t {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StgarchParams>) {
          const auto lags = static_cast<std::size_t>(std::max({p.p(), p.q(), p.d}));
          return std::min(lags + geometric_warm_up(p.beta_sum()), kWarmUpCap);
        } else if constexpr (std::is_same_v<T, AgarchParams>) {
          return std::min<std::size_t>(1 + geometric_warm_up(p.beta), kWarmUpCap);
        } else if constexpr (std::is_same_v<T, IntgarchParams>) {
          return std::min<std::size_t>(1 + geometric_warm_up(p.beta), kWarmUpCap);
        } else {
          return static_cast<std::size_t>(p.p());
        }
      },
      theta);
}

double variance_init(const Eigen::Ref<const Eigen::VectorXd>& x, double omega) {
  const double m2 = x.size() > 0 ? x.squaredNorm() / static_cast<double>(x.size()) : 0.0;
  return std::max(m2, omega);
}

void require_counts(const Eigen::Ref<const Eigen::VectorXd>& x) {
  for (Eigen::Index t = 0; t < x.size(); ++t) {
    const double v = x[t];
    if (!(v >= 0.0) || v != std::floor(v) || !std::isfinite(v)) {
      throw ValidationError("count series must hold non-negative integers (index " + std::to_string(t) + ")");
    }
  }
}

// ---------------------------------------------------------------------------
// Kernels

namespace kernel {

void stgarch_latent(const StgarchParams& p, const Eigen::Ref<const Eigen::VectorXd>& x2,
                    const Eigen::Ref<const Eigen::VectorXd>& weight, double init,
                    Eigen::Ref<Eigen::VectorXd> out) {
  const Eigen::Index n = x2.size();
  const int q = p.q();
  const int pb = p.p();
  const int d = p.d;
  const bool cached = weight.size() == n;
  for (Eigen::Index t = 0; t < n; ++t) {
    double news1 = 0.0;
    double news2 = 0.0;
    for (int i = 1; i <= q && i <= t; ++i) {
      news1 += p.alpha1[i - 1] * x2[t - i];
      news2 += p.alpha2[i - 1] * x2[t - i];
    }
    const double f = (t - d >= 0 && cached) ? weight[t - d] : 0.0;
    double s = p.omega + news1 + news2 * f;
    for (int j = 1; j <= pb; ++j) {
      s += p.beta[j - 1] * (t - j >= 0 ? out[t - j] : init);
    }
    out[t] = s;
  }
}

void agarch_latent(const AgarchParams& p, const Eigen::Ref<const Eigen::VectorXd>& x, double init,
                   Eigen::Ref<Eigen::VectorXd> out) {
  double prev_s = init;
  double prev_x = 0.0;
  for (Eigen::Index t = 0; t < x.size(); ++t) {
    const double s = p.omega + agarch_news_impact(prev_x, p.alpha, p.gamma) + p.beta * prev_s;
    out[t] = s;
    prev_s = s;
    prev_x = x[t];
  }
}

double intgarch_step(const IntgarchParams& p, double x_prev, double lambda_prev) {
  const double excess = std::max(x_prev - static_cast<double>(p.l), 0.0);
  return p.omega + p.alpha1 * x_prev + (p.alpha2 - p.alpha1) * excess + p.beta * lambda_prev;
}

void intgarch_latent(const IntgarchParams& p, const Eigen::Ref<const Eigen::VectorXd>& x, double init,
                     Eigen::Ref<Eigen::VectorXd> out) {
  double prev_l = init;
  double prev_x = 0.0;
  for (Eigen::Index t = 0; t < x.size(); ++t) {
    const double l = intgarch_step(p, prev_x, prev_l);
    out[t] = l;
    prev_l = l;
    prev_x = x[t];
  }
}

double star_mean_value(const StarParams& p, const double* lags) {
  const int order = p.p();
  const double transition_var = lags[p.d - 1];
  double m = 0.0;
  for (Eigen::Index i = 0; i < p.phi.rows(); ++i) {
    double lin = p.phi(i, 0);
    for (int j = 1; j <= order; ++j) lin += p.phi(i, j) * lags[j - 1];
    if (i == 0) {
      m += lin;
    } else {
      m += lin * star_transition(transition_var, p.gamma[i - 1], p.c[i - 1]);
    }
  }
  return m;
}

void star_latent(const StarParams& p, const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Ref<Eigen::VectorXd> out) {
  const int order = p.p();
  std::vector<double> lags(static_cast<std::size_t>(order), 0.0);
  for (Eigen::Index t = 0; t < x.size(); ++t) {
    for (int k = 0; k < order; ++k) lags[k] = (t - 1 - k >= 0) ? x[t - 1 - k] : 0.0;
    out[t] = star_mean_value(p, lags.data());
  }
}

}  // namespace kernel

// ---------------------------------------------------------------------------
// Public filters

LatentPath stgarch_filter(const Valid<StgarchParams>& theta, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const StgarchParams& p = theta.get();
  LatentPath path{Eigen::VectorXd(x.size()), default_warm_up(p), p};
  require_length(x, path.warm_up);
  const Eigen::VectorXd x2 = x.array().square();
  const Eigen::VectorXd weight = x.unaryExpr([&](double v) { return stgarch_transition(v, p.gamma); });
  kernel::stgarch_latent(p, x2, weight, variance_init(x, p.omega), path.values);
  return path;
}

LatentPath agarch_filter(const Valid<AgarchParams>& theta, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const AgarchParams& p = theta.get();
  LatentPath path{Eigen::VectorXd(x.size()), default_warm_up(p), p};
  require_length(x, path.warm_up);
  kernel::agarch_latent(p, x, variance_init(x, p.omega), path.values);
  return path;
}

LatentPath intgarch_filter(const Valid<IntgarchParams>& theta, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const IntgarchParams& p = theta.get();
  require_counts(x);
  LatentPath path{Eigen::VectorXd(x.size()), default_warm_up(p), p};
  require_length(x, path.warm_up);
  kernel::intgarch_latent(p, x, p.omega / (1.0 - p.beta), path.values);
  return path;
}

LatentPath star_mean(const Valid<StarParams>& theta, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const StarParams& p = theta.get();
  LatentPath path{Eigen::VectorXd(x.size()), default_warm_up(p), p};
  require_length(x, path.warm_up);
  kernel::star_latent(p, x, path.values);
  return path;
}

LatentPath filter(const AnyParams& theta, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return std::visit(
      [&](const auto& p) -> LatentPath {
        using T = std::decay_t<decltype(p)>;
        const auto valid = require_valid(p);
        if constexpr (std::is_same_v<T, StgarchParams>) {
          return stgarch_filter(valid, x);
        } else if constexpr (std::is_same_v<T, AgarchParams>) {
          return agarch_filter(valid, x);
        } else if constexpr (std::is_same_v<T, IntgarchParams>) {
          return intgarch_filter(valid, x);
        } else {
          return star_mean(valid, x);
        }
      },
      theta);
}

// ---------------------------------------------------------------------------
// Evaluator

LatentEvaluator::LatentEvaluator(std::shared_ptr<const Eigen::VectorXd> x)
    : x_(std::move(x)), cached_gamma_(std::numeric_limits<double>::quiet_NaN()) {
  x2_ = x_->array().square();
  second_moment_ = x_->size() > 0 ? x2_.sum() / static_cast<double>(x_->size()) : 0.0;
}

void LatentEvaluator::evaluate(const AnyParams& theta, Eigen::VectorXd& out) {
  out.resize(x_->size());
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StgarchParams>) {
          if (!(p.gamma == cached_gamma_)) {
            const double g = p.gamma;
            weight_ = x_->unaryExpr([g](double v) { return stgarch_transition(v, g); });
            cached_gamma_ = g;
          }
          kernel::stgarch_latent(p, x2_, weight_, std::max(second_moment_, p.omega), out);
        } else if constexpr (std::is_same_v<T, AgarchParams>) {
          kernel::agarch_latent(p, *x_, std::max(second_moment_, p.omega), out);
        } else if constexpr (std::is_same_v<T, IntgarchParams>) {
          kernel::intgarch_latent(p, *x_, p.omega / (1.0 - p.beta), out);
        } else {
          kernel::star_latent(p, *x_, out);
        }
      },
      theta);
}

}  // namespace nlts
