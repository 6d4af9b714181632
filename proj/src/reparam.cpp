#include "nlts/reparam.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace nlts {

namespace {

constexpr double kEdge = 1e-12;

double logistic(double u) { return u >= 0.0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u)); }

double logit(double p) {
  p = std::clamp(p, kEdge, 1.0 - kEdge);
  return std::log(p / (1.0 - p));
}

double safe_log(double v) { return std::log(std::max(v, 1e-300)); }

double log_uniform(double u, double lo, double hi) { return lo * std::pow(hi / lo, u); }

double uniform(double u, double lo, double hi) { return lo + u * (hi - lo); }

}  // namespace

DataScale data_scale(const Eigen::Ref<const Eigen::VectorXd>& x) {
  DataScale s;
  const auto n = x.size();
  if (n == 0) return s;
  s.mean = x.mean();
  s.second_moment = x.squaredNorm() / static_cast<double>(n);
  s.sd = std::sqrt(std::max(s.second_moment - s.mean * s.mean, 0.0));
  std::vector<double> sorted(x.data(), x.data() + n);
  std::sort(sorted.begin(), sorted.end());
  s.q10 = sorted[static_cast<std::size_t>(0.1 * static_cast<double>(n - 1))];
  s.q90 = sorted[static_cast<std::size_t>(0.9 * static_cast<double>(n - 1))];
  if (!(s.sd > 0.0)) s.sd = 1.0;
  if (!(s.second_moment > 0.0)) s.second_moment = 1.0;
  if (!(s.q90 > s.q10)) {
    s.q10 = s.mean - s.sd;
    s.q90 = s.mean + s.sd;
  }
  return s;
}

ParameterMap::ParameterMap(AnyParams shape, SearchBox box) : shape_(std::move(shape)), box_(box) {
  const auto n = static_cast<std::size_t>(coordinates(shape_).size());
  fixed_.assign(n, std::nullopt);
  free_.resize(n);
  for (std::size_t k = 0; k < n; ++k) free_[k] = static_cast<Eigen::Index>(k);
}

void ParameterMap::fix(Eigen::Index natural_index, double value) {
  fixed_.at(static_cast<std::size_t>(natural_index)) = value;
  free_.clear();
  for (std::size_t k = 0; k < fixed_.size(); ++k) {
    if (!fixed_[k]) free_.push_back(static_cast<Eigen::Index>(k));
  }
}

AnyParams ParameterMap::decode(const Eigen::Ref<const Eigen::VectorXd>& u_free) const {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(natural_size());
  for (std::size_t i = 0; i < free_.size(); ++i) u[free_[i]] = u_free[static_cast<Eigen::Index>(i)];
  Eigen::VectorXd theta(natural_size());
  auto pick = [&](Eigen::Index k, double computed) {
    const auto& f = fixed_[static_cast<std::size_t>(k)];
    theta[k] = f ? *f : computed;
    return theta[k];
  };

  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StgarchParams>) {
          const Eigen::Index q = p.q();
          const Eigen::Index pb = p.p();
          pick(0, box_.stgarch_gamma_max * logistic(u[0]));
          pick(1, std::exp(u[1]));
          for (Eigen::Index i = 0; i < q; ++i) {
            const double a1 = pick(2 + i, std::exp(u[2 + i]));
            pick(2 + q + i, 2.0 * a1 * std::tanh(u[2 + q + i]));
          }
          const Eigen::Index b0 = 2 + 2 * q;
          double fixed_sum = 0.0;
          double denom = 1.0;
          for (Eigen::Index j = 0; j < pb; ++j) {
            const auto& f = fixed_[static_cast<std::size_t>(b0 + j)];
            if (f) {
              fixed_sum += *f;
            } else {
              denom += std::exp(u[b0 + j]);
            }
          }
          for (Eigen::Index j = 0; j < pb; ++j) pick(b0 + j, (1.0 - fixed_sum) * std::exp(u[b0 + j]) / denom);
        } else if constexpr (std::is_same_v<T, AgarchParams>) {
          pick(0, std::exp(u[0]));
          pick(1, std::exp(u[1]));
          pick(2, logistic(u[2]));
          pick(3, std::tanh(u[3]));
        } else if constexpr (std::is_same_v<T, IntgarchParams>) {
          pick(0, std::exp(u[0]));
          for (Eigen::Index k = 1; k < 4; ++k) pick(k, logistic(u[k]));
        } else {
          const Eigen::Index nphi = p.phi.size();
          const Eigen::Index m = p.M();
          for (Eigen::Index k = 0; k < nphi; ++k) pick(k, u[k]);
          for (Eigen::Index i = 0; i < m; ++i) {
            pick(nphi + i, box_.star_gamma_min + (box_.star_gamma_max - box_.star_gamma_min) * logistic(u[nphi + i]));
          }
          double c = 0.0;
          for (Eigen::Index i = 0; i < m; ++i) {
            const Eigen::Index k = nphi + m + i;
            c = pick(k, i == 0 ? u[k] : c + std::exp(u[k]));
          }
        }
      },
      shape_);
  return with_coordinates(shape_, theta);
}

Eigen::VectorXd ParameterMap::full_encode(const AnyParams& params) const {
  const Eigen::VectorXd theta = coordinates(params);
  Eigen::VectorXd u(theta.size());
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StgarchParams>) {
          const Eigen::Index q = p.q();
          const Eigen::Index pb = p.p();
          u[0] = logit(p.gamma / box_.stgarch_gamma_max);
          u[1] = safe_log(p.omega);
          for (Eigen::Index i = 0; i < q; ++i) {
            const double a1 = p.alpha1[static_cast<std::size_t>(i)];
            u[2 + i] = safe_log(a1);
            const double r = a1 > 0.0 ? p.alpha2[static_cast<std::size_t>(i)] / (2.0 * a1) : 0.0;
            u[2 + q + i] = std::atanh(std::clamp(r, -1.0 + kEdge, 1.0 - kEdge));
          }
          const double rest = std::max(1.0 - p.beta_sum(), kEdge);
          for (Eigen::Index j = 0; j < pb; ++j) {
            u[2 + 2 * q + j] = std::log(std::max(p.beta[static_cast<std::size_t>(j)], kEdge) / rest);
          }
        } else if constexpr (std::is_same_v<T, AgarchParams>) {
          u[0] = safe_log(p.omega);
          u[1] = safe_log(p.alpha);
          u[2] = logit(p.beta);
          u[3] = std::atanh(std::clamp(p.gamma, -1.0 + kEdge, 1.0 - kEdge));
        } else if constexpr (std::is_same_v<T, IntgarchParams>) {
          u[0] = safe_log(p.omega);
          u[1] = logit(p.alpha1);
          u[2] = logit(p.alpha2);
          u[3] = logit(p.beta);
        } else {
          const Eigen::Index nphi = p.phi.size();
          const Eigen::Index m = p.M();
          u.head(nphi) = theta.head(nphi);
          for (Eigen::Index i = 0; i < m; ++i) {
            u[nphi + i] = logit((p.gamma[i] - box_.star_gamma_min) / (box_.star_gamma_max - box_.star_gamma_min));
          }
          for (Eigen::Index i = 0; i < m; ++i) {
            u[nphi + m + i] = i == 0 ? p.c[0] : safe_log(p.c[i] - p.c[i - 1]);
          }
        }
      },
      params);
  return u;
}

Eigen::VectorXd ParameterMap::encode(const AnyParams& theta) const {
  const Eigen::VectorXd u = full_encode(theta);
  Eigen::VectorXd out(size());
  for (std::size_t i = 0; i < free_.size(); ++i) out[static_cast<Eigen::Index>(i)] = u[free_[i]];
  return out;
}

AnyParams start_point(const AnyParams& shape, const Eigen::Ref<const Eigen::VectorXd>& z, const DataScale& s) {
  Eigen::VectorXd theta = coordinates(shape);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StgarchParams>) {
          const Eigen::Index q = p.q();
          const Eigen::Index pb = p.p();
          theta[0] = log_uniform(z[0], 0.2, 20.0);
          theta[1] = log_uniform(z[1], 0.02 * s.second_moment, 0.6 * s.second_moment);
          for (Eigen::Index i = 0; i < q; ++i) {
            theta[2 + i] = log_uniform(z[2 + i], 0.02, 0.4) / static_cast<double>(q);
            theta[2 + q + i] = 2.0 * theta[2 + i] * 0.9 * (2.0 * z[2 + q + i] - 1.0);
          }
          double sum = 0.0;
          for (Eigen::Index j = 0; j < pb; ++j) {
            theta[2 + 2 * q + j] = uniform(z[2 + 2 * q + j], 0.05, 0.9) / static_cast<double>(pb);
            sum += theta[2 + 2 * q + j];
          }
          if (sum > 0.95) theta.tail(pb) *= 0.95 / sum;
        } else if constexpr (std::is_same_v<T, AgarchParams>) {
          theta[0] = log_uniform(z[0], 0.02 * s.second_moment, 0.6 * s.second_moment);
          theta[1] = log_uniform(z[1], 0.02, 0.4);
          theta[2] = uniform(z[2], 0.05, 0.9);
          theta[3] = uniform(z[3], -0.9, 0.9);
        } else if constexpr (std::is_same_v<T, IntgarchParams>) {
          const double mean = std::max(s.mean, 0.1);
          theta[0] = log_uniform(z[0], 0.05 * mean, 0.8 * mean);
          for (Eigen::Index k = 1; k < 4; ++k) theta[k] = uniform(z[k], 0.02, 0.7);
        } else {
          const Eigen::Index rows = p.phi.rows();
          const Eigen::Index cols = p.phi.cols();
          const Eigen::Index m = p.M();
          for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j) {
              const Eigen::Index k = i * cols + j;
              theta[k] = j == 0 ? uniform(z[k], -s.sd, s.sd) : uniform(z[k], -0.9, 0.9);
            }
          }
          const Eigen::Index nphi = rows * cols;
          for (Eigen::Index i = 0; i < m; ++i) theta[nphi + i] = log_uniform(z[nphi + i], 0.5 / s.sd, 20.0 / s.sd);
          std::vector<double> c(static_cast<std::size_t>(m));
          for (Eigen::Index i = 0; i < m; ++i) c[static_cast<std::size_t>(i)] = uniform(z[nphi + m + i], s.q10, s.q90);
          std::sort(c.begin(), c.end());
          for (Eigen::Index i = 1; i < m; ++i) {
            auto& ci = c[static_cast<std::size_t>(i)];
            ci = std::max(ci, c[static_cast<std::size_t>(i - 1)] + 1e-3 * s.sd);
          }
          for (Eigen::Index i = 0; i < m; ++i) theta[nphi + m + i] = c[static_cast<std::size_t>(i)];
        }
      },
      shape);
  return with_coordinates(shape, theta);
}

}  // namespace nlts
