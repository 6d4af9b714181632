#include "nlts/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>
#include <vector>

#include "nlts/rng.hpp"

namespace nlts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double finite_or_inf(double v) { return std::isfinite(v) ? v : kInf; }

}  // namespace

LocalResult nelder_mead(const ScalarObjective& f, const Eigen::VectorXd& x0, const NelderMeadOptions& o) {
  const Eigen::Index n = x0.size();
  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> values(static_cast<std::size_t>(n + 1));
  LocalResult result;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    return finite_or_inf(f(x));
  };
  for (Eigen::Index k = 0; k < n; ++k) {
    simplex[static_cast<std::size_t>(k + 1)][k] += o.initial_step * std::max(1.0, std::abs(x0[k]));
  }
  for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(simplex.size());
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  };

  while (result.evaluations < o.max_evaluations) {
    sort_simplex();
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double diameter = 0.0;
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      diameter = std::max(diameter, (simplex[i] - simplex[best]).lpNorm<Eigen::Infinity>());
    }
    const double spread = values[worst] - values[best];
    if (std::isfinite(values[best]) && spread <= o.f_tolerance * (std::abs(values[best]) + 1e-30) &&
        diameter <= o.x_tolerance * (1.0 + simplex[best].lpNorm<Eigen::Infinity>())) {
      result.converged = true;
      break;
    }
    ++result.iterations;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += simplex[order[i]];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
    const double fc = eval(contracted);
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
      values[i] = eval(simplex[i]);
    }
  }
  sort_simplex();
  result.x = simplex[order.front()];
  result.value = values[order.front()];
  if (!result.converged && o.budget_is_convergence) result.converged = std::isfinite(result.value);
  return result;
}

Eigen::VectorXd central_gradient(const ScalarObjective& f, const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = step * std::max(1.0, std::abs(x[k]));
    xp[k] = x[k] + h;
    const double fp = f(xp);
    xp[k] = x[k] - h;
    const double fm = f(xp);
    xp[k] = x[k];
    g[k] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Eigen::VectorXd five_point_gradient(const ScalarObjective& f, const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = step * std::max(1.0, std::abs(x[k]));
    auto at = [&](double offset) {
      xp[k] = x[k] + offset;
      const double v = f(xp);
      xp[k] = x[k];
      return v;
    };
    g[k] = (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
  }
  return g;
}

LocalResult bfgs(const ScalarObjective& f, const Eigen::VectorXd& x0, const BfgsOptions& o) {
  const Eigen::Index n = x0.size();
  LocalResult result;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    return finite_or_inf(f(x));
  };
  auto grad = [&](const Eigen::VectorXd& x) {
    result.evaluations += static_cast<int>(2 * n);
    return central_gradient(f, x, o.step);
  };

  Eigen::VectorXd x = x0;
  double fx = eval(x);
  result.x = x;
  result.value = fx;
  if (!std::isfinite(fx)) return result;
  Eigen::VectorXd g = grad(x);
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
  int stalls = 0;

  for (int it = 0; it < o.max_iterations; ++it) {
    result.iterations = it + 1;
    if (!g.allFinite()) break;
    if (g.lpNorm<Eigen::Infinity>() <= o.gradient_tolerance * (1.0 + std::abs(fx))) {
      result.converged = true;
      break;
    }
    Eigen::VectorXd dir = -H * g;
    if (dir.dot(g) >= 0.0) {
      H.setIdentity();
      dir = -g;
    }
    double t = 1.0;
    Eigen::VectorXd xn;
    double fn = kInf;
    const double slope = dir.dot(g);
    for (int ls = 0; ls < 50; ++ls) {
      xn = x + t * dir;
      fn = eval(xn);
      if (fn <= fx + 1e-4 * t * slope) break;
      t *= 0.5;
    }
    if (!(fn < fx)) {
      // No descent along the quasi-Newton direction: restart once from steepest descent.
      if (H.isIdentity()) {
        result.converged = g.lpNorm<Eigen::Infinity>() <= 1e-4 * (1.0 + std::abs(fx));
        break;
      }
      H.setIdentity();
      continue;
    }
    const Eigen::VectorXd gn = grad(xn);
    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd y = gn - g;
    const double sy = s.dot(y);
    const double decrease = fx - fn;
    x = xn;
    fx = fn;
    g = gn;
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    if (decrease <= o.f_tolerance * (1.0 + std::abs(fx))) {
      if (++stalls >= 3) {
        result.converged = true;
        break;
      }
    } else {
      stalls = 0;
    }
  }
  result.x = x;
  result.value = fx;
  return result;
}

LocalResult levenberg_marquardt(const ResidualFunction& residual, const Eigen::VectorXd& x0,
                                const LevenbergMarquardtOptions& o) {
  const Eigen::Index n = x0.size();
  LocalResult result;
  Eigen::VectorXd r;
  auto eval = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    ++result.evaluations;
    residual(x, out);
    const double v = out.squaredNorm();
    return finite_or_inf(v);
  };

  Eigen::VectorXd x = x0;
  double fx = eval(x, r);
  result.x = x;
  result.value = fx;
  if (!std::isfinite(fx)) return result;

  Eigen::MatrixXd J(r.size(), n);
  Eigen::VectorXd rp, rm, rn;
  double mu = 1e-3;
  bool need_jacobian = true;
  Eigen::MatrixXd A;
  Eigen::VectorXd g;

  for (int it = 0; it < o.max_iterations; ++it) {
    result.iterations = it + 1;
    if (fx <= o.target) {
      result.converged = true;
      break;
    }
    if (need_jacobian) {
      Eigen::VectorXd xp = x;
      bool finite = true;
      for (Eigen::Index k = 0; k < n; ++k) {
        const double h = o.step * std::max(1.0, std::abs(x[k]));
        xp[k] = x[k] + h;
        const double fp = eval(xp, rp);
        xp[k] = x[k] - h;
        const double fm = eval(xp, rm);
        xp[k] = x[k];
        if (!std::isfinite(fp) || !std::isfinite(fm)) finite = false;
        J.col(k) = (rp - rm) / (2.0 * h);
      }
      if (!finite || !J.allFinite()) break;
      A = J.transpose() * J;
      g = J.transpose() * r;
      need_jacobian = false;
      if (g.lpNorm<Eigen::Infinity>() <= 1e-300) {
        result.converged = true;
        break;
      }
    }
    Eigen::MatrixXd damped = A;
    for (Eigen::Index k = 0; k < n; ++k) damped(k, k) += mu * std::max(A(k, k), 1e-12);
    const Eigen::VectorXd delta = damped.ldlt().solve(-g);
    if (!delta.allFinite()) {
      mu *= 10.0;
      if (mu > 1e16) break;
      continue;
    }
    const Eigen::VectorXd xn = x + delta;
    const double fn = eval(xn, rn);
    if (fn < fx) {
      const double decrease = fx - fn;
      const double step_size = delta.lpNorm<Eigen::Infinity>();
      x = xn;
      fx = fn;
      std::swap(r, rn);
      mu = std::max(mu / 3.0, 1e-12);
      need_jacobian = true;
      if (fx <= o.target) {
        result.converged = true;
        break;
      }
      if (decrease <= o.f_tolerance * fx || step_size <= o.x_tolerance * (1.0 + x.lpNorm<Eigen::Infinity>())) {
        result.converged = true;
        break;
      }
    } else {
      mu *= 4.0;
      if (mu > 1e16) {
        // Damping exhausted: no descent direction left at this resolution.
        result.converged = true;
        break;
      }
    }
  }
  result.x = x;
  result.value = fx;
  return result;
}

Eigen::MatrixXd latin_hypercube(int count, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                std::uint64_t seed, std::uint32_t stream) {
  const Eigen::Index dim = lower.size();
  Eigen::MatrixXd points(count, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    RandomStream rng(seed, stream, static_cast<std::uint64_t>(k));
    std::vector<int> strata(static_cast<std::size_t>(count));
    std::iota(strata.begin(), strata.end(), 0);
    for (int i = count - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng.uniform() * (i + 1));
      std::swap(strata[static_cast<std::size_t>(i)], strata[static_cast<std::size_t>(std::min(j, i))]);
    }
    for (int i = 0; i < count; ++i) {
      const double u = (strata[static_cast<std::size_t>(i)] + rng.uniform()) / count;
      points(i, k) = lower[k] + u * (upper[k] - lower[k]);
    }
  }
  return points;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

int default_threads() {
  if (const char* env = std::getenv("NLTS_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

}  // namespace nlts
