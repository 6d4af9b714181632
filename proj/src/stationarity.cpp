#include "nlts/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "nlts/rng.hpp"
#include "nlts/transition.hpp"

namespace nlts {

namespace {

constexpr std::size_t kBatch = 1 << 16;

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};

// Batches own one RNG cell each and are reduced in batch order.
Moments monte_carlo_mean(const std::function<double(double)>& g, const InnovationSpec& innovation,
                         std::size_t n, std::uint64_t seed) {
  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  const std::size_t batches = (n + kBatch - 1) / kBatch;
  for (std::size_t b = 0; b < batches; ++b) {
    RandomStream rng(seed, streams::monte_carlo, b);
    const std::size_t count = std::min(kBatch, n - b * kBatch);
    long double bs = 0.0L;
    long double bss = 0.0L;
    for (std::size_t i = 0; i < count; ++i) {
      const double v = g(rng.innovation(innovation));
      bs += v;
      bss += static_cast<long double>(v) * v;
    }
    sum += bs;
    sum_sq += bss;
  }
  const auto nd = static_cast<long double>(n);
  Moments m;
  m.mean = static_cast<double>(sum / nd);
  if (!std::isfinite(m.mean)) return m;
  const long double var = (sum_sq - sum * sum / nd) / (nd - 1.0L);
  m.std_error = static_cast<double>(std::sqrt(std::max(var, 0.0L) / nd));
  return m;
}

Verdict mc_verdict(double estimate, double se) {
  if (se == 0.0 || !std::isfinite(estimate)) return estimate < 0.0 ? Verdict::pass : Verdict::fail;
  if (estimate < -3.0 * se) return Verdict::pass;
  if (estimate > 3.0 * se) return Verdict::fail;
  return Verdict::undetermined;
}

StationarityReport log_moment(std::string name, double beta, bool degenerate,
                              const std::function<double(double)>& g, const InnovationSpec& innovation,
                              std::size_t mc_n, std::uint64_t seed) {
  validate(innovation).value();
  StationarityReport r;
  r.condition = std::move(name);
  r.threshold = 0.0;
  if (degenerate) {
    r.value = std::log(beta);
    r.mc_std_error = 0.0;
    r.mc_n = 0;
  } else {
    if (mc_n < 2) throw ValidationError("mc_n must be at least 2");
    const Moments m = monte_carlo_mean(g, innovation, mc_n, seed);
    r.value = m.mean;
    r.mc_std_error = m.std_error;
    r.mc_n = mc_n;
  }
  r.components = {r.value};
  r.verdict = mc_verdict(r.value, *r.mc_std_error);
  return r;
}

}  // namespace

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::undetermined: return "undetermined";
  }
  return "undetermined";
}

StationarityReport stgarch111_logmoment(const Valid<StgarchParams>& params, const InnovationSpec& innovation,
                                        std::size_t mc_n, std::uint64_t seed) {
  const StgarchParams& p = params.get();
  if (p.p() != 1 || p.q() != 1 || p.d != 1) {
    throw ValidationError("stgarch111_logmoment requires p = q = d = 1");
  }
  const double b = p.beta[0];
  const double a = p.alpha1[0] + 0.5 * std::abs(p.alpha2[0]);
  return log_moment("stgarch111_logmoment", b, a == 0.0,
                    [b, a](double eta) { return std::log(b + a * eta * eta); }, innovation, mc_n, seed);
}

StationarityReport agarch_logmoment(const Valid<AgarchParams>& params, const InnovationSpec& innovation,
                                    std::size_t mc_n, std::uint64_t seed) {
  const AgarchParams& p = params.get();
  return log_moment("agarch_logmoment", p.beta, p.alpha == 0.0,
                    [p](double eta) { return std::log(p.beta + agarch_news_impact(eta, p.alpha, p.gamma)); },
                    innovation, mc_n, seed);
}

StationarityReport intgarch_condition(const Valid<IntgarchParams>& params) {
  const IntgarchParams& p = params.get();
  StationarityReport r;
  r.condition = "intgarch_contraction";
  r.value = p.beta + std::max(p.alpha1, p.alpha2);
  r.components = {r.value};
  r.threshold = 1.0;
  r.verdict = r.value < 1.0 ? Verdict::pass : Verdict::fail;
  return r;
}

StationarityReport star_sup_condition(const Valid<StarParams>& params, const SupGridSpec& grid) {
  const StarParams& p = params.get();
  const int M = p.M();
  const double gamma_min = p.gamma.minCoeff();
  const double lo = p.c[0] - grid.span / gamma_min;
  const double hi = p.c[M - 1] + grid.span / gamma_min;

  auto sup_on_grid = [&](int j, std::size_t points) {
    // x -> -inf gives G = 0, x -> +inf gives G = 1.
    double sup = std::abs(p.phi(0, j));
    sup = std::max(sup, std::abs(p.phi.col(j).sum()));
    for (std::size_t k = 0; k < points; ++k) {
      const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
      double g = p.phi(0, j);
      for (int i = 1; i <= M; ++i) g += p.phi(i, j) * star_transition(x, p.gamma[i - 1], p.c[i - 1]);
      sup = std::max(sup, std::abs(g));
    }
    return sup;
  };

  StationarityReport r;
  r.condition = "star_sup";
  r.threshold = 1.0;
  for (int j = 1; j <= p.p(); ++j) {
    std::size_t points = std::max<std::size_t>(grid.points, 2);
    double sup = sup_on_grid(j, points);
    while (points * 2 <= grid.max_points) {
      points *= 2;
      const double refined = sup_on_grid(j, points);
      const bool settled = std::abs(refined - sup) < grid.tolerance;
      sup = refined;
      if (settled) break;
    }
    r.components.push_back(sup);
  }
  r.value = 0.0;
  for (double s : r.components) r.value += s;
  r.verdict = r.value < 1.0 ? Verdict::pass : Verdict::fail;
  return r;
}

StationarityReport star_partial_sum_condition(const Valid<StarParams>& params) {
  const StarParams& p = params.get();
  StationarityReport r;
  r.condition = "star_partial_sum";
  r.threshold = 1.0;
  Eigen::RowVectorXd cumulative = Eigen::RowVectorXd::Zero(p.p());
  for (Eigen::Index i = 0; i < p.phi.rows(); ++i) {
    cumulative += p.phi.row(i).tail(p.p());
    r.components.push_back(cumulative.cwiseAbs().sum());
  }
  r.value = *std::max_element(r.components.begin(), r.components.end());
  r.verdict = r.value < 1.0 ? Verdict::pass : Verdict::fail;
  return r;
}

}  // namespace nlts
