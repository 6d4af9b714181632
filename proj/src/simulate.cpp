#include "nlts/simulate.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "nlts/filter.hpp"
#include "nlts/rng.hpp"
#include "nlts/stationarity.hpp"
#include "nlts/transition.hpp"

namespace nlts {

namespace {

std::size_t total_length(std::size_t n, std::size_t burn_in) {
  if (n > std::numeric_limits<std::size_t>::max() - burn_in ||
      n + burn_in > static_cast<std::size_t>(std::numeric_limits<Eigen::Index>::max())) {
    throw ValidationError("n + burn_in overflows");
  }
  return n + burn_in;
}

SimPath make_path(Family family, std::size_t n, std::size_t burn_in, std::uint64_t seed, std::uint32_t path_id) {
  if (path_id > streams::path_mask) throw ValidationError("path_id must be below 2^24");
  SimPath path;
  path.family = family;
  path.x.resize(static_cast<Eigen::Index>(n));
  path.latent.resize(static_cast<Eigen::Index>(n));
  path.seed = seed;
  path.path_id = path_id;
  path.burn_in = burn_in;
  return path;
}

void retain(SimPath& path, const std::vector<double>& x, const std::vector<double>& latent, std::size_t offset) {
  for (Eigen::Index t = 0; t < path.x.size(); ++t) {
    path.x[t] = x[offset + static_cast<std::size_t>(t)];
    path.latent[t] = latent[offset + static_cast<std::size_t>(t)];
  }
}

}  // namespace

SimPath simulate_stgarch(const Valid<StgarchParams>& params, std::size_t n, std::size_t burn_in,
                         const InnovationSpec& innovation, std::uint64_t seed, std::uint32_t path_id) {
  const StgarchParams& p = params.get();
  validate(innovation).value();
  const std::size_t total = total_length(n, burn_in);
  SimPath path = make_path(Family::stgarch, n, burn_in, seed, path_id);
  path.innovation = innovation;
  if (p.p() + p.q() > 2) {
    path.warnings.emplace_back("stationarity not verified: no criterion for general STGARCH(p,q,d)");
  }

  const int q = p.q();
  const int pb = p.p();
  const std::size_t lag = static_cast<std::size_t>(std::max({q, pb, p.d}));
  const double sigma2_init = p.omega / (1.0 - p.beta_sum());
  std::vector<double> x(lag + total, 0.0);
  std::vector<double> s2(lag + total, sigma2_init);
  for (std::size_t k = lag; k < lag + total; ++k) {
    double news1 = 0.0;
    double news2 = 0.0;
    for (int i = 1; i <= q; ++i) {
      const double xi = x[k - i];
      news1 += p.alpha1[i - 1] * xi * xi;
      news2 += p.alpha2[i - 1] * xi * xi;
    }
    double s = p.omega + news1 + news2 * stgarch_transition(x[k - p.d], p.gamma);
    for (int j = 1; j <= pb; ++j) s += p.beta[j - 1] * s2[k - j];
    s2[k] = s;
    RandomStream rng(seed, path_id, k - lag);
    x[k] = std::sqrt(s) * rng.innovation(innovation);
  }
  retain(path, x, s2, lag + burn_in);
  return path;
}

SimPath simulate_agarch(const Valid<AgarchParams>& params, std::size_t n, std::size_t burn_in,
                        const InnovationSpec& innovation, std::uint64_t seed, std::uint32_t path_id) {
  const AgarchParams& p = params.get();
  validate(innovation).value();
  const std::size_t total = total_length(n, burn_in);
  SimPath path = make_path(Family::agarch, n, burn_in, seed, path_id);
  path.innovation = innovation;
  std::vector<double> x(total);
  std::vector<double> s2(total);
  double prev_x = 0.0;
  double prev_s = p.omega / (1.0 - p.beta);
  for (std::size_t t = 0; t < total; ++t) {
    const double s = p.omega + agarch_news_impact(prev_x, p.alpha, p.gamma) + p.beta * prev_s;
    RandomStream rng(seed, path_id, t);
    s2[t] = s;
    x[t] = std::sqrt(s) * rng.innovation(innovation);
    prev_x = x[t];
    prev_s = s;
  }
  retain(path, x, s2, burn_in);
  return path;
}

SimPath simulate_intgarch(const Valid<IntgarchParams>& params, std::size_t n, std::size_t burn_in,
                          std::uint64_t seed, std::uint32_t path_id) {
  const IntgarchParams& p = params.get();
  const StationarityReport cond = intgarch_condition(params);
  if (cond.verdict != Verdict::pass) {
    throw ConditionError("INTGARCH stationarity condition beta + max(alpha1, alpha2) < 1 fails (value " +
                         format_double(cond.value) + ")");
  }
  const std::size_t total = total_length(n, burn_in);
  SimPath path = make_path(Family::intgarch, n, burn_in, seed, path_id);
  std::vector<double> x(total);
  std::vector<double> lambda(total);
  double prev_x = 0.0;
  double prev_l = p.omega / (1.0 - p.beta);
  for (std::size_t t = 0; t < total; ++t) {
    const double l = kernel::intgarch_step(p, prev_x, prev_l);
    RandomStream rng(seed, path_id, t);
    lambda[t] = l;
    x[t] = static_cast<double>(rng.poisson(l));
    prev_x = x[t];
    prev_l = l;
  }
  retain(path, x, lambda, burn_in);
  return path;
}

SimPath simulate_star(const Valid<StarParams>& params, std::size_t n, std::size_t burn_in, double noise_sd,
                      std::uint64_t seed, bool allow_unverified, std::uint32_t path_id) {
  const StarParams& p = params.get();
  if (!(noise_sd > 0.0) || !std::isfinite(noise_sd)) throw ValidationError("noise_sd > 0");
  const bool stationary = star_partial_sum_condition(params).verdict == Verdict::pass ||
                          star_sup_condition(params).verdict == Verdict::pass;
  if (!stationary && !allow_unverified) {
    throw ConditionError("neither STAR stationarity condition holds; set allow_unverified to override");
  }
  const std::size_t total = total_length(n, burn_in);
  SimPath path = make_path(Family::star, n, burn_in, seed, path_id);
  path.noise_sd = noise_sd;
  path.innovation = InnovationSpec::normal();
  if (!stationary) path.warnings.emplace_back("stationarity not verified (override)");

  const auto order = static_cast<std::size_t>(p.p());
  std::vector<double> x(order + total, 0.0);
  std::vector<double> m(order + total, 0.0);
  std::vector<double> lags(order);
  bool diverged = false;
  for (std::size_t k = order; k < order + total; ++k) {
    for (std::size_t j = 0; j < order; ++j) lags[j] = x[k - 1 - j];
    m[k] = kernel::star_mean_value(p, lags.data());
    RandomStream rng(seed, path_id, k - order);
    x[k] = m[k] + noise_sd * rng.normal();
    if (!std::isfinite(x[k])) throw NumericalError("STAR path diverged to a non-finite value");
    if (std::abs(x[k]) >= 1e10) diverged = true;
  }
  if (diverged) path.warnings.emplace_back("divergence: |x_t| reached 1e10");
  retain(path, x, m, order + burn_in);
  return path;
}

SimPath simulate(const AnyParams& params, const SimulationRequest& r) {
  return std::visit(
      [&](const auto& p) -> SimPath {
        using T = std::decay_t<decltype(p)>;
        const auto valid = require_valid(p);
        if constexpr (std::is_same_v<T, StgarchParams>) {
          return simulate_stgarch(valid, r.n, r.burn_in, r.innovation, r.seed, r.path_id);
        } else if constexpr (std::is_same_v<T, AgarchParams>) {
          return simulate_agarch(valid, r.n, r.burn_in, r.innovation, r.seed, r.path_id);
        } else if constexpr (std::is_same_v<T, IntgarchParams>) {
          return simulate_intgarch(valid, r.n, r.burn_in, r.seed, r.path_id);
        } else {
          return simulate_star(valid, r.n, r.burn_in, r.noise_sd, r.seed, r.allow_unverified, r.path_id);
        }
      },
      params);
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const Eigen::Ref<const Eigen::VectorXd>& x,
               const Eigen::Ref<const Eigen::VectorXd>& latent) {
  out << "t,x,latent\n";
  for (Eigen::Index t = 0; t < x.size(); ++t) {
    out << t << ',' << format_double(x[t]) << ',' << format_double(latent[t]) << '\n';
  }
}

void write_csv(std::ostream& out, const SimPath& path) { write_csv(out, path.x, path.latent); }

Eigen::VectorXd read_series_csv(std::istream& in) {
  std::string line;
  std::vector<double> values;
  int column = 0;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!header_seen) {
      header_seen = true;
      bool numeric = true;
      double probe;
      for (const auto& c : cells) {
        auto res = std::from_chars(c.data(), c.data() + c.size(), probe);
        if (res.ec != std::errc{}) numeric = false;
      }
      if (!numeric) {
        column = -1;
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (cells[i] == "x") column = static_cast<int>(i);
        }
        if (column < 0) {
          if (cells.size() == 1) {
            column = 0;
          } else {
            throw ValidationError("CSV header has no 'x' column");
          }
        }
        continue;
      }
      if (cells.size() != 1) throw ValidationError("CSV without header must have one column");
    }
    if (static_cast<std::size_t>(column) >= cells.size()) {
      throw ValidationError("CSV line " + std::to_string(line_no) + " is missing the x column");
    }
    const std::string& c = cells[static_cast<std::size_t>(column)];
    double v;
    auto res = std::from_chars(c.data(), c.data() + c.size(), v);
    if (res.ec != std::errc{}) throw ValidationError("CSV line " + std::to_string(line_no) + ": not a number");
    values.push_back(v);
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace nlts
