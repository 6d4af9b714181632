#include "nlts/experiments.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "nlts/estimate.hpp"
#include "nlts/filter.hpp"
#include "nlts/ident.hpp"
#include "nlts/mixture.hpp"
#include "nlts/optimize.hpp"
#include "nlts/params_json.hpp"
#include "nlts/report_json.hpp"
#include "nlts/rng.hpp"
#include "nlts/simulate.hpp"
#include "nlts/stationarity.hpp"

#ifndef NLTS_VERSION
#define NLTS_VERSION "0.0.0"
#endif

namespace nlts::experiments {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Config access

class Section {
 public:
  Section(const json& doc, std::string name) : doc_(doc), name_(std::move(name)) {
    if (!doc_.is_object()) throw ValidationError("'" + name_ + "' must be an object");
  }

  void allow(const std::set<std::string>& keys) const {
    std::vector<std::string> bad;
    for (auto it = doc_.begin(); it != doc_.end(); ++it) {
      if (!keys.count(it.key())) bad.push_back("unknown key '" + name_ + "." + it.key() + "'");
    }
    if (!bad.empty()) throw ValidationError(bad);
  }

  bool has(const std::string& key) const { return doc_.contains(key); }
  const json& raw(const std::string& key) const {
    if (!has(key)) throw ValidationError("missing key '" + name_ + "." + key + "'");
    return doc_.at(key);
  }

  double number(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_number()) throw ValidationError("'" + name_ + "." + key + "' must be a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ValidationError("'" + name_ + "." + key + "' must be an integer");
    return v.get<long long>();
  }
  long long integer(const std::string& key, long long fallback) const { return has(key) ? integer(key) : fallback; }

  std::size_t count(const std::string& key) const {
    const long long v = integer(key);
    if (v < 0) throw ValidationError("'" + name_ + "." + key + "' must be non-negative");
    return static_cast<std::size_t>(v);
  }
  std::size_t count(const std::string& key, std::size_t fallback) const { return has(key) ? count(key) : fallback; }

  std::uint64_t seed(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ValidationError("'" + name_ + "." + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ValidationError("'" + name_ + "." + key + "' must be true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_array()) throw ValidationError("'" + name_ + "." + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ValidationError("'" + name_ + "." + key + "' must hold numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const {
    return has(key) ? numbers(key) : fallback;
  }

  std::vector<int> integers(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_array()) throw ValidationError("'" + name_ + "." + key + "' must be an array");
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer()) throw ValidationError("'" + name_ + "." + key + "' must hold integers");
      out.push_back(e.get<int>());
    }
    return out;
  }

  std::vector<std::uint64_t> seeds(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_array() || v.empty()) throw ValidationError("'" + name_ + "." + key + "' must be a non-empty array");
    std::vector<std::uint64_t> out;
    for (const auto& e : v) {
      if (!e.is_number_integer() || e.get<long long>() < 0) {
        throw ValidationError("'" + name_ + "." + key + "' must hold non-negative integers");
      }
      out.push_back(e.get<std::uint64_t>());
    }
    return out;
  }

  std::pair<double, double> range(const std::string& key, std::pair<double, double> fallback) const {
    if (!has(key)) return fallback;
    const auto v = numbers(key);
    if (v.size() != 2 || !(v[0] <= v[1])) throw ValidationError("'" + name_ + "." + key + "' must be [low, high]");
    return {v[0], v[1]};
  }

  Section sub(const std::string& key) const { return Section(raw(key), name_ + "." + key); }
  const json& doc() const { return doc_; }

 private:
  const json& doc_;
  std::string name_;
};

const std::set<std::string> kTopKeys{"schema_version", "command", "model", "models", "run", "output_dir", "description"};

const std::set<std::string> kBoxKeys{"gamma_max", "star_gamma_min", "star_gamma_max"};

std::set<std::string> with_box(std::set<std::string> keys) {
  keys.insert(kBoxKeys.begin(), kBoxKeys.end());
  return keys;
}

const std::map<std::string, std::set<std::string>>& run_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"simulate", {"n", "burn_in", "seed", "innovation", "noise_sd", "allow_unverified", "path_id", "consistency_from"}},
      {"fit", with_box({"n", "burn_in", "seed", "innovation", "noise_sd", "allow_unverified", "data_csv", "starts",
                        "search_seed", "integer_grid", "warm_up", "nm_evaluations", "min_length"})},
      {"ident-scan", with_box({"n", "burn_in", "seeds", "starts", "search_seed", "eps_rel", "rho", "innovation",
                               "noise_sd", "allow_unverified", "integer_grid", "warm_up", "nm_evaluations", "curvature",
                               "profile"})},
      {"partial-ident", with_box({"n", "burn_in", "seed", "innovation", "gamma_grid", "alpha2_fractions", "eps_rel",
                                  "rho", "perturbation", "refine_gammas", "subvector_tolerance", "warm_up",
                                  "curvature"})},
      {"lemma-check", {"pairs", "sweep", "weight_sd", "delta", "initial_order", "max_order"}},
      {"laplace-check", {"count", "seed", "gamma", "u", "c", "tolerance"}},
      {"stationarity", {"mc_n", "seeds", "innovation", "grid_points"}},
      {"agarch-demo", {"truths", "seed", "grid", "alpha", "gamma", "tolerance"}},
  };
  return keys;
}

bool needs_model(const std::string& command) {
  return command == "simulate" || command == "fit" || command == "ident-scan" || command == "partial-ident";
}

void require_constraints(const AnyParams& params) {
  auto v = violations(params);
  if (v.empty()) return;
  for (auto& s : v) s = "model violates " + s;
  throw ValidationError(v);
}

AnyParams model_of(const json& config) {
  const AnyParams params = params_from_json(config.at("model"));
  require_constraints(params);
  return params;
}

InnovationSpec innovation_of(const Section& run) {
  if (!run.has("innovation")) return InnovationSpec::normal();
  const InnovationSpec spec = innovation_from_json(run.raw("innovation"));
  if (auto v = violations(spec); !v.empty()) throw ValidationError(v);
  return spec;
}

SearchBox box_of(const Section& run) {
  SearchBox box;
  box.stgarch_gamma_max = run.number("gamma_max", box.stgarch_gamma_max);
  box.star_gamma_min = run.number("star_gamma_min", box.star_gamma_min);
  box.star_gamma_max = run.number("star_gamma_max", box.star_gamma_max);
  if (!(box.stgarch_gamma_max > 0.0) || !(box.star_gamma_min > 0.0) || !(box.star_gamma_max > box.star_gamma_min)) {
    throw ValidationError("search box bounds must be positive and ordered");
  }
  return box;
}

SimulationRequest simulation_of(const Section& run, std::uint64_t seed) {
  SimulationRequest r;
  r.n = run.count("n");
  r.burn_in = run.count("burn_in", kDefaultBurnIn);
  r.innovation = innovation_of(run);
  r.noise_sd = run.number("noise_sd", 1.0);
  r.allow_unverified = run.boolean("allow_unverified", false);
  r.seed = seed;
  return r;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("cannot write " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Commands

json run_simulate(const json& config, const fs::path& out_dir) {
  const Section run(config.at("run"), "run");
  const AnyParams params = model_of(config);
  SimulationRequest request = simulation_of(run, run.seed("seed"));
  request.path_id = static_cast<std::uint32_t>(run.integer("path_id", 0));
  const SimPath path = simulate(params, request);
  {
    std::ofstream csv(out_dir / "path.csv");
    write_csv(csv, path);
  }
  const auto n = path.x.size();
  json report{{"command", "simulate"},
              {"family", std::string(to_string(path.family))},
              {"params", params_to_json(params)},
              {"n", n},
              {"burn_in", path.burn_in},
              {"seed", path.seed},
              {"path_id", path.path_id},
              {"warnings", path.warnings},
              {"files", {"path.csv"}}};
  report["innovation"] = path.innovation ? innovation_to_json(*path.innovation) : json(nullptr);
  report["noise_sd"] = path.family == Family::star ? json(path.noise_sd) : json(nullptr);
  if (n > 0) {
    report["moments"] = {{"mean_x", path.x.mean()},
                         {"mean_x2", path.x.squaredNorm() / static_cast<double>(n)},
                         {"mean_latent", path.latent.mean()},
                         {"min_latent", path.latent.minCoeff()},
                         {"max_abs_x", path.x.cwiseAbs().maxCoeff()}};
  }
  const auto from = static_cast<Eigen::Index>(run.count("consistency_from", 500));
  if (n > from) {
    const LatentPath filtered = filter(params, path.x);
    double sup = 0.0;
    for (Eigen::Index t = from; t < n; ++t) {
      const double truth = path.latent[t];
      const double scale = std::abs(truth) > 0.0 ? std::abs(truth) : 1.0;
      sup = std::max(sup, std::abs(filtered.values[t] - truth) / scale);
    }
    report["filter_consistency"] = {{"from", from}, {"sup_relative_error", sup}};
  } else {
    report["filter_consistency"] = nullptr;
  }
  return report;
}

json truth_comparison(const AnyParams& truth, const AnyParams& estimate) {
  const Eigen::VectorXd a = coordinates(truth);
  const Eigen::VectorXd b = coordinates(estimate);
  json rel = json::array();
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    rel.push_back(a[k] != 0.0 ? std::abs(b[k] - a[k]) / std::abs(a[k]) : std::abs(b[k]));
  }
  json out{{"theta_true", params_to_json(truth)}, {"relative_errors", rel}};
  if (!std::holds_alternative<AgarchParams>(truth)) {
    out["integer_recovered"] = integer_parameter(truth) == integer_parameter(estimate);
  }
  return out;
}

json run_fit(const json& config, const fs::path& config_dir, const fs::path& out_dir, int threads) {
  const Section run(config.at("run"), "run");
  const AnyParams model = model_of(config);
  Eigen::VectorXd x;
  bool simulated = false;
  if (run.has("data_csv")) {
    fs::path data = run.raw("data_csv").get<std::string>();
    if (data.is_relative()) data = config_dir / data;
    std::ifstream in(data);
    if (!in) throw ValidationError("cannot read data_csv " + data.string());
    x = read_series_csv(in);
  } else {
    x = simulate(model, simulation_of(run, run.seed("seed"))).x;
    simulated = true;
  }
  EstimationOptions o;
  o.n_starts = static_cast<int>(run.integer("starts", 20));
  o.seed = run.seed("search_seed");
  o.threads = threads;
  o.box = box_of(run);
  o.warm_up = run.count("warm_up", 0);
  o.nm_evaluations = static_cast<int>(run.integer("nm_evaluations", 300));
  o.min_length = run.count("min_length", 500);
  std::vector<int> grid = run.has("integer_grid") ? run.integers("integer_grid") : std::vector<int>{};

  FitResult fit;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StgarchParams>) {
          fit = gaussian_qmle(x, {p.p(), p.q()}, grid.empty() ? std::vector<int>{p.d} : grid, o);
        } else if constexpr (std::is_same_v<T, AgarchParams>) {
          fit = gaussian_qmle_agarch(x, o);
        } else if constexpr (std::is_same_v<T, IntgarchParams>) {
          if (grid.empty()) {
            grid.resize(10);
            std::iota(grid.begin(), grid.end(), 1);
          }
          fit = poisson_qmle(x, grid, o);
        } else {
          if (grid.empty()) {
            grid.resize(static_cast<std::size_t>(p.p()));
            std::iota(grid.begin(), grid.end(), 1);
          }
          fit = star_nls(x, grid, p.M(), p.p(), o);
        }
      },
      model);

  {
    std::ofstream csv(out_dir / "trace.csv");
    csv << "start_id";
    for (const auto& name : fit.coordinate_names) csv << ',' << name;
    csv << ",integer,objective,converged\n";
    for (const auto& t : fit.trace) {
      csv << t.start_id;
      for (Eigen::Index k = 0; k < t.end.size(); ++k) csv << ',' << format_double(t.end[k]);
      csv << ',' << t.integer_value << ',' << format_double(t.objective) << ',' << (t.converged ? 1 : 0) << '\n';
    }
  }
  json report{{"command", "fit"}, {"family", std::string(to_string(family_of(model)))}, {"n", x.size()},
              {"fit", to_json(fit)}, {"files", {"trace.csv"}}};
  report["truth"] = simulated ? truth_comparison(model, fit.theta_hat) : json(nullptr);
  return report;
}

SearchOptions search_options_of(const Section& run, int threads) {
  SearchOptions o;
  o.n = run.count("n");
  o.burn_in = run.count("burn_in", kDefaultBurnIn);
  o.starts = static_cast<int>(run.integer("starts", 50));
  o.search_seed = run.seed("search_seed");
  o.eps_rel = run.number("eps_rel", o.eps_rel);
  o.rho = run.number("rho", o.rho);
  o.innovation = innovation_of(run);
  o.noise_sd = run.number("noise_sd", 1.0);
  o.allow_unverified = run.boolean("allow_unverified", false);
  if (run.has("integer_grid")) o.integer_grid = run.integers("integer_grid");
  o.box = box_of(run);
  o.threads = threads;
  o.warm_up = run.count("warm_up", 0);
  o.nm_evaluations = static_cast<int>(run.integer("nm_evaluations", o.nm_evaluations));
  return o;
}

json curvature_json(const AnyParams& theta, const Eigen::VectorXd& x, const SearchBox& box, std::size_t warm_up) {
  try {
    CurvatureOptions co;
    co.box = box;
    co.warm_up = warm_up;
    return to_json(curvature_at(theta, x, co));
  } catch (const DomainError& e) {
    return {{"error", e.what()}};
  }
}

json poisson_profile(const AnyParams& model, const Section& profile, const Section& run, int threads) {
  profile.allow({"l_grid", "starts", "seeds", "search_seed"});
  std::vector<int> grid;
  if (profile.has("l_grid")) {
    grid = profile.integers("l_grid");
  } else {
    grid.resize(10);
    std::iota(grid.begin(), grid.end(), 1);
  }
  const auto seeds = profile.has("seeds") ? profile.seeds("seeds") : std::vector<std::uint64_t>{run.seeds("seeds")[0]};
  EstimationOptions o;
  o.n_starts = static_cast<int>(profile.integer("starts", 4));
  o.seed = profile.has("search_seed") ? profile.seed("search_seed") : run.seed("search_seed");
  o.threads = threads;
  o.compute_curvature = false;
  json out = json::array();
  for (std::uint64_t seed : seeds) {
    const SimPath path = simulate(model, simulation_of(run, seed));
    const FitResult fit = poisson_qmle(path.x, grid, o);
    // Monte Carlo standard error of the mean per-observation loss at the fit.
    const LatentPath lambda = filter(fit.theta_hat, path.x);
    const auto w = static_cast<Eigen::Index>(fit.warm_up);
    const Eigen::Index m = path.x.size() - w;
    Eigen::VectorXd loss(m);
    for (Eigen::Index t = 0; t < m; ++t) {
      const double l = lambda.values[w + t];
      loss[t] = l - path.x[w + t] * std::log(l);
    }
    const double mean = loss.mean();
    const double sd = std::sqrt((loss.array() - mean).square().sum() / static_cast<double>(m - 1));
    const double se = sd / std::sqrt(static_cast<double>(m));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    json values = json::object();
    for (int l : grid) {
      auto it = fit.profile.find(l);
      if (it == fit.profile.end()) {
        values[std::to_string(l)] = nullptr;
        hi = std::numeric_limits<double>::infinity();
        continue;
      }
      values[std::to_string(l)] = it->second;
      lo = std::min(lo, it->second);
      hi = std::max(hi, it->second);
    }
    const double spread = hi - lo;
    out.push_back({{"seed", seed},
                   {"l_grid", grid},
                   {"profile", values},
                   {"l_hat", integer_parameter(fit.theta_hat)},
                   {"mc_std_error", se},
                   {"spread", std::isfinite(spread) ? json(spread) : json(nullptr)},
                   {"flat", std::isfinite(spread) && spread <= 2.0 * se}});
  }
  return out;
}

json run_ident_scan(const json& config, const fs::path& out_dir, int threads) {
  const Section run(config.at("run"), "run");
  const AnyParams model = model_of(config);
  const auto seeds = run.seeds("seeds");
  SearchOptions o = search_options_of(run, threads);

  json per_seed = json::array();
  int point = 0, ridge = 0, inconclusive = 0;
  double max_distance = 0.0;
  std::ofstream csv(out_dir / "minimizers.csv");
  const auto names = coordinate_names(model);
  csv << "seed,start_id";
  for (const auto& name : names) csv << ',' << name;
  if (!std::holds_alternative<AgarchParams>(model)) csv << ',' << integer_parameter_name(model);
  csv << ",D\n";
  for (std::uint64_t seed : seeds) {
    o.seed = seed;
    const IdentReport r = equivalence_search(model, o);
    point += r.verdict == IdentVerdict::point_identified;
    ridge += r.verdict == IdentVerdict::ridge;
    inconclusive += r.verdict == IdentVerdict::inconclusive;
    max_distance = std::max(max_distance, r.max_distance);
    for (const auto& m : r.minimizers) {
      csv << seed << ',' << m.start_id;
      const Eigen::VectorXd c = coordinates(m.theta);
      for (Eigen::Index k = 0; k < c.size(); ++k) csv << ',' << format_double(c[k]);
      if (!std::holds_alternative<AgarchParams>(m.theta)) csv << ',' << integer_parameter(m.theta);
      csv << ',' << format_double(m.discrepancy) << '\n';
    }
    per_seed.push_back(to_json(r));
  }
  json report{{"command", "ident-scan"},
              {"family", std::string(to_string(family_of(model)))},
              {"theta_true", params_to_json(model)},
              {"seeds", seeds},
              {"per_seed", per_seed},
              {"summary",
               {{"seeds", seeds.size()},
                {"point_identified", point},
                {"ridge", ridge},
                {"inconclusive", inconclusive},
                {"max_minimizer_distance", max_distance},
                {"rho", o.rho}}},
              {"files", {"minimizers.csv"}}};
  if (run.boolean("curvature", false)) {
    const SimPath path = simulate(model, simulation_of(run, seeds.front()));
    const std::size_t w = o.warm_up > 0 ? o.warm_up : default_objective_warm_up(model, o.n);
    report["curvature_at_truth"] = curvature_json(model, path.x, o.box, w);
  }
  if (run.has("profile")) {
    if (!std::holds_alternative<IntgarchParams>(model)) {
      throw ValidationError("run.profile is only available for INTGARCH models");
    }
    report["profile"] = poisson_profile(model, run.sub("profile"), run, threads);
  }
  return report;
}

json run_partial_ident(const json& config) {
  const Section run(config.at("run"), "run");
  const AnyParams model = model_of(config);
  const auto* p = std::get_if<StgarchParams>(&model);
  if (!p) throw ValidationError("partial-ident needs an STGARCH model");
  PartialProbeOptions o;
  o.n = run.count("n");
  o.burn_in = run.count("burn_in", kDefaultBurnIn);
  o.seed = run.seed("seed");
  o.innovation = innovation_of(run);
  o.gamma_grid = run.numbers("gamma_grid", o.gamma_grid);
  o.alpha2_fractions = run.numbers("alpha2_fractions", o.alpha2_fractions);
  o.eps_rel = run.number("eps_rel", o.eps_rel);
  o.rho = run.number("rho", o.rho);
  o.perturbation = run.number("perturbation", o.perturbation);
  o.refine_gammas = run.numbers("refine_gammas", o.refine_gammas);
  o.subvector_tolerance = run.number("subvector_tolerance", o.subvector_tolerance);
  o.box = box_of(run);
  o.warm_up = run.count("warm_up", 0);
  const PartialProbeReport probe = stgarch_partial_ident_probe(*p, o);
  json report{{"command", "partial-ident"}, {"family", "stgarch"}, {"probe", to_json(probe)}};
  if (run.boolean("curvature", false)) {
    const SimPath path = simulate_stgarch(require_valid(*p), o.n, o.burn_in, o.innovation, o.seed);
    report["curvature_at_truth"] = curvature_json(model, path.x, o.box, probe.ident.warm_up);
  }
  return report;
}

GramOptions gram_options_of(const Section& run) {
  GramOptions g;
  g.weight_sd = run.number("weight_sd", g.weight_sd);
  g.delta = run.number("delta", g.delta);
  g.initial_order = static_cast<int>(run.integer("initial_order", g.initial_order));
  g.max_order = static_cast<int>(run.integer("max_order", g.max_order));
  return g;
}

std::vector<LogisticPair> pairs_of(const json& doc) {
  if (!doc.is_array() || doc.empty()) throw ValidationError("'run.pairs' must be a non-empty array of [gamma, c]");
  std::vector<LogisticPair> out;
  for (const auto& e : doc) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw ValidationError("'run.pairs' entries must be [gamma, c]");
    }
    out.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return out;
}

json run_lemma_check(const json& config, const fs::path& out_dir, int threads) {
  const Section run(config.at("run"), "run");
  const GramOptions g = gram_options_of(run);
  if (run.has("pairs") == run.has("sweep")) throw ValidationError("lemma-check needs exactly one of run.pairs, run.sweep");
  if (run.has("pairs")) {
    const GramReport r = gram_independence(pairs_of(run.raw("pairs")), g);
    const auto nv = null_vector_extract(r);
    return {{"command", "lemma-check"},
            {"mode", "pairs"},
            {"gram", to_json(r)},
            {"verdict", r.independent ? "independent" : "dependent"},
            {"null_vector", nv ? to_json(*nv) : json(nullptr)}};
  }
  const Section sweep = run.sub("sweep");
  sweep.allow({"count", "duplicates", "seed", "k", "gamma", "c", "min_distance"});
  const std::size_t count = sweep.count("count", 200);
  const std::size_t duplicates = sweep.count("duplicates", 20);
  const std::uint64_t seed = sweep.seed("seed");
  const std::vector<int> ks = sweep.has("k") ? sweep.integers("k") : std::vector<int>{1, 2, 3};
  const auto gamma = sweep.range("gamma", {0.2, 5.0});
  const auto c = sweep.range("c", {-3.0, 3.0});
  const double min_distance = sweep.number("min_distance", 1e-2);
  if (ks.empty() || *std::min_element(ks.begin(), ks.end()) < 1) throw ValidationError("sweep.k must hold positive integers");
  if (!(gamma.first > 0.0)) throw ValidationError("sweep.gamma must be positive");

  struct Config {
    bool duplicate = false;
    std::vector<LogisticPair> pairs;
  };
  std::vector<Config> configs(count + duplicates);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    RandomStream rng(seed, streams::sweep, i);
    const int k = ks[std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(ks.size())), ks.size() - 1)];
    auto& cfg = configs[i];
    cfg.duplicate = i >= count;
    while (static_cast<int>(cfg.pairs.size()) < k) {
      const LogisticPair p{gamma.first + rng.uniform() * (gamma.second - gamma.first),
                           c.first + rng.uniform() * (c.second - c.first)};
      const bool far = std::all_of(cfg.pairs.begin(), cfg.pairs.end(), [&](const LogisticPair& q) {
        return std::hypot(p.gamma - q.gamma, p.c - q.c) >= min_distance;
      });
      if (far) cfg.pairs.push_back(p);
    }
    if (cfg.duplicate) cfg.pairs.push_back(cfg.pairs.front());
  }
  std::vector<GramReport> reports(configs.size());
  parallel_for(configs.size(), threads, [&](std::size_t i) { reports[i] = gram_independence(configs[i].pairs, g); });

  json rows = json::array();
  int distinct_independent = 0, duplicate_dependent = 0;
  double min_distinct = std::numeric_limits<double>::infinity();
  double max_duplicate = -std::numeric_limits<double>::infinity();
  std::ofstream csv(out_dir / "sweep.csv");
  csv << "index,kind,k,min_eigenvalue,order,verdict\n";
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto& r = reports[i];
    json pairs = json::array();
    for (const auto& p : configs[i].pairs) pairs.push_back({p.gamma, p.c});
    const char* kind = configs[i].duplicate ? "duplicate" : "distinct";
    rows.push_back({{"index", i},
                    {"kind", kind},
                    {"pairs", pairs},
                    {"min_eigenvalue", r.min_eigenvalue},
                    {"quadrature_order", r.order},
                    {"verdict", r.independent ? "independent" : "dependent"}});
    csv << i << ',' << kind << ',' << configs[i].pairs.size() << ',' << format_double(r.min_eigenvalue) << ','
        << r.order << ',' << (r.independent ? "independent" : "dependent") << '\n';
    if (configs[i].duplicate) {
      duplicate_dependent += !r.independent;
      max_duplicate = std::max(max_duplicate, r.min_eigenvalue);
    } else {
      distinct_independent += r.independent;
      min_distinct = std::min(min_distinct, r.min_eigenvalue);
    }
  }
  return {{"command", "lemma-check"},
          {"mode", "sweep"},
          {"delta", g.delta},
          {"weight_sd", g.weight_sd},
          {"configs", rows},
          {"summary",
           {{"distinct", count},
            {"distinct_independent", distinct_independent},
            {"min_distinct_eigenvalue", count > 0 ? json(min_distinct) : json(nullptr)},
            {"duplicates", duplicates},
            {"duplicates_dependent", duplicate_dependent},
            {"max_duplicate_eigenvalue", duplicates > 0 ? json(max_duplicate) : json(nullptr)}}},
          {"files", {"sweep.csv"}}};
}

json laplace_row(double s, double gamma, double c) {
  const double f0 = logistic_laplace_F0(s, gamma, c);
  const double f1 = logistic_laplace_F1(s, gamma, c);
  const LaplaceQuadrature q0 = logistic_laplace_F0_quadrature(s, gamma, c);
  const LaplaceQuadrature q1 = logistic_laplace_F1_quadrature(s, gamma, c);
  // Relative to the larger of the value and the integral of |integrand|, so
  // transforms that vanish by cancellation are judged on the right scale.
  const double e0 = std::abs(f0 - q0.value) / std::max(std::abs(f0), q0.absolute);
  const double e1 = std::abs(f1 - q1.value) / std::max(std::abs(f1), q1.absolute);
  return {{"s", s},           {"gamma", gamma},       {"c", c},           {"F0", f0},
          {"F0_quadrature", q0.value}, {"F0_relative_error", e0}, {"F1", f1}, {"F1_quadrature", q1.value},
          {"F1_abs_integral", q1.absolute}, {"F1_relative_error", e1}};
}

json run_laplace_check(const json& config, const fs::path& out_dir) {
  const Section run(config.at("run"), "run");
  const std::size_t count = run.count("count", 50);
  const std::uint64_t seed = run.seed("seed");
  const auto gamma = run.range("gamma", {0.5, 5.0});
  const auto u = run.range("u", {0.05, 0.95});
  const auto c = run.range("c", {-2.0, 2.0});
  const double tolerance = run.number("tolerance", 1e-6);
  if (!(gamma.first > 0.0) || !(u.first > 0.0) || !(u.second < 1.0)) {
    throw ValidationError("laplace-check grid must stay inside 0 < s < gamma");
  }
  json rows = json::array();
  double max0 = 0.0, max1 = 0.0;
  std::ofstream csv(out_dir / "laplace.csv");
  csv << "s,gamma,c,F0,F0_quadrature,F1,F1_quadrature\n";
  for (std::size_t i = 0; i < count; ++i) {
    RandomStream rng(seed, streams::sweep, i);
    const double g = gamma.first + rng.uniform() * (gamma.second - gamma.first);
    const double s = g * (u.first + rng.uniform() * (u.second - u.first));
    const double cc = c.first + rng.uniform() * (c.second - c.first);
    json row = laplace_row(s, g, cc);
    max0 = std::max(max0, row["F0_relative_error"].get<double>());
    max1 = std::max(max1, row["F1_relative_error"].get<double>());
    csv << format_double(s) << ',' << format_double(g) << ',' << format_double(cc) << ','
        << format_double(row["F0"].get<double>()) << ',' << format_double(row["F0_quadrature"].get<double>()) << ','
        << format_double(row["F1"].get<double>()) << ',' << format_double(row["F1_quadrature"].get<double>()) << '\n';
    rows.push_back(row);
  }
  const json half = laplace_row(0.5, 1.0, 0.0);
  const double pi = std::acos(-1.0);
  const double f0_pi_error = std::abs(half["F0"].get<double>() - pi) / pi;
  const double f1_zero_error = std::abs(half["F1"].get<double>()) / half["F1_abs_integral"].get<double>();
  const double f1_quad_zero_error = std::abs(half["F1_quadrature"].get<double>()) / half["F1_abs_integral"].get<double>();
  const bool fixed_ok = f0_pi_error <= tolerance && f1_zero_error <= tolerance && f1_quad_zero_error <= tolerance &&
                        half["F0_relative_error"].get<double>() <= tolerance;
  return {{"command", "laplace-check"},
          {"tolerance", tolerance},
          {"grid", rows},
          {"fixed",
           {{"at", {0.5, 1.0, 0.0}},
            {"row", half},
            {"F0_vs_pi_relative_error", f0_pi_error},
            {"F1_closed_zero_error", f1_zero_error},
            {"F1_quadrature_zero_error", f1_quad_zero_error},
            {"pass", fixed_ok}}},
          {"summary",
           {{"points", count},
            {"max_F0_relative_error", max0},
            {"max_F1_relative_error", max1},
            {"pass", max0 <= tolerance && max1 <= tolerance && fixed_ok}}},
          {"files", {"laplace.csv"}}};
}

json monte_carlo_block(const std::vector<StationarityReport>& reports) {
  json list = json::array();
  bool any_pass = false, any_fail = false;
  std::vector<std::string> verdicts;
  for (const auto& r : reports) {
    list.push_back(to_json(r));
    verdicts.emplace_back(to_string(r.verdict));
    any_pass = any_pass || r.verdict == Verdict::pass;
    any_fail = any_fail || r.verdict == Verdict::fail;
  }
  return {{"reports", list}, {"verdicts", verdicts}, {"stable", !(any_pass && any_fail)}};
}

json run_stationarity(const json& config) {
  const Section run(config.at("run"), "run");
  if (!config.contains("models") || !config.at("models").is_array() || config.at("models").empty()) {
    throw ValidationError("stationarity needs a non-empty 'models' array");
  }
  const auto seeds = run.seeds("seeds");
  const std::size_t mc_n = run.count("mc_n", 1000000);
  const InnovationSpec innovation = innovation_of(run);
  SupGridSpec grid;
  grid.points = run.count("grid_points", grid.points);
  json out = json::array();
  for (const auto& doc : config.at("models")) {
    const AnyParams params = params_from_json(doc);
    require_constraints(params);
    json entry{{"family", std::string(to_string(family_of(params)))}, {"params", params_to_json(params)}};
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, StgarchParams>) {
            if (p.p() != 1 || p.q() != 1 || p.d != 1) {
              entry["log_moment"] = nullptr;
              entry["note"] = "no stationarity criterion is available beyond STGARCH(1,1,1)";
              return;
            }
            std::vector<StationarityReport> rs;
            for (auto seed : seeds) rs.push_back(stgarch111_logmoment(require_valid(p), innovation, mc_n, seed));
            entry["log_moment"] = monte_carlo_block(rs);
          } else if constexpr (std::is_same_v<T, AgarchParams>) {
            std::vector<StationarityReport> rs;
            for (auto seed : seeds) rs.push_back(agarch_logmoment(require_valid(p), innovation, mc_n, seed));
            entry["log_moment"] = monte_carlo_block(rs);
          } else if constexpr (std::is_same_v<T, IntgarchParams>) {
            entry["condition"] = to_json(intgarch_condition(require_valid(p)));
          } else {
            entry["sup_condition"] = to_json(star_sup_condition(require_valid(p), grid));
            entry["partial_sum_condition"] = to_json(star_partial_sum_condition(require_valid(p)));
          }
        },
        params);
    out.push_back(entry);
  }
  return {{"command", "stationarity"}, {"models", out}, {"seeds", seeds}, {"mc_n", mc_n},
          {"innovation", innovation_to_json(innovation)}};
}

json run_agarch_demo(const json& config) {
  const Section run(config.at("run"), "run");
  const std::size_t truths = run.count("truths", 20);
  const std::uint64_t seed = run.seed("seed");
  const std::vector<double> grid = run.numbers("grid", {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0});
  const auto alpha = run.range("alpha", {0.01, 1.0});
  const auto gamma = run.range("gamma", {-1.0, 1.0});
  const double tolerance = run.number("tolerance", 1e-10);
  std::vector<double> positive, negative;
  for (double x : grid) {
    if (x > 0.0) positive.push_back(x);
    if (x < 0.0) negative.push_back(x);
  }
  json rows = json::array();
  double max_error = 0.0;
  bool all_rejected = true;
  for (std::size_t i = 0; i < truths; ++i) {
    RandomStream rng(seed, streams::probes, i);
    const double a = alpha.first + rng.uniform() * (alpha.second - alpha.first);
    const double g = gamma.first + rng.uniform() * (gamma.second - gamma.first);
    const AgarchIdentity r = agarch_identity_solve(a, g, grid);
    const double error = std::max(std::abs(r.alpha - a), std::abs(r.gamma - g));
    max_error = std::max(max_error, error);
    auto rejected = [&](const std::vector<double>& one_signed) {
      try {
        agarch_identity_solve(a, g, one_signed);
        return false;
      } catch (const UnderdeterminedError&) {
        return true;
      }
    };
    const bool pos_rejected = rejected(positive);
    const bool neg_rejected = rejected(negative);
    all_rejected = all_rejected && pos_rejected && neg_rejected;
    rows.push_back({{"alpha_true", a},
                    {"gamma_true", g},
                    {"solution", to_json(r)},
                    {"error", error},
                    {"positive_grid_underdetermined", pos_rejected},
                    {"negative_grid_underdetermined", neg_rejected}});
  }
  return {{"command", "agarch-demo"},
          {"grid", grid},
          {"truths", rows},
          {"summary",
           {{"truths", truths},
            {"max_error", max_error},
            {"tolerance", tolerance},
            {"all_recovered", max_error <= tolerance},
            {"one_signed_always_underdetermined", all_rejected}}}};
}

}  // namespace

const char* tool_version() { return NLTS_VERSION; }

std::string config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

void validate_config(const json& config) {
  const Section top(config, "config");
  top.allow(kTopKeys);
  if (top.integer("schema_version") != kSchemaVersion) {
    throw ValidationError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  const json& cmd = top.raw("command");
  if (!cmd.is_string()) throw ValidationError("'config.command' must be a string");
  const std::string command = cmd.get<std::string>();
  const auto it = run_keys().find(command);
  if (it == run_keys().end()) throw ValidationError("unknown command '" + command + "'");
  Section(top.raw("run"), "run").allow(it->second);
  if (needs_model(command) && !top.has("model")) throw ValidationError("command '" + command + "' needs 'model'");
  if (!needs_model(command) && top.has("model")) throw ValidationError("command '" + command + "' takes no 'model'");
  if (command == "stationarity" ? !top.has("models") : top.has("models")) {
    throw ValidationError(command == "stationarity" ? "stationarity needs 'models'" : "'models' is only for stationarity");
  }
  if (top.has("output_dir") && !top.raw("output_dir").is_string()) {
    throw ValidationError("'config.output_dir' must be a string");
  }
  if (top.has("model")) model_of(config);
  if (top.has("models")) {
    const json& models = top.raw("models");
    if (!models.is_array()) throw ValidationError("'config.models' must be an array");
    for (const auto& m : models) {
      require_constraints(params_from_json(m));
    }
  }
}

json execute(const json& config, const fs::path& config_dir, const fs::path& out_dir, int threads) {
  validate_config(config);
  const std::string command = config.at("command").get<std::string>();
  if (threads <= 0) threads = default_threads();
  if (command == "simulate") return run_simulate(config, out_dir);
  if (command == "fit") return run_fit(config, config_dir, out_dir, threads);
  if (command == "ident-scan") return run_ident_scan(config, out_dir, threads);
  if (command == "partial-ident") return run_partial_ident(config);
  if (command == "lemma-check") return run_lemma_check(config, out_dir, threads);
  if (command == "laplace-check") return run_laplace_check(config, out_dir);
  if (command == "stationarity") return run_stationarity(config);
  return run_agarch_demo(config);
}

namespace {

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    for (const auto& v : e.violations()) {
      if (v != e.what()) err << "  - " << v << '\n';
    }
    return exit_validation;
  } catch (const ConditionError& e) {
    err << "refused: " << e.what() << '\n';
    return exit_condition;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const json::exception& e) {
    err << "error: invalid config: " << e.what() << '\n';
    return exit_validation;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return exit_internal;
  }
}

json read_json(const fs::path& path) {
  if (!fs::exists(path)) throw ValidationError("file not found: " + path.string());
  return json::parse(read_text(path));
}

}  // namespace

int run(const fs::path& config_path, const RunOptions& options, std::ostream& err) {
  return guarded(err, [&] {
    const json config = read_json(config_path);
    validate_config(config);
    const std::string command = config.at("command").get<std::string>();
    if (options.command && *options.command != command) {
      throw ValidationError("command '" + *options.command + "' does not match the config's '" + command + "'");
    }
    const fs::path config_dir = fs::absolute(config_path).parent_path();
    fs::path out_dir;
    if (options.out_dir) {
      out_dir = *options.out_dir;
    } else if (config.contains("output_dir")) {
      out_dir = config.at("output_dir").get<std::string>();
      if (out_dir.is_relative()) out_dir = config_dir / out_dir;
    } else {
      throw ValidationError("no output directory: set output_dir or pass --out");
    }
    fs::create_directories(out_dir);
    const int threads = options.threads > 0 ? options.threads : default_threads();

    const auto start = std::chrono::steady_clock::now();
    json report = execute(config, config_dir, out_dir, threads);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report["schema_version"] = kSchemaVersion;
    write_text(out_dir / "report.json", dump(report));

    json manifest{{"tool", "nlts-ident"},
                  {"tool_version", tool_version()},
                  {"schema_version", kSchemaVersion},
                  {"command", command},
                  {"config", config},
                  {"config_hash", config_hash(config)},
                  {"config_dir", config_dir.string()},
                  {"threads", threads},
                  {"wall_time_seconds", seconds},
                  {"report", "report.json"}};
    write_text(out_dir / "manifest.json", dump(manifest));
    return static_cast<int>(exit_ok);
  });
}

int replay(const fs::path& manifest_path, std::ostream& err, int threads) {
  return guarded(err, [&] {
    const json manifest = read_json(manifest_path);
    const Section m(manifest, "manifest");
    const json& config = m.raw("config");
    const fs::path dir = fs::absolute(manifest_path).parent_path();
    const fs::path original = dir / (manifest.contains("report") ? manifest.at("report").get<std::string>() : "report.json");
    if (!fs::exists(original)) throw ValidationError("missing output file " + original.string());
    const std::string expected = read_text(original);

    const fs::path replay_dir = dir / ".replay";
    fs::create_directories(replay_dir);
    const fs::path config_dir = manifest.contains("config_dir") ? fs::path(manifest.at("config_dir").get<std::string>()) : dir;
    if (threads <= 0) threads = manifest.contains("threads") ? manifest.at("threads").get<int>() : default_threads();
    json report = execute(config, config_dir, replay_dir, threads);
    report["schema_version"] = kSchemaVersion;
    const std::string actual = dump(report);
    write_text(replay_dir / "report.json", actual);
    if (actual == expected) return static_cast<int>(exit_ok);

    err << "replay mismatch for " << original.string() << '\n';
    json before;
    try {
      before = json::parse(expected);
    } catch (const json::exception&) {
      err << "  original report is not valid JSON\n";
      return static_cast<int>(exit_replay_mismatch);
    }
    const json diff = json::diff(before, report);
    std::size_t shown = 0;
    for (const auto& op : diff) {
      if (shown++ == 50) {
        err << "  ... " << diff.size() - 50 << " more\n";
        break;
      }
      err << "  " << op.at("op").get<std::string>() << ' ' << op.at("path").get<std::string>();
      if (op.contains("value")) err << " -> " << op.at("value").dump();
      err << '\n';
    }
    return static_cast<int>(exit_replay_mismatch);
  });
}

}  // namespace nlts::experiments
