#include "nlts/ident.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "nlts/estimate.hpp"
#include "nlts/filter.hpp"
#include "nlts/optimize.hpp"
#include "search.hpp"

namespace nlts {

namespace {

std::shared_ptr<const Eigen::VectorXd> share(const Eigen::Ref<const Eigen::VectorXd>& x) {
  return std::make_shared<const Eigen::VectorXd>(x);
}

bool has_integer(const AnyParams& theta) { return !std::holds_alternative<AgarchParams>(theta); }

std::vector<int> default_grid(const AnyParams& theta) {
  return std::visit(
      [](const auto& p) -> std::vector<int> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StgarchParams>) {
          return {p.d};
        } else if constexpr (std::is_same_v<T, IntgarchParams>) {
          std::vector<int> g(10);
          std::iota(g.begin(), g.end(), 1);
          return g;
        } else if constexpr (std::is_same_v<T, StarParams>) {
          std::vector<int> g(static_cast<std::size_t>(p.p()));
          std::iota(g.begin(), g.end(), 1);
          return g;
        } else {
          return {};
        }
      },
      theta);
}

bool at_smoothness_cap(const AnyParams& theta, const SearchBox& box, double fraction) {
  if (const auto* s = std::get_if<StgarchParams>(&theta)) {
    return s->gamma >= (1.0 - fraction) * box.stgarch_gamma_max;
  }
  if (const auto* s = std::get_if<StarParams>(&theta)) {
    return s->gamma.size() > 0 && s->gamma.maxCoeff() >= (1.0 - fraction) * box.star_gamma_max;
  }
  return false;
}

Eigen::VectorXd latent_of(const AnyParams& theta, const std::shared_ptr<const Eigen::VectorXd>& x) {
  LatentEvaluator evaluator(x);
  Eigen::VectorXd h;
  evaluator.evaluate(theta, h);
  return h;
}

}  // namespace

std::string_view to_string(IdentVerdict verdict) {
  switch (verdict) {
    case IdentVerdict::point_identified:
      return "point-identified";
    case IdentVerdict::ridge:
      return "ridge";
    case IdentVerdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Eigen::VectorXd standardization_scales(const AnyParams& theta_true) {
  const Eigen::VectorXd c = coordinates(theta_true);
  const Eigen::Index extra = has_integer(theta_true) ? 1 : 0;
  Eigen::VectorXd s(c.size() + extra);
  s.head(c.size()) = c.cwiseAbs().cwiseMax(1.0);
  if (extra) s[c.size()] = std::max(std::abs(static_cast<double>(integer_parameter(theta_true))), 1.0);
  return s;
}

Eigen::VectorXd standardized(const AnyParams& theta, const Eigen::Ref<const Eigen::VectorXd>& scales) {
  const Eigen::VectorXd c = coordinates(theta);
  Eigen::VectorXd v(scales.size());
  v.head(c.size()) = c;
  if (scales.size() > c.size()) v[c.size()] = static_cast<double>(integer_parameter(theta));
  return v.cwiseQuotient(scales);
}

double discrepancy(const AnyParams& theta, const AnyParams& theta_true, const Eigen::Ref<const Eigen::VectorXd>& x,
                   std::size_t warm_up) {
  const auto xs = share(x);
  const auto target = std::make_shared<const Eigen::VectorXd>(latent_of(theta_true, xs));
  return detail::make_objective_factory(ObjectiveKind::discrepancy, xs, warm_up, target)(x.size())->value(theta);
}

void assign_verdict(IdentReport& report) {
  const auto& pts = report.minimizers;
  const std::size_t m = pts.size();
  report.free_coordinates.clear();
  report.identified_subvector.clear();
  report.max_distance = 0.0;
  report.clusters = 0;
  if (m == 0) {
    report.verdict = IdentVerdict::inconclusive;
    return;
  }
  std::vector<Eigen::VectorXd> z;
  z.reserve(m);
  for (const auto& p : pts) {
    z.push_back(standardized(p.theta, report.scales));
    report.max_distance = std::max(report.max_distance, p.distance);
  }
  // Single-linkage clusters at radius rho (union-find).
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if ((z[i] - z[j]).lpNorm<Eigen::Infinity>() <= report.rho) parent[find(i)] = find(j);
    }
  }
  for (std::size_t i = 0; i < m; ++i) report.clusters += find(i) == i ? 1 : 0;

  const Eigen::VectorXd truth = standardized(report.theta_true, report.scales);
  if (report.max_distance <= report.rho) {
    report.verdict = IdentVerdict::point_identified;
    report.identified_subvector = report.coordinate_names;
    return;
  }
  report.verdict = IdentVerdict::ridge;
  for (Eigen::Index k = 0; k < truth.size(); ++k) {
    double lo = truth[k];
    double hi = truth[k];
    for (const auto& v : z) {
      lo = std::min(lo, v[k]);
      hi = std::max(hi, v[k]);
    }
    auto& bucket = hi - lo > report.rho ? report.free_coordinates : report.identified_subvector;
    bucket.push_back(report.coordinate_names[static_cast<std::size_t>(k)]);
  }
}

IdentReport equivalence_search_on_series(const AnyParams& theta_true, const Eigen::Ref<const Eigen::VectorXd>& x,
                                         const SearchOptions& options) {
  if (auto v = violations(theta_true); !v.empty()) throw ValidationError(v);
  if (options.starts < 1) throw ValidationError("starts must be at least 1");
  if (!(options.rho > 0.0) || !(options.eps_rel > 0.0)) throw ValidationError("rho and eps_rel must be positive");
  if (std::holds_alternative<IntgarchParams>(theta_true)) require_counts(x);

  const std::size_t warm_up = options.warm_up > 0 ? options.warm_up
                                                  : default_objective_warm_up(theta_true, static_cast<std::size_t>(x.size()));
  if (static_cast<std::size_t>(x.size()) <= warm_up + 1) throw ValidationError("series shorter than warm-up");
  const auto xs = share(x);
  const auto target = std::make_shared<const Eigen::VectorXd>(latent_of(theta_true, xs));
  const auto factory = detail::make_objective_factory(ObjectiveKind::discrepancy, xs, warm_up, target);

  IdentReport report;
  report.family = family_of(theta_true);
  report.theta_true = theta_true;
  report.n = static_cast<std::size_t>(x.size());
  report.warm_up = warm_up;
  report.rho = options.rho;
  report.latent_scale = target->tail(x.size() - static_cast<Eigen::Index>(warm_up)).squaredNorm() /
                        static_cast<double>(x.size() - static_cast<Eigen::Index>(warm_up));
  report.eps = options.eps_rel * report.latent_scale;
  report.coordinate_names = coordinate_names(theta_true);
  if (has_integer(theta_true)) report.coordinate_names.push_back(integer_parameter_name(theta_true));
  report.scales = standardization_scales(theta_true);
  report.starts = options.starts;

  std::vector<int> grid = options.integer_grid.empty() ? default_grid(theta_true) : options.integer_grid;
  for (int g : grid) {
    if (auto v = violations(with_integer_parameter(theta_true, g)); !v.empty()) {
      throw ValidationError("integer grid value " + std::to_string(g) + ": " + v.front());
    }
  }
  const auto starts = detail::lhs_starts(theta_true, options.starts, data_scale(x), options.search_seed);
  std::vector<detail::StartTask> tasks;
  for (int i = 0; i < options.starts; ++i) {
    AnyParams s = starts[static_cast<std::size_t>(i)];
    if (!grid.empty()) s = with_integer_parameter(s, grid[static_cast<std::size_t>(i) % grid.size()]);
    tasks.push_back({i, has_integer(s) ? integer_parameter(s) : 0, s});
  }
  detail::LocalOptions local;
  local.nm_evaluations = options.nm_evaluations;
  local.coarse_length = options.coarse_length;
  const int threads = options.threads > 0 ? options.threads : default_threads();
  const auto outcomes = detail::run_tasks(
      tasks, factory, [&](const AnyParams& s) { return ParameterMap(s, options.box); }, x.size(), local, threads);

  const Eigen::VectorXd truth = standardized(theta_true, report.scales);
  for (const auto& o : outcomes) {
    Minimizer m;
    m.start_id = o.task.start_id;
    m.theta = o.outcome.theta;
    m.discrepancy = o.outcome.value;
    m.converged = o.outcome.converged;
    m.distance = (standardized(m.theta, report.scales) - truth).lpNorm<Eigen::Infinity>();
    m.boundary_flat = at_smoothness_cap(m.theta, options.box, options.boundary_fraction);
    report.trace.push_back(m);
    if (!m.converged) continue;
    ++report.converged;
    if (m.discrepancy > report.eps) continue;
    (m.boundary_flat ? report.boundary_flat : report.minimizers).push_back(m);
  }
  if (report.family == Family::stgarch && options.innovation.kind == InnovationSpec::Kind::three_point) {
    report.notes.push_back("discrete innovations: the full-support identification condition does not hold");
  }
  if (!report.boundary_flat.empty()) {
    report.notes.push_back(std::to_string(report.boundary_flat.size()) +
                           " near-zero minimizers at the smoothness cap are excluded from the verdict");
  }
  assign_verdict(report);
  return report;
}

IdentReport equivalence_search(const AnyParams& theta_true, const SearchOptions& options) {
  SimulationRequest request;
  request.n = options.n;
  request.burn_in = options.burn_in;
  request.innovation = options.innovation;
  request.noise_sd = options.noise_sd;
  request.seed = options.seed;
  request.allow_unverified = options.allow_unverified;
  const SimPath path = simulate(theta_true, request);
  IdentReport report = equivalence_search_on_series(theta_true, path.x, options);
  report.seed = options.seed;
  for (const auto& w : path.warnings) report.notes.push_back(w);
  return report;
}

// ---------------------------------------------------------------------------

namespace {

// Roots of sum_k a[k] z^k with trailing (highest-degree) zeros removed.
std::vector<std::complex<double>> polynomial_roots(std::vector<double> a, std::vector<std::string>& warnings) {
  while (!a.empty() && a.back() == 0.0) a.pop_back();
  std::vector<std::complex<double>> roots;
  std::size_t zeros = 0;
  while (zeros < a.size() && a[zeros] == 0.0) ++zeros;
  for (std::size_t i = 0; i < zeros; ++i) roots.emplace_back(0.0, 0.0);
  const std::vector<double> b(a.begin() + static_cast<std::ptrdiff_t>(zeros), a.end());
  const auto deg = static_cast<Eigen::Index>(b.size()) - 1;
  if (deg < 1) return roots;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (Eigen::Index i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < deg; ++i) companion(i, deg - 1) = -b[static_cast<std::size_t>(i)] / b.back();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    warnings.push_back("companion eigenvalue computation failed");
    return roots;
  }
  for (Eigen::Index i = 0; i < deg; ++i) {
    const std::complex<double> r = solver.eigenvalues()[i];
    std::complex<double> value = 0.0;
    double magnitude = 0.0;
    for (std::size_t k = b.size(); k-- > 0;) {
      value = value * r + b[k];
      magnitude = magnitude * std::abs(r) + std::abs(b[k]);
    }
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()) || std::abs(value) > 1e-6 * std::max(magnitude, 1e-300)) {
      warnings.push_back("ill-conditioned root near " + std::to_string(r.real()) + (r.imag() >= 0 ? "+" : "") +
                         std::to_string(r.imag()) + "i");
    }
    roots.push_back(r);
  }
  return roots;
}

}  // namespace

RootCheck common_root_check(const std::vector<double>& alpha1, const std::vector<double>& beta) {
  RootCheck out;
  const bool alpha_zero = std::all_of(alpha1.begin(), alpha1.end(), [](double v) { return v == 0.0; });
  if (alpha_zero) {
    out.reason = "alpha1 is identically zero";
    return out;
  }
  const double alpha_q = alpha1.back();
  const double beta_p = beta.empty() ? 0.0 : beta.back();
  if (alpha_q == 0.0 && beta_p == 0.0) {
    out.reason = "alpha1_q and beta_p are both zero";
    return out;
  }
  std::vector<double> a(alpha1.size() + 1, 0.0);
  std::copy(alpha1.begin(), alpha1.end(), a.begin() + 1);
  std::vector<double> b(beta.size() + 1, 1.0);
  for (std::size_t j = 0; j < beta.size(); ++j) b[j + 1] = -beta[j];
  out.alpha_roots = polynomial_roots(a, out.warnings);
  out.beta_roots = polynomial_roots(b, out.warnings);
  if (!out.warnings.empty()) {
    out.reason = "root finding is ill-conditioned";
    return out;
  }
  for (const auto& ra : out.alpha_roots) {
    for (const auto& rb : out.beta_roots) {
      if (std::abs(ra - rb) <= 1e-8 * std::max(1.0, std::abs(ra))) {
        out.common_root = ra;
        out.reason = "alpha1(z) and beta(z) share a root";
        return out;
      }
    }
  }
  out.pass = true;
  return out;
}

PartialProbeReport stgarch_partial_ident_probe(const StgarchParams& theta_true, const PartialProbeOptions& options) {
  require_valid(theta_true);
  const bool alpha2_zero =
      std::all_of(theta_true.alpha2.begin(), theta_true.alpha2.end(), [](double v) { return v == 0.0; });
  if (!alpha2_zero && theta_true.gamma != 0.0) {
    throw ConditionError("partial identification probe needs alpha2 = 0 or gamma = 0 at the truth");
  }
  PartialProbeReport out;
  out.root_check = common_root_check(theta_true.alpha1, theta_true.beta);
  if (!out.root_check.pass) throw ConditionError("common-root condition fails: " + out.root_check.reason);

  const SimPath path =
      simulate_stgarch(require_valid(theta_true), options.n, options.burn_in, options.innovation, options.seed);
  const AnyParams truth{theta_true};
  const std::size_t warm_up =
      options.warm_up > 0 ? options.warm_up : default_objective_warm_up(truth, static_cast<std::size_t>(options.n));
  const auto xs = share(path.x);
  const auto target = std::make_shared<const Eigen::VectorXd>(latent_of(truth, xs));
  const auto factory = detail::make_objective_factory(ObjectiveKind::discrepancy, xs, warm_up, target);
  auto objective = factory(path.x.size());

  IdentReport& ident = out.ident;
  ident.family = Family::stgarch;
  ident.theta_true = truth;
  ident.n = options.n;
  ident.warm_up = warm_up;
  ident.seed = options.seed;
  ident.rho = options.rho;
  const auto tail = static_cast<Eigen::Index>(warm_up);
  ident.latent_scale = target->tail(path.x.size() - tail).squaredNorm() / static_cast<double>(path.x.size() - tail);
  ident.eps = options.eps_rel * ident.latent_scale;
  ident.coordinate_names = coordinate_names(truth);
  ident.coordinate_names.push_back("d");
  ident.scales = standardization_scales(truth);

  auto record = [&](std::vector<ProbePoint>& into, std::string manifold, const StgarchParams& p) {
    ProbePoint pt{std::move(manifold), AnyParams{p}, objective->value(AnyParams{p})};
    into.push_back(pt);
    return pt;
  };

  // The two manifolds.
  out.max_grid_discrepancy = 0.0;
  for (double g : options.gamma_grid) {
    StgarchParams p = theta_true;
    p.gamma = g;
    std::fill(p.alpha2.begin(), p.alpha2.end(), 0.0);
    const auto pt = record(out.grid, "alpha2=0", p);
    out.max_grid_discrepancy = std::max(out.max_grid_discrepancy, pt.discrepancy);
  }
  std::vector<double> fractions = options.alpha2_fractions;
  if (fractions.empty()) {
    for (int i = 0; i <= 10; ++i) fractions.push_back(-1.0 + 0.2 * i);
  }
  for (double f : fractions) {
    StgarchParams p = theta_true;
    p.gamma = 0.0;
    for (std::size_t i = 0; i < p.alpha2.size(); ++i) p.alpha2[i] = 2.0 * p.alpha1[i] * f;
    const auto pt = record(out.grid, "gamma=0", p);
    out.max_grid_discrepancy = std::max(out.max_grid_discrepancy, pt.discrepancy);
  }
  out.ridge_holds = out.max_grid_discrepancy <= ident.eps;

  // Off-manifold perturbations of the identified subvector.
  out.min_perturbation_discrepancy = std::numeric_limits<double>::infinity();
  auto perturb = [&](const std::string& name, const StgarchParams& p) {
    const auto pt = record(out.perturbations, name, p);
    out.min_perturbation_discrepancy = std::min(out.min_perturbation_discrepancy, pt.discrepancy);
  };
  {
    StgarchParams p = theta_true;
    p.omega += options.perturbation;
    perturb("omega", p);
  }
  for (std::size_t i = 0; i < theta_true.alpha1.size(); ++i) {
    StgarchParams p = theta_true;
    p.alpha1[i] += options.perturbation;
    perturb("alpha1_" + std::to_string(i + 1), p);
  }
  for (std::size_t j = 0; j < theta_true.beta.size(); ++j) {
    StgarchParams p = theta_true;
    p.beta[j] += options.perturbation;
    if (violations(p).empty()) perturb("beta_" + std::to_string(j + 1), p);
  }
  out.off_manifold_separated = out.min_perturbation_discrepancy > ident.eps;

  // Ridge points refined with gamma held fixed and every other coordinate free.
  const Eigen::Index q = theta_true.q();
  const Eigen::Index pb = theta_true.p();
  out.subvector_max_deviation = 0.0;
  for (double g : options.refine_gammas) {
    ParameterMap map(truth, options.box);
    map.fix(0, g);
    StgarchParams start = theta_true;
    start.gamma = g;
    start.omega *= 1.2;
    for (auto& a : start.alpha1) a *= 0.8;
    for (std::size_t i = 0; i < start.alpha2.size(); ++i) start.alpha2[i] = 0.5 * start.alpha1[i];
    for (auto& b : start.beta) b *= 0.9;
    LevenbergMarquardtOptions lm;
    lm.max_iterations = 300;
    const LocalResult r = levenberg_marquardt(
        [&](const Eigen::VectorXd& u, Eigen::VectorXd& res) { objective->residual(map.decode(u), res); },
        map.encode(AnyParams{start}), lm);
    const AnyParams theta = map.decode(r.x);
    out.refined.push_back({"gamma=" + format_double(g), theta, objective->value(theta)});
    const auto& p = std::get<StgarchParams>(theta);
    double dev = std::abs(p.omega - theta_true.omega);
    for (Eigen::Index i = 0; i < q; ++i) {
      dev = std::max(dev, std::abs(p.alpha1[static_cast<std::size_t>(i)] - theta_true.alpha1[static_cast<std::size_t>(i)]));
    }
    for (Eigen::Index j = 0; j < pb; ++j) {
      dev = std::max(dev, std::abs(p.beta[static_cast<std::size_t>(j)] - theta_true.beta[static_cast<std::size_t>(j)]));
    }
    out.subvector_max_deviation = std::max(out.subvector_max_deviation, dev);
  }
  out.subvector_constant = out.subvector_max_deviation <= options.subvector_tolerance;

  const Eigen::VectorXd truth_z = standardized(truth, ident.scales);
  auto add_minimizer = [&](const ProbePoint& pt, int id) {
    Minimizer m;
    m.start_id = id;
    m.theta = pt.theta;
    m.discrepancy = pt.discrepancy;
    m.converged = true;
    m.distance = (standardized(pt.theta, ident.scales) - truth_z).lpNorm<Eigen::Infinity>();
    ident.trace.push_back(m);
    if (m.discrepancy <= ident.eps) ident.minimizers.push_back(m);
  };
  int id = 0;
  for (const auto& pt : out.grid) add_minimizer(pt, id++);
  for (const auto& pt : out.refined) add_minimizer(pt, id++);
  ident.starts = id;
  ident.converged = id;
  assign_verdict(ident);
  return out;
}

AgarchIdentity agarch_identity_solve(double alpha_true, double gamma_true, const std::vector<double>& x_grid) {
  std::vector<std::string> bad;
  if (!(alpha_true > 0.0)) bad.push_back("alpha_true > 0");
  if (!(std::abs(gamma_true) <= 1.0)) bad.push_back("|gamma_true| <= 1");
  if (!bad.empty()) throw ValidationError(bad);
  double pos_num = 0.0, pos_den = 0.0, neg_num = 0.0, neg_den = 0.0;
  for (double x : x_grid) {
    const double y = alpha_true * std::pow(std::abs(x) - gamma_true * x, 2);
    const double x4 = x * x * x * x;
    if (x > 0.0) {
      pos_num += y * x * x;
      pos_den += x4;
    } else if (x < 0.0) {
      neg_num += y * x * x;
      neg_den += x4;
    }
  }
  if (pos_den == 0.0 || neg_den == 0.0) {
    throw UnderdeterminedError("the identity grid needs both positive and negative points");
  }
  // On x > 0 the identity reads alpha (1 - gamma)^2 x^2, on x < 0 alpha (1 + gamma)^2 x^2.
  const double ra = std::sqrt(pos_num / pos_den);
  const double rb = std::sqrt(neg_num / neg_den);
  AgarchIdentity out;
  out.alpha = 0.25 * (ra + rb) * (ra + rb);
  out.gamma = (rb - ra) / (ra + rb);
  for (double x : x_grid) {
    const double lhs = out.alpha * std::pow(std::abs(x) - out.gamma * x, 2);
    const double rhs = alpha_true * std::pow(std::abs(x) - gamma_true * x, 2);
    out.residual = std::max(out.residual, std::abs(lhs - rhs));
  }
  return out;
}

IntensityMap intgarch_intensity_map() {
  return [](double lambda, std::int64_t y, const Eigen::VectorXd& th) {
    const auto l = static_cast<double>(std::llround(th[4]));
    const auto yd = static_cast<double>(y);
    return th[0] + th[1] * yd + (th[2] - th[1]) * std::max(yd - l, 0.0) + th[3] * lambda;
  };
}

PoissonArCheck poisson_ar_condition_check(const IntensityMap& f, const Eigen::VectorXd& theta_true,
                                          const std::vector<double>& lambda_sample, std::int64_t y_max,
                                          const std::vector<Eigen::VectorXd>& probes) {
  if (lambda_sample.empty() || y_max < 0) throw ValidationError("need a non-empty lambda sample and y_max >= 0");
  for (double l : lambda_sample) {
    if (!(l >= 0.0)) throw ValidationError("lambda sample must be non-negative");
  }
  auto eval = [&](double lambda, std::int64_t y, const Eigen::VectorXd& th) {
    const double v = f(lambda, y, th);
    if (!(v >= 0.0)) {
      throw ValidationError("intensity map returned a negative or undefined value at lambda=" +
                            std::to_string(lambda) + ", y=" + std::to_string(y));
    }
    return v;
  };
  PoissonArCheck out;
  const std::size_t m = lambda_sample.size();
  for (std::int64_t y = 0; y <= y_max; ++y) {
    for (std::size_t i = 0; i < m; ++i) {
      const double fi = eval(lambda_sample[i], y, theta_true);
      for (std::size_t j = i + 1; j < m; ++j) {
        const double dl = std::abs(lambda_sample[i] - lambda_sample[j]);
        if (dl == 0.0) continue;
        out.kappa1 = std::max(out.kappa1, std::abs(fi - eval(lambda_sample[j], y, theta_true)) / dl);
      }
    }
  }
  for (double lambda : lambda_sample) {
    for (std::int64_t y = 0; y <= y_max; ++y) {
      const double fy = eval(lambda, y, theta_true);
      for (std::int64_t z = y + 1; z <= y_max; ++z) {
        out.kappa2 = std::max(out.kappa2, std::abs(fy - eval(lambda, z, theta_true)) / static_cast<double>(z - y));
      }
    }
  }
  out.contractive = out.kappa1 + out.kappa2 < 1.0;
  for (const auto& probe : probes) {
    ProbeDifference d;
    d.theta = probe;
    d.is_truth = probe.size() == theta_true.size() && probe == theta_true;
    for (double lambda : lambda_sample) {
      for (std::int64_t y = 0; y <= y_max; ++y) {
        d.max_difference = std::max(d.max_difference, std::abs(eval(lambda, y, probe) - eval(lambda, y, theta_true)));
      }
    }
    d.violation = !d.is_truth && d.max_difference == 0.0;
    out.condition_b_violated = out.condition_b_violated || d.violation;
    out.probes.push_back(d);
  }
  return out;
}

}  // namespace nlts
