#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlts/params.hpp"
#include "nlts/reparam.hpp"
#include "nlts/simulate.hpp"

namespace nlts {

enum class IdentVerdict { point_identified, ridge, inconclusive };

std::string_view to_string(IdentVerdict verdict);

struct SearchOptions {
  std::size_t n = 100000;
  std::size_t burn_in = kDefaultBurnIn;
  int starts = 50;
  /// eps = eps_rel * mean of h_t(theta_true)^2 after warm-up.
  double eps_rel = 1e-10;
  /// Clustering radius in the infinity norm of standardized coordinates
  /// (theta_k / max(|theta_true_k|, 1)).
  double rho = 0.05;
  std::uint64_t seed = 0;         // data
  std::uint64_t search_seed = 0;  // start points
  InnovationSpec innovation;
  double noise_sd = 1.0;
  bool allow_unverified = false;
  /// Values of the integer parameter (d or l) visited by the starts; start i
  /// uses grid[i mod size]. Empty picks {d_true} for STGARCH, 1..10 for
  /// INTGARCH and 1..p for STAR.
  std::vector<int> integer_grid;
  SearchBox box;
  /// Minimizers whose smoothness lies within this fraction of the cap are
  /// reported as boundary-flat.
  double boundary_fraction = 0.01;
  int threads = 0;
  /// 0 picks the family default.
  std::size_t warm_up = 0;
  int nm_evaluations = 200;
  Eigen::Index coarse_length = 5000;
};

struct Minimizer {
  int start_id = 0;
  AnyParams theta;
  double discrepancy = 0.0;
  /// Standardized infinity-norm distance to theta_true, integer parameter included.
  double distance = 0.0;
  bool converged = false;
  bool boundary_flat = false;
};

struct IdentReport {
  Family family = Family::stgarch;
  AnyParams theta_true;
  std::size_t n = 0;
  std::size_t warm_up = 0;
  std::uint64_t seed = 0;
  double eps = 0.0;
  double latent_scale = 0.0;
  double rho = 0.0;
  /// Continuous coordinates followed by the integer parameter, if any.
  std::vector<std::string> coordinate_names;
  Eigen::VectorXd scales;
  /// Converged endpoints with D <= eps away from the smoothness cap.
  std::vector<Minimizer> minimizers;
  std::vector<Minimizer> boundary_flat;
  /// Every endpoint, in start order.
  std::vector<Minimizer> trace;
  int starts = 0;
  int converged = 0;
  int clusters = 0;
  double max_distance = 0.0;
  IdentVerdict verdict = IdentVerdict::inconclusive;
  std::vector<std::string> free_coordinates;
  std::vector<std::string> identified_subvector;
  std::vector<std::string> notes;
};

/// Simulates a path at theta_true and searches for parameters whose latent
/// path matches h(theta_true) on it.
IdentReport equivalence_search(const AnyParams& theta_true, const SearchOptions& options);

/// Same search on a given series (no simulation; n and seed are ignored).
IdentReport equivalence_search_on_series(const AnyParams& theta_true, const Eigen::Ref<const Eigen::VectorXd>& x,
                                         const SearchOptions& options);

/// D(theta) = (1/n_eff) sum_{t >= warm_up} (h_t(theta) - h_t(theta_true))^2.
double discrepancy(const AnyParams& theta, const AnyParams& theta_true, const Eigen::Ref<const Eigen::VectorXd>& x,
                   std::size_t warm_up);

/// Standardized coordinates used for clustering: continuous coordinates and
/// the integer parameter, each divided by max(|theta_true_k|, 1).
Eigen::VectorXd standardized(const AnyParams& theta, const Eigen::Ref<const Eigen::VectorXd>& scales);
Eigen::VectorXd standardization_scales(const AnyParams& theta_true);

/// Fills verdict, clusters, free coordinates and identified subvector from
/// the minimizers already in the report.
void assign_verdict(IdentReport& report);

struct RootCheck {
  bool pass = false;
  std::string reason;
  std::optional<std::complex<double>> common_root;
  std::vector<std::complex<double>> alpha_roots;
  std::vector<std::complex<double>> beta_roots;
  std::vector<std::string> warnings;
};

/// Roots of alpha(z) = sum_i alpha_i z^i and beta(z) = 1 - sum_j beta_j z^j
/// compared to 1e-8 relative. Fails for alpha = 0, for alpha_q = beta_p = 0
/// and, conservatively, when root finding is ill-conditioned.
RootCheck common_root_check(const std::vector<double>& alpha1, const std::vector<double>& beta);

struct PartialProbeOptions {
  std::size_t n = 100000;
  std::size_t burn_in = kDefaultBurnIn;
  std::uint64_t seed = 0;
  InnovationSpec innovation;
  std::vector<double> gamma_grid{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  /// alpha2 values on the gamma = 0 manifold, as multiples of 2 alpha1;
  /// empty picks 11 points spanning [-1, 1].
  std::vector<double> alpha2_fractions;
  double eps_rel = 1e-10;
  double rho = 0.05;
  double perturbation = 0.02;
  /// gamma values at which a ridge point is refined with everything but
  /// gamma free.
  std::vector<double> refine_gammas{0, 1, 5, 10};
  double subvector_tolerance = 1e-6;
  SearchBox box;
  std::size_t warm_up = 0;
};

struct ProbePoint {
  std::string manifold;
  AnyParams theta;
  double discrepancy = 0.0;
};

struct PartialProbeReport {
  IdentReport ident;
  RootCheck root_check;
  std::vector<ProbePoint> grid;
  double max_grid_discrepancy = 0.0;
  bool ridge_holds = false;
  std::vector<ProbePoint> perturbations;
  double min_perturbation_discrepancy = 0.0;
  bool off_manifold_separated = false;
  std::vector<ProbePoint> refined;
  /// Largest deviation of (omega, alpha1, beta) from the truth over refined points.
  double subvector_max_deviation = 0.0;
  bool subvector_constant = false;
};

/// Partial-identification probe for STGARCH truths with alpha2 = 0 or
/// gamma = 0. Throws ConditionError when neither holds or when the
/// polynomial common-root condition fails.
PartialProbeReport stgarch_partial_ident_probe(const StgarchParams& theta_true, const PartialProbeOptions& options);

struct AgarchIdentity {
  double alpha = 0.0;
  double gamma = 0.0;
  /// Largest absolute violation of the identity on the grid.
  double residual = 0.0;
};

/// Solves alpha (|x| - gamma x)^2 = alpha_true (|x| - gamma_true x)^2 on the
/// grid in the least-squares sense. Throws UnderdeterminedError unless the
/// grid has points of both signs.
AgarchIdentity agarch_identity_solve(double alpha_true, double gamma_true, const std::vector<double>& x_grid);

/// lambda' = f(lambda, y, theta).
using IntensityMap = std::function<double(double lambda, std::int64_t y, const Eigen::VectorXd& theta)>;

/// INTGARCH intensity with theta = (omega, alpha1, alpha2, beta, l), l rounded.
IntensityMap intgarch_intensity_map();

struct ProbeDifference {
  Eigen::VectorXd theta;
  double max_difference = 0.0;
  bool is_truth = false;
  bool violation = false;
};

struct PoissonArCheck {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  bool contractive = false;
  std::vector<ProbeDifference> probes;
  bool condition_b_violated = false;
};

/// Lipschitz estimates from difference quotients over sampled pairs and, for
/// each probe, the largest |f(.,., probe) - f(.,., theta_true)| on the
/// (lambda, y) grid. Throws ValidationError when f returns a negative value.
PoissonArCheck poisson_ar_condition_check(const IntensityMap& f, const Eigen::VectorXd& theta_true,
                                          const std::vector<double>& lambda_sample, std::int64_t y_max,
                                          const std::vector<Eigen::VectorXd>& probes);

}  // namespace nlts
