#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlts/params.hpp"

namespace nlts {

inline constexpr std::size_t kDefaultBurnIn = 2000;

/// A simulated sample path after burn-in. `latent` holds sigma_t^2,
/// lambda_t or m_t aligned with `x`.
struct SimPath {
  Family family = Family::stgarch;
  Eigen::VectorXd x;
  Eigen::VectorXd latent;
  std::uint64_t seed = 0;
  std::uint32_t path_id = 0;
  std::size_t burn_in = 0;
  std::optional<InnovationSpec> innovation;  // absent for INTGARCH
  double noise_sd = 0.0;                     // STAR only
  std::vector<std::string> warnings;
};

/// Warns (does not refuse) when p + q > 2, where no stationarity criterion is available.
SimPath simulate_stgarch(const Valid<StgarchParams>& params, std::size_t n, std::size_t burn_in,
                         const InnovationSpec& innovation, std::uint64_t seed, std::uint32_t path_id = 0);

SimPath simulate_agarch(const Valid<AgarchParams>& params, std::size_t n, std::size_t burn_in,
                        const InnovationSpec& innovation, std::uint64_t seed, std::uint32_t path_id = 0);

/// Throws ConditionError unless beta + max(alpha1, alpha2) < 1.
SimPath simulate_intgarch(const Valid<IntgarchParams>& params, std::size_t n, std::size_t burn_in,
                          std::uint64_t seed, std::uint32_t path_id = 0);

/// Throws ConditionError unless one of the two STAR stationarity conditions
/// passes or `allow_unverified` is set.
SimPath simulate_star(const Valid<StarParams>& params, std::size_t n, std::size_t burn_in, double noise_sd,
                      std::uint64_t seed, bool allow_unverified = false, std::uint32_t path_id = 0);

struct SimulationRequest {
  std::size_t n = 0;
  std::size_t burn_in = kDefaultBurnIn;
  InnovationSpec innovation;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
  std::uint32_t path_id = 0;
  bool allow_unverified = false;
};

/// Validates `params` and dispatches on its family.
SimPath simulate(const AnyParams& params, const SimulationRequest& request);

/// CSV with header `t,x,latent`, one row per retained index, shortest
/// round-trip decimals.
void write_csv(std::ostream& out, const Eigen::Ref<const Eigen::VectorXd>& x,
               const Eigen::Ref<const Eigen::VectorXd>& latent);
void write_csv(std::ostream& out, const SimPath& path);

/// Reads the `x` column of a CSV (header with an `x` column, or a single
/// unnamed numeric column).
Eigen::VectorXd read_series_csv(std::istream& in);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

}  // namespace nlts
