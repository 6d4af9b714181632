#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlts/params.hpp"

namespace nlts {

enum class Verdict { pass, fail, undetermined };

std::string_view to_string(Verdict verdict);

/// A sufficient stationarity condition of the form value < threshold.
struct StationarityReport {
  std::string condition;
  double value = 0.0;
  std::vector<double> components;
  double threshold = 0.0;
  Verdict verdict = Verdict::undetermined;
  std::optional<double> mc_std_error;
  std::size_t mc_n = 0;
};

/// Monte Carlo estimate of E log(beta1 + (alpha11 + |alpha21|/2) eta^2) for
/// STGARCH(1,1,1). Undetermined when |estimate| <= 3 standard errors.
StationarityReport stgarch111_logmoment(const Valid<StgarchParams>& params, const InnovationSpec& innovation,
                                        std::size_t mc_n, std::uint64_t seed);

/// Monte Carlo estimate of E log(beta + alpha (|eta| - gamma eta)^2).
StationarityReport agarch_logmoment(const Valid<AgarchParams>& params, const InnovationSpec& innovation,
                                    std::size_t mc_n, std::uint64_t seed);

/// beta + max(alpha1, alpha2) < 1.
StationarityReport intgarch_condition(const Valid<IntgarchParams>& params);

struct SupGridSpec {
  std::size_t points = 10000;
  /// Window is [c_1 - span/gamma_min, c_M + span/gamma_min].
  double span = 20.0;
  double tolerance = 1e-8;
  std::size_t max_points = std::size_t{1} << 21;
};

/// sum_j sup_x |phi_0j + sum_i phi_ij G(x; gamma_i, c_i)| < 1.
StationarityReport star_sup_condition(const Valid<StarParams>& params, const SupGridSpec& grid = {});

/// max_i sum_j |sum_{k<=i} phi_kj| < 1.
StationarityReport star_partial_sum_condition(const Valid<StarParams>& params);

}  // namespace nlts
