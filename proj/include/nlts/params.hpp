#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "nlts/errors.hpp"

namespace nlts {

enum class Family { stgarch, agarch, intgarch, star };

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);

/// STGARCH(p, q, d): sigma2_t = omega + sum a1_i x_{t-i}^2
///   + (sum a2_i x_{t-i}^2) F(x_{t-d}, gamma) + sum b_j sigma2_{t-j}.
/// p = beta.size() may be zero; q = alpha1.size() >= 1.
struct StgarchParams {
  double gamma = 0.0;
  double omega = 0.0;
  std::vector<double> alpha1;
  std::vector<double> alpha2;
  std::vector<double> beta;
  int d = 1;

  int p() const noexcept { return static_cast<int>(beta.size()); }
  int q() const noexcept { return static_cast<int>(alpha1.size()); }
  double beta_sum() const noexcept;
};

/// AGARCH(1,1) with power 2: sigma2_t = omega + alpha (|x| - gamma x)^2 + beta sigma2_{t-1}.
struct AgarchParams {
  double omega = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Integer-valued threshold GARCH intensity
/// lambda_t = omega + a1 x_{t-1} + (a2 - a1)(x_{t-1} - l)^+ + beta lambda_{t-1}.
struct IntgarchParams {
  double omega = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta = 0.0;
  int l = 1;
};

/// Multiple-regime STAR(p) mean. Row i of `phi` is regime i's coefficient
/// vector (intercept, lag 1, ..., lag p); rows 1..M are weighted by the
/// logistic G(x_{t-d}; gamma[i-1], c[i-1]).
struct StarParams {
  Eigen::MatrixXd phi;
  Eigen::VectorXd gamma;
  Eigen::VectorXd c;
  int d = 1;

  int M() const noexcept { return static_cast<int>(gamma.size()); }
  int p() const noexcept { return phi.cols() > 0 ? static_cast<int>(phi.cols()) - 1 : 0; }
};

using AnyParams = std::variant<StgarchParams, AgarchParams, IntgarchParams, StarParams>;

Family family_of(const AnyParams& params);

/// Innovation law, always standardized to mean 0 and variance 1.
struct InnovationSpec {
  enum class Kind { normal, student_t, three_point };

  Kind kind = Kind::normal;
  double nu = 0.0;                       // student_t degrees of freedom
  std::array<double, 3> values{};        // three_point support (standardized)
  std::array<double, 3> probs{};         // three_point probabilities

  static InnovationSpec normal();
  static InnovationSpec student_t(double nu);
  /// Standardizes `raw` affinely under `probs`. The default gives {-sqrt2, 0, sqrt2}
  /// with probabilities (1/4, 1/2, 1/4).
  static InnovationSpec three_point(std::array<double, 3> probs = {0.25, 0.5, 0.25},
                                    std::array<double, 3> raw = {-1.0, 0.0, 1.0});

  double mean() const noexcept;
  double variance() const noexcept;
};

std::string_view to_string(InnovationSpec::Kind kind);

namespace detail {
struct ValidAccess;
}

/// A parameter record that has passed `validate`. Only `validate` and
/// `require_valid` create these.
template <typename P>
class Valid {
 public:
  const P& get() const noexcept { return params_; }
  const P& operator*() const noexcept { return params_; }
  const P* operator->() const noexcept { return &params_; }

 private:
  explicit Valid(P params) : params_(std::move(params)) {}
  P params_;
  friend struct detail::ValidAccess;
};

template <typename P>
class ValidationResult {
 public:
  ValidationResult(std::optional<Valid<P>> value, std::vector<std::string> violations)
      : value_(std::move(value)), violations_(std::move(violations)) {}

  bool ok() const noexcept { return value_.has_value(); }
  explicit operator bool() const noexcept { return ok(); }

  /// Throws ValidationError listing every violation when not ok.
  const Valid<P>& value() const {
    if (!value_) throw ValidationError(violations_);
    return *value_;
  }
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::optional<Valid<P>> value_;
  std::vector<std::string> violations_;
};

std::vector<std::string> violations(const StgarchParams& params);
std::vector<std::string> violations(const AgarchParams& params);
std::vector<std::string> violations(const IntgarchParams& params);
/// `require_identified` additionally demands every regime vector 1..M be non-zero.
std::vector<std::string> violations(const StarParams& params, bool require_identified = false);
std::vector<std::string> violations(const InnovationSpec& spec);

ValidationResult<StgarchParams> validate(const StgarchParams& params);
ValidationResult<AgarchParams> validate(const AgarchParams& params);
ValidationResult<IntgarchParams> validate(const IntgarchParams& params);
ValidationResult<StarParams> validate(const StarParams& params, bool require_identified = false);
ValidationResult<InnovationSpec> validate(const InnovationSpec& spec);

template <typename P>
Valid<P> require_valid(const P& params) {
  return validate(params).value();
}

namespace detail {
struct ValidAccess {
  template <typename P>
  static Valid<P> make(P params) {
    return Valid<P>(std::move(params));
  }
};
}  // namespace detail

// Continuous coordinates in a fixed order, used by estimation, curvature and
// identification reports. Integer parameters (d, l) are not included.
//   STGARCH:  gamma, omega, alpha1[1..q], alpha2[1..q], beta[1..p]
//   AGARCH:   omega, alpha, beta, gamma
//   INTGARCH: omega, alpha1, alpha2, beta
//   STAR:     phi row-major, gamma[1..M], c[1..M]
Eigen::VectorXd coordinates(const AnyParams& params);
std::vector<std::string> coordinate_names(const AnyParams& params);
/// Replaces the continuous coordinates of `shape`; integer fields are kept.
AnyParams with_coordinates(const AnyParams& shape, const Eigen::Ref<const Eigen::VectorXd>& coords);

/// Name and value of the integer parameter of a family (d or l).
std::string integer_parameter_name(const AnyParams& params);
int integer_parameter(const AnyParams& params);
AnyParams with_integer_parameter(const AnyParams& params, int value);

/// Violations of the matching `violations` overload (STAR without the
/// identified requirement).
std::vector<std::string> violations(const AnyParams& params);

}  // namespace nlts
