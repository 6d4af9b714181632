#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nlts/params.hpp"

namespace nlts {

/// Bounds on the transition smoothness used by searches. They are search
/// settings, not model constraints.
struct SearchBox {
  double stgarch_gamma_max = 50.0;
  double star_gamma_min = 0.01;
  double star_gamma_max = 100.0;
};

/// Summary statistics of an observed series used to scale start points.
struct DataScale {
  double mean = 0.0;
  double sd = 1.0;
  double second_moment = 1.0;
  double q10 = -1.0;
  double q90 = 1.0;
};

DataScale data_scale(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Unconstrained coordinates u for the continuous parameters of one family,
/// with the orders and integer parameter taken from `shape`.
///   STGARCH:  gamma = gmax logistic(u), omega = e^u, alpha1 = e^u,
///             alpha2 = 2 alpha1 tanh(u), beta_j = e^{u_j} / (1 + sum e^u)
///   AGARCH:   omega, alpha = e^u, beta = logistic(u), gamma = tanh(u)
///   INTGARCH: omega = e^u, alpha1, alpha2, beta = logistic(u)
///   STAR:     phi = u, gamma = gmin + (gmax - gmin) logistic(u),
///             c_1 = u, c_i = c_{i-1} + e^u
/// Natural coordinates may be fixed; fixed coordinates drop out of u and
/// later coordinates that depend on them use the fixed value.
class ParameterMap {
 public:
  explicit ParameterMap(AnyParams shape, SearchBox box = {});

  /// Number of free coordinates.
  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(free_.size()); }
  /// Number of natural continuous coordinates.
  Eigen::Index natural_size() const noexcept { return static_cast<Eigen::Index>(fixed_.size()); }

  void fix(Eigen::Index natural_index, double value);
  bool is_fixed(Eigen::Index natural_index) const { return fixed_[static_cast<std::size_t>(natural_index)].has_value(); }

  AnyParams decode(const Eigen::Ref<const Eigen::VectorXd>& u) const;
  /// Inverse of decode on the free coordinates; values on or beyond the
  /// edges of the map are pulled just inside.
  Eigen::VectorXd encode(const AnyParams& theta) const;

  const AnyParams& shape() const noexcept { return shape_; }
  const SearchBox& box() const noexcept { return box_; }

 private:
  Eigen::VectorXd full_encode(const AnyParams& theta) const;

  AnyParams shape_;
  SearchBox box_;
  std::vector<std::optional<double>> fixed_;
  std::vector<Eigen::Index> free_;
};

/// A start point for `shape`'s family built from a point of the unit cube
/// (one coordinate per natural continuous coordinate) and the data scale.
AnyParams start_point(const AnyParams& shape, const Eigen::Ref<const Eigen::VectorXd>& unit, const DataScale& scale);

}  // namespace nlts
