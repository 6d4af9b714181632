#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nlts {

struct LogisticPair {
  double gamma = 1.0;
  double c = 0.0;
};

struct GramOptions {
  /// Standard deviation of the Gaussian weight.
  double weight_sd = 2.0;
  int initial_order = 200;
  int max_order = 6400;
  /// Successive-order agreement required of the normalized Gram.
  double order_tolerance = 1e-9;
  /// Independence threshold on the normalized minimal eigenvalue.
  double delta = 1e-8;
};

/// Gram matrix of (1, y, G_1..G_k, y G_1..y G_k) under the Gaussian weight,
/// with G_i(y) = G(y; gamma_i, c_i).
struct GramReport {
  std::vector<LogisticPair> pairs;
  Eigen::MatrixXd gram;
  Eigen::MatrixXd normalized_gram;
  bool normalized = true;
  double min_eigenvalue = 0.0;
  double delta = 0.0;
  bool independent = false;
  int order = 0;
  double order_disagreement = 0.0;
  double weight_sd = 0.0;
};

/// Names of the family members in Gram order: d00, d01, d10..dk0, d11..dk1,
/// the coefficients of 1, y, G_i and y G_i.
std::vector<std::string> gram_coefficient_names(std::size_t k);

/// Throws ValidationError for gamma <= 0 and NumericalError when the order
/// doubling does not settle by `max_order`.
GramReport gram_independence(const std::vector<LogisticPair>& pairs, const GramOptions& options = {});

struct NullVector {
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;  // unit norm, raw (unnormalized) family
  /// Weighted L2 norm of sum_j coefficients[j] f_j.
  double residual = 0.0;
};

/// A coefficient vector in the numerical null space when the report is
/// dependent. The null space is reduced to row echelon form first, so a
/// duplicated pair yields +-1/sqrt2 on the two matching G coordinates.
std::optional<NullVector> null_vector_extract(const GramReport& report);

/// Two-sided Laplace transform of G(y; gamma, c): (pi/gamma) e^{-cs} / sin(pi s/gamma).
/// Throws DomainError unless 0 < s < gamma.
double logistic_laplace_F0(double s, double gamma, double c);
/// Two-sided Laplace transform of y G(y; gamma, c).
double logistic_laplace_F1(double s, double gamma, double c);

struct LaplaceQuadrature {
  double value = 0.0;
  /// Integral of the absolute integrand.
  double absolute = 0.0;
};

/// Direct numerical integration of the same transforms, split at y = c.
LaplaceQuadrature logistic_laplace_F0_quadrature(double s, double gamma, double c);
LaplaceQuadrature logistic_laplace_F1_quadrature(double s, double gamma, double c);

}  // namespace nlts
