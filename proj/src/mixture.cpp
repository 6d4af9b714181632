#include "nlts/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "nlts/errors.hpp"
#include "nlts/quadrature.hpp"
#include "nlts/transition.hpp"

namespace nlts {

namespace {

Eigen::MatrixXd raw_gram(const std::vector<LogisticPair>& pairs, const GaussHermiteRule& rule, double sd) {
  const auto k = static_cast<Eigen::Index>(pairs.size());
  const Eigen::Index dim = 2 * k + 2;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd f(dim);
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    const double w = rule.weights[i];
    if (w == 0.0) continue;
    const double y = sd * rule.nodes[i];
    f[0] = 1.0;
    f[1] = y;
    for (Eigen::Index j = 0; j < k; ++j) {
      const double g = star_transition(y, pairs[j].gamma, pairs[j].c);
      f[2 + j] = g;
      f[2 + k + j] = y * g;
    }
    gram.selfadjointView<Eigen::Lower>().rankUpdate(f, w);
  }
  return gram.selfadjointView<Eigen::Lower>();
}

Eigen::MatrixXd normalize(const Eigen::MatrixXd& gram) {
  const Eigen::VectorXd s = gram.diagonal().cwiseSqrt().cwiseInverse();
  return s.asDiagonal() * gram * s.asDiagonal();
}

// log G(y) = -log(1 + exp(-z)), z = gamma (y - c), evaluated without overflow.
double log_logistic(double z) { return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z)); }

void check_strip(double s, double gamma) {
  if (!(gamma > 0.0) || !(s > 0.0) || !(s < gamma)) {
    throw DomainError("Laplace transform requires 0 < s < gamma");
  }
}

LaplaceQuadrature laplace_quadrature(double s, double gamma, double c, bool times_y) {
  check_strip(s, gamma);
  // Substituting y = c + u: e^{-cs} * integral of e^{-s u} (c + u)^m G(u; gamma, 0) du.
  auto integrand = [&](double u) {
    const double e = std::exp(-s * u + log_logistic(gamma * u));
    return times_y ? (c + u) * e : e;
  };
  const HalfLineResult value = integrate_real_line(integrand, 1e-11);
  const double shift = std::exp(-c * s);
  return {shift * value.value, shift * value.absolute};
}

}  // namespace

std::vector<std::string> gram_coefficient_names(std::size_t k) {
  std::vector<std::string> names{"d00", "d01"};
  for (std::size_t i = 1; i <= k; ++i) names.push_back("d" + std::to_string(i) + "0");
  for (std::size_t i = 1; i <= k; ++i) names.push_back("d" + std::to_string(i) + "1");
  return names;
}

GramReport gram_independence(const std::vector<LogisticPair>& pairs, const GramOptions& options) {
  std::vector<std::string> bad;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!(pairs[i].gamma > 0.0) || !std::isfinite(pairs[i].gamma)) {
      bad.push_back("pair " + std::to_string(i + 1) + ": gamma > 0");
    }
    if (!std::isfinite(pairs[i].c)) bad.push_back("pair " + std::to_string(i + 1) + ": c finite");
  }
  if (!(options.weight_sd > 0.0)) bad.push_back("weight_sd > 0");
  if (!bad.empty()) throw ValidationError(bad);

  GramReport report;
  report.pairs = pairs;
  report.delta = options.delta;
  report.weight_sd = options.weight_sd;

  int order = options.initial_order;
  Eigen::MatrixXd previous = normalize(raw_gram(pairs, gauss_hermite(order), options.weight_sd));
  for (;;) {
    const int next = 2 * order;
    if (next > options.max_order) {
      throw NumericalError("Gram quadrature did not converge by order " + std::to_string(options.max_order));
    }
    const Eigen::MatrixXd gram = raw_gram(pairs, gauss_hermite(next), options.weight_sd);
    const Eigen::MatrixXd current = normalize(gram);
    const double diff = (current - previous).cwiseAbs().maxCoeff();
    order = next;
    if (diff <= options.order_tolerance) {
      report.gram = gram;
      report.normalized_gram = current;
      report.order = order;
      report.order_disagreement = diff;
      break;
    }
    previous = current;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(report.normalized_gram, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = solver.eigenvalues()[0];
  report.independent = report.min_eigenvalue > options.delta;
  return report;
}

std::optional<NullVector> null_vector_extract(const GramReport& report) {
  if (report.min_eigenvalue >= report.delta) return std::nullopt;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(report.normalized_gram);
  const Eigen::Index dim = report.normalized_gram.rows();
  Eigen::Index nullity = 0;
  while (nullity < dim && solver.eigenvalues()[nullity] < report.delta) ++nullity;

  // Rows are the null-space basis; reduce to row echelon form with partial pivoting.
  Eigen::MatrixXd basis = solver.eigenvectors().leftCols(nullity).transpose();
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < dim && row < nullity; ++col) {
    Eigen::Index pivot = row;
    basis.col(col).segment(row, nullity - row).cwiseAbs().maxCoeff(&pivot);
    pivot += row;
    if (std::abs(basis(pivot, col)) < 1e-8) continue;
    basis.row(row).swap(basis.row(pivot));
    basis.row(row) /= basis(row, col);
    for (Eigen::Index r = 0; r < nullity; ++r) {
      if (r != row) basis.row(r) -= basis(r, col) * basis.row(row);
    }
    ++row;
  }
  const Eigen::VectorXd scale = report.gram.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::VectorXd d = scale.cwiseProduct(basis.row(0).transpose());
  d.normalize();
  // Fix the sign so the first clearly non-zero coefficient is positive.
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    if (std::abs(d[j]) > 1e-12) {
      if (d[j] < 0.0) d = -d;
      break;
    }
  }
  NullVector result;
  result.names = gram_coefficient_names(report.pairs.size());
  result.coefficients = d;
  result.residual = std::sqrt(std::max(0.0, d.dot(report.gram * d)));
  return result;
}

double logistic_laplace_F0(double s, double gamma, double c) {
  check_strip(s, gamma);
  const double a = std::numbers::pi / gamma;
  return a * std::exp(-c * s) / std::sin(a * s);
}

double logistic_laplace_F1(double s, double gamma, double c) {
  check_strip(s, gamma);
  const double a = std::numbers::pi / gamma;
  const double e = std::exp(-c * s);
  const double sn = std::sin(a * s);
  return a * c * e / sn + a * a * e * std::cos(a * s) / (sn * sn);
}

LaplaceQuadrature logistic_laplace_F0_quadrature(double s, double gamma, double c) {
  return laplace_quadrature(s, gamma, c, false);
}

LaplaceQuadrature logistic_laplace_F1_quadrature(double s, double gamma, double c) {
  return laplace_quadrature(s, gamma, c, true);
}

}  // namespace nlts
