#include <doctest.h>

#include <cmath>

#include "nlts/errors.hpp"
#include "nlts/mixture.hpp"
#include "oracles.hpp"

using namespace nlts;

namespace {

// E_w[f_i f_j] with w = N(0, sd^2) by Simpson on +-12 sd.
Eigen::MatrixXd gram_oracle(const std::vector<LogisticPair>& pairs, double sd) {
  const auto k = static_cast<int>(pairs.size());
  const int dim = 2 + 2 * k;
  auto fam = [&](double y, int i) {
    if (i == 0) return 1.0;
    if (i == 1) return y;
    if (i < 2 + k) return oracle::logistic(y, pairs[i - 2].gamma, pairs[i - 2].c);
    return y * oracle::logistic(y, pairs[i - 2 - k].gamma, pairs[i - 2 - k].c);
  };
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      g(i, j) = g(j, i) = oracle::simpson(
          [&](double y) { return fam(y, i) * fam(y, j) * std::exp(-0.5 * y * y / (sd * sd)) / (sd * std::sqrt(2 * M_PI)); },
          -12 * sd, 12 * sd, 20000);
    }
  }
  return g;
}

}  // namespace

TEST_SUITE("mixture_independence") {
  TEST_CASE("Gram entries agree with direct integration") {
    const std::vector<LogisticPair> pairs{{0.5, -1.0}, {2.0, 1.5}};
    const GramReport r = gram_independence(pairs);
    const Eigen::MatrixXd ref = gram_oracle(pairs, 2.0);
    CHECK((r.gram - ref).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(r.normalized_gram.diagonal().isOnes(1e-14));
  }

  TEST_CASE("distinct pairs are independent") {
    for (const auto& pairs : std::vector<std::vector<LogisticPair>>{
             {{1.0, 0.0}}, {{0.5, -1.0}, {1.0, 0.0}, {2.0, 1.5}}, {{1.0, 0.0}, {1.0, 0.5}}}) {
      const GramReport r = gram_independence(pairs);
      CHECK(r.independent);
      CHECK(r.min_eigenvalue > 1e-8);
      CHECK_FALSE(null_vector_extract(r).has_value());
    }
  }

  TEST_CASE("an exact duplicate is dependent with the difference as null vector") {
    const GramReport r = gram_independence({{1.0, 0.0}, {1.0, 0.0}});
    CHECK_FALSE(r.independent);
    CHECK(std::abs(r.min_eigenvalue) < 1e-12);
    const auto nv = null_vector_extract(r);
    REQUIRE(nv.has_value());
    CHECK(nv->names == gram_coefficient_names(2));
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(nv->coefficients[2] == doctest::Approx(h).epsilon(1e-10));
    CHECK(nv->coefficients[3] == doctest::Approx(-h).epsilon(1e-10));
    CHECK(nv->coefficients[0] == doctest::Approx(0.0));
    CHECK(nv->residual < 1e-7);
  }

  TEST_CASE("coefficient names follow the family order") {
    CHECK(gram_coefficient_names(2) == std::vector<std::string>{"d00", "d01", "d10", "d20", "d11", "d21"});
  }

  TEST_CASE("non-positive smoothness is rejected") {
    CHECK_THROWS_AS(gram_independence({{0.0, 1.0}}), ValidationError);
  }

  TEST_CASE("F0 at (1/2; 1, 0) is pi") {
    CHECK(logistic_laplace_F0(0.5, 1.0, 0.0) == doctest::Approx(M_PI).epsilon(1e-15));
  }

  TEST_CASE("F1 at (1/2; 1, 0) vanishes") {
    CHECK(std::abs(logistic_laplace_F1(0.5, 1.0, 0.0)) < 1e-14);
  }

  TEST_CASE("closed forms agree with direct Simpson integration") {
    for (const auto& [s, g, c] : std::vector<std::array<double, 3>>{{0.3, 1.0, 0.0}, {1.2, 2.0, 0.7}, {0.1, 3.0, -1.5}}) {
      auto f0 = [&](double y) { return std::exp(-s * y) * oracle::logistic(y, g, c); };
      auto f1 = [&](double y) { return y * f0(y); };
      const double lo = c - 60.0 / (g - s), hi = c + 60.0 / s;
      const double r0 = oracle::simpson(f0, lo, hi, 400000);
      const double r1 = oracle::simpson(f1, lo, hi, 400000);
      CHECK(logistic_laplace_F0(s, g, c) == doctest::Approx(r0).epsilon(1e-8));
      CHECK(std::abs(logistic_laplace_F1(s, g, c) - r1) < 1e-8 * std::max(1.0, std::abs(r1)));
    }
  }

  TEST_CASE("F1 is minus the s-derivative of F0") {
    const double s = 0.8, g = 2.5, c = 0.4, h = 1e-4;
    const double d = (-logistic_laplace_F0(s + 2 * h, g, c) + 8 * logistic_laplace_F0(s + h, g, c) -
                      8 * logistic_laplace_F0(s - h, g, c) + logistic_laplace_F0(s - 2 * h, g, c)) /
                     (12 * h);
    CHECK(logistic_laplace_F1(s, g, c) == doctest::Approx(-d).epsilon(1e-9));
  }

  TEST_CASE("quadrature path agrees with the closed forms") {
    const auto q0 = logistic_laplace_F0_quadrature(1.2, 2.0, 0.7);
    const auto q1 = logistic_laplace_F1_quadrature(1.2, 2.0, 0.7);
    CHECK(q0.value == doctest::Approx(logistic_laplace_F0(1.2, 2.0, 0.7)).epsilon(1e-10));
    CHECK(std::abs(q1.value - logistic_laplace_F1(1.2, 2.0, 0.7)) < 1e-10 * q1.absolute);
  }

  TEST_CASE("outside the strip is a domain error") {
    CHECK_THROWS_AS(logistic_laplace_F0(0.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(logistic_laplace_F1(1.0, 1.0, 0.0), DomainError);
  }
}
