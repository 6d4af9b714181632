#include <doctest.h>

#include <cmath>

#include "nlts/quadrature.hpp"

using namespace nlts;

TEST_SUITE("mixture_independence") {
  TEST_CASE("Gauss-Hermite reproduces normal moments") {
    for (int order : {10, 200, 1600}) {
      const auto& rule = gauss_hermite(order);
      REQUIRE(rule.nodes.size() == order);
      CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
      double m2 = 0, m4 = 0, m6 = 0, m3 = 0;
      for (int i = 0; i < order; ++i) {
        const double x2 = rule.nodes[i] * rule.nodes[i];
        m2 += rule.weights[i] * x2;
        m3 += rule.weights[i] * x2 * rule.nodes[i];
        m4 += rule.weights[i] * x2 * x2;
        m6 += rule.weights[i] * x2 * x2 * x2;
      }
      CHECK(m2 == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(std::abs(m3) < 1e-13);
      CHECK(m4 == doctest::Approx(3.0).epsilon(1e-13));
      CHECK(m6 == doctest::Approx(15.0).epsilon(1e-13));
    }
  }

  TEST_CASE("Gauss-Hermite integrates E cos(Z) = exp(-1/2)") {
    const auto& rule = gauss_hermite(64);
    double s = 0.0;
    for (int i = 0; i < 64; ++i) s += rule.weights[i] * std::cos(rule.nodes[i]);
    CHECK(s == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  }

  TEST_CASE("small rule matches tabulated nodes") {
    // Probabilists' Hermite He_3 roots: 0, +-sqrt(3), weights 2/3, 1/6.
    const auto& rule = gauss_hermite(3);
    CHECK(rule.nodes.cwiseAbs().maxCoeff() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(rule.weights.maxCoeff() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  }

  TEST_CASE("exp-sinh half-line integrals") {
    CHECK(integrate_half_line([](double y) { return std::exp(-y); }).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate_half_line([](double y) { return 1.0 / (1.0 + y * y); }).value ==
          doctest::Approx(M_PI / 2).epsilon(1e-11));
    CHECK(integrate_half_line([](double y) { return std::log(y) * std::exp(-y); }).value ==
          doctest::Approx(-0.57721566490153286).epsilon(1e-11));
  }

  TEST_CASE("real-line integral and absolute scale") {
    const auto r = integrate_real_line([](double y) { return y * std::exp(-y * y); });
    CHECK(std::abs(r.value) < 1e-14);
    CHECK(r.absolute == doctest::Approx(1.0).epsilon(1e-11));
  }
}
