#include <doctest.h>

#include <cmath>

#include "nlts/estimate.hpp"
#include "nlts/filter.hpp"
#include "nlts/reparam.hpp"
#include "nlts/rng.hpp"
#include "nlts/simulate.hpp"
#include "oracles.hpp"

using namespace nlts;

namespace {

StgarchParams stgarch_truth() {
  StgarchParams p;
  p.gamma = 2.0;
  p.omega = 0.1;
  p.alpha1 = {0.15};
  p.alpha2 = {0.2};
  p.beta = {0.5};
  return p;
}

StarParams star_truth() {
  StarParams p;
  p.phi.resize(2, 2);
  p.phi << 0.2, 0.5, -0.4, 0.4;
  p.gamma = Eigen::VectorXd::Constant(1, 4.0);
  p.c = Eigen::VectorXd::Constant(1, 0.0);
  return p;
}

}  // namespace

TEST_SUITE("estimate") {
  TEST_CASE("every unconstrained point decodes to a valid parameter") {
    std::vector<AnyParams> shapes{stgarch_truth(), AgarchParams{0.05, 0.1, 0.85, 0.3},
                                  IntgarchParams{1.0, 0.5, 0.2, 0.2, 4}, star_truth()};
    StgarchParams two = stgarch_truth();
    two.alpha1 = {0.1, 0.1};
    two.alpha2 = {0.1, -0.1};
    two.beta = {0.3, 0.3};
    shapes.push_back(two);
    for (const auto& shape : shapes) {
      const ParameterMap map(shape);
      for (int i = 0; i < 200; ++i) {
        RandomStream r(1, 0, static_cast<std::uint64_t>(i));
        Eigen::VectorXd u(map.size());
        for (Eigen::Index k = 0; k < u.size(); ++k) u[k] = 8.0 * (r.uniform() - 0.5);
        REQUIRE(violations(map.decode(u)).empty());
      }
    }
  }

  TEST_CASE("encode inverts decode") {
    for (const AnyParams& shape : std::vector<AnyParams>{stgarch_truth(), AgarchParams{0.05, 0.1, 0.85, 0.3},
                                                         IntgarchParams{1.0, 0.5, 0.2, 0.2, 4}, star_truth()}) {
      const ParameterMap map(shape);
      const AnyParams back = map.decode(map.encode(shape));
      CHECK((coordinates(back) - coordinates(shape)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("fixed coordinates stay put") {
    ParameterMap map(stgarch_truth());
    map.fix(0, 3.0);
    CHECK(map.size() == 4);
    const AnyParams p = map.decode(Eigen::VectorXd::Zero(4));
    CHECK(coordinates(p)[0] == 3.0);
  }

  TEST_CASE("Gaussian QMLE objective matches the literal sum") {
    const SimPath path = simulate(stgarch_truth(), {3000, 200, InnovationSpec::normal(), 1.0, 3});
    const std::size_t w = 100;
    const LatentPath h = filter(stgarch_truth(), path.x);
    double s = 0.0;
    for (Eigen::Index t = w; t < path.x.size(); ++t) s += std::log(h.values[t]) + path.x[t] * path.x[t] / h.values[t];
    s /= static_cast<double>(path.x.size() - static_cast<Eigen::Index>(w));
    CHECK(gaussian_qmle_objective(stgarch_truth(), path.x, w) == doctest::Approx(s).epsilon(1e-13));
  }

  TEST_CASE("Poisson objective matches the literal sum") {
    const IntgarchParams p{1.0, 0.5, 0.2, 0.2, 4};
    const SimPath path = simulate(p, {3000, 200, InnovationSpec::normal(), 1.0, 4});
    const Eigen::VectorXd lam = oracle::intgarch(path.x, 1.0, 0.5, 0.2, 0.2, 4);
    double s = 0.0;
    for (Eigen::Index t = 50; t < lam.size(); ++t) s += lam[t] - path.x[t] * std::log(lam[t]);
    s /= static_cast<double>(lam.size() - 50);
    CHECK(poisson_qmle_objective(p, path.x, 50) == doctest::Approx(s).epsilon(1e-12));
  }

  TEST_CASE("STAR objective at the truth with vanishing noise") {
    const SimPath path = simulate(star_truth(), {5000, 200, InnovationSpec::normal(), 1e-8, 5});
    CHECK(star_nls_objective(star_truth(), path.x, 1) < 1e-10);
  }

  TEST_CASE("AGARCH QMLE recovers the truth") {
    const AgarchParams truth{0.05, 0.1, 0.85, 0.3};
    const SimPath path = simulate(truth, {40000, 2000, InnovationSpec::normal(), 1.0, 6});
    EstimationOptions o;
    o.n_starts = 4;
    o.seed = 1;
    const FitResult fit = gaussian_qmle_agarch(path.x, o);
    const Eigen::VectorXd est = coordinates(fit.theta_hat);
    const Eigen::VectorXd tru = coordinates(truth);
    for (Eigen::Index k = 0; k < est.size(); ++k) CHECK(std::abs(est[k] - tru[k]) < 0.25 * std::abs(tru[k]));
    CHECK(fit.objective <= gaussian_qmle_objective(truth, path.x, fit.warm_up) + 1e-12);
    REQUIRE(fit.curvature.has_value());
    CHECK(fit.curvature->min_eigenvalue > 0.0);
  }

  TEST_CASE("STAR least squares recovers the truth and the delay") {
    const SimPath path = simulate(star_truth(), {20000, 2000, InnovationSpec::normal(), 1.0, 7});
    EstimationOptions o;
    o.n_starts = 6;
    o.seed = 2;
    o.compute_curvature = false;
    const FitResult fit = star_nls(path.x, {1}, 1, 1, o);
    CHECK(integer_parameter(fit.theta_hat) == 1);
    const Eigen::VectorXd est = coordinates(fit.theta_hat);
    CHECK(std::abs(est[4] - 4.0) < 1.0);
    CHECK(std::abs(est[1] - 0.5) < 0.05);
    CHECK(fit.objective <= star_nls_objective(star_truth(), path.x, fit.warm_up) + 1e-12);
  }

  TEST_CASE("too short a series is rejected") {
    CHECK_THROWS_AS(gaussian_qmle_agarch(Eigen::VectorXd::Ones(100)), ValidationError);
  }

  TEST_CASE("curvature: alpha2 = 0 makes the gamma direction flat") {
    StgarchParams p = stgarch_truth();
    p.alpha2 = {0.0};
    const SimPath path = simulate(p, {20000, 2000, InnovationSpec::normal(), 1.0, 8});
    const Curvature flat = curvature_at(p, path.x);
    CHECK(flat.min_eigenvalue < 1e-10);
    const SimPath path2 = simulate(stgarch_truth(), {20000, 2000, InnovationSpec::normal(), 1.0, 8});
    const Curvature full = curvature_at(stgarch_truth(), path2.x);
    CHECK(full.min_eigenvalue > 1e-6);
  }

  TEST_CASE("curvature refuses points on the boundary") {
    StgarchParams p = stgarch_truth();
    p.gamma = 0.0;
    const SimPath path = simulate(stgarch_truth(), {2000, 200, InnovationSpec::normal(), 1.0, 9});
    CHECK_THROWS_AS(curvature_at(p, path.x), DomainError);
  }
}
