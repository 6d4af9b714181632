#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nlts/ident.hpp"
#include "nlts/simulate.hpp"

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

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

IdentReport synthetic_report(const AnyParams& truth, const std::vector<AnyParams>& points) {
  IdentReport r;
  r.theta_true = truth;
  r.rho = 0.05;
  r.scales = standardization_scales(truth);
  r.coordinate_names = coordinate_names(truth);
  r.coordinate_names.push_back(integer_parameter_name(truth));
  const Eigen::VectorXd z0 = standardized(truth, r.scales);
  for (const auto& p : points) {
    Minimizer m;
    m.theta = p;
    m.distance = (standardized(p, r.scales) - z0).lpNorm<Eigen::Infinity>();
    m.converged = true;
    r.minimizers.push_back(m);
  }
  assign_verdict(r);
  return r;
}

}  // namespace

TEST_SUITE("ident") {
  TEST_CASE("standardization divides by max(|theta|, 1) and appends the integer") {
    const Eigen::VectorXd s = standardization_scales(stgarch_truth());
    REQUIRE(s.size() == 6);
    CHECK(s[0] == 2.0);
    CHECK(s[1] == 1.0);
    CHECK(s[5] == 1.0);
  }

  TEST_CASE("discrepancy vanishes at the truth and is positive elsewhere") {
    const SimPath path = simulate(stgarch_truth(), {5000, 500, InnovationSpec::normal(), 1.0, 1});
    CHECK(discrepancy(stgarch_truth(), stgarch_truth(), path.x, 100) == 0.0);
    StgarchParams other = stgarch_truth();
    other.omega = 0.12;
    CHECK(discrepancy(other, stgarch_truth(), path.x, 100) > 1e-6);
  }

  TEST_CASE("verdicts from synthetic minimizers") {
    const AnyParams truth = stgarch_truth();
    SUBCASE("all at the truth") {
      StgarchParams near = stgarch_truth();
      near.omega += 0.01;
      const IdentReport r = synthetic_report(truth, {truth, near});
      CHECK(r.verdict == IdentVerdict::point_identified);
      CHECK(r.clusters == 1);
    }
    SUBCASE("a spread along gamma and alpha2") {
      StgarchParams a = stgarch_truth(), b = stgarch_truth();
      a.gamma = 7.0;
      b.alpha2 = {-0.2};
      const IdentReport r = synthetic_report(truth, {truth, a, b});
      CHECK(r.verdict == IdentVerdict::ridge);
      CHECK(r.free_coordinates == std::vector<std::string>{"gamma", "alpha2[1]"});
      CHECK(contains(r.identified_subvector, "omega"));
      CHECK(r.clusters == 3);
    }
    SUBCASE("nothing found") {
      const IdentReport r = synthetic_report(truth, {});
      CHECK(r.verdict == IdentVerdict::inconclusive);
    }
  }

  TEST_CASE("INTGARCH search on a short series finds the truth and the threshold") {
    const IntgarchParams truth{1.0, 0.5, 0.2, 0.2, 4};
    SearchOptions o;
    o.n = 20000;
    o.starts = 20;
    o.seed = 3;
    o.search_seed = 4;
    const IdentReport r = equivalence_search(truth, o);
    CHECK(r.verdict == IdentVerdict::point_identified);
    CHECK_FALSE(r.minimizers.empty());
    for (const auto& m : r.minimizers) CHECK(integer_parameter(m.theta) == 4);
  }

  TEST_CASE("INTGARCH with equal slopes leaves the threshold free") {
    const IntgarchParams truth{1.0, 0.3, 0.3, 0.2, 4};
    SearchOptions o;
    o.n = 20000;
    o.starts = 20;
    // Thresholds above every observed count would free alpha2 as well.
    o.integer_grid = {2, 4, 6};
    o.seed = 3;
    o.search_seed = 4;
    const IdentReport r = equivalence_search(truth, o);
    CHECK(r.verdict == IdentVerdict::ridge);
    CHECK(r.free_coordinates == std::vector<std::string>{"l"});
  }

  TEST_CASE("common roots of the ARCH and GARCH polynomials") {
    // alpha(z) = 0.1 z - 0.05 z^2 and beta(z) = 1 - 0.5 z share z = 2.
    const RootCheck bad = common_root_check({0.1, -0.05}, {0.5});
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.common_root.has_value());
    CHECK(std::abs(*bad.common_root - std::complex<double>(2.0, 0.0)) < 1e-8);

    const RootCheck good = common_root_check({0.15}, {0.5});
    CHECK(good.pass);
    CHECK_FALSE(common_root_check({0.0}, {0.5}).pass);
  }

  TEST_CASE("partial probe needs alpha2 = 0 or gamma = 0") {
    CHECK_THROWS_AS(stgarch_partial_ident_probe(stgarch_truth(), {}), ConditionError);
  }

  TEST_CASE("partial probe on the alpha2 = 0 manifold") {
    StgarchParams p = stgarch_truth();
    p.alpha2 = {0.0};
    PartialProbeOptions o;
    o.n = 20000;
    o.seed = 2;
    const PartialProbeReport r = stgarch_partial_ident_probe(p, o);
    CHECK(r.root_check.pass);
    CHECK(r.max_grid_discrepancy < 1e-12);
    CHECK(r.ridge_holds);
    CHECK(r.off_manifold_separated);
    CHECK(r.min_perturbation_discrepancy > r.ident.eps);
    CHECK(r.subvector_constant);
    CHECK(r.subvector_max_deviation <= 1e-6);
    CHECK(r.ident.verdict == IdentVerdict::ridge);
    CHECK(contains(r.ident.free_coordinates, "gamma"));
  }

  TEST_CASE("AGARCH identity solve") {
    const std::vector<double> grid{-2.0, -0.5, 0.5, 1.5};
    const AgarchIdentity r = agarch_identity_solve(0.3, -0.4, grid);
    CHECK(r.alpha == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(r.gamma == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(r.residual < 1e-14);
    CHECK_THROWS_AS(agarch_identity_solve(0.3, -0.4, {0.5, 1.0}), UnderdeterminedError);
    CHECK_THROWS_AS(agarch_identity_solve(0.3, -0.4, {-0.5, -1.0}), UnderdeterminedError);
  }

  TEST_CASE("AGARCH identity solve with one point of each sign") {
    const AgarchIdentity r = agarch_identity_solve(0.8, 0.9, {-1.0, 1.0});
    CHECK(r.alpha == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(r.gamma == doctest::Approx(0.9).epsilon(1e-12));
  }

  TEST_CASE("Poisson autoregression conditions for INTGARCH") {
    const Eigen::VectorXd truth = (Eigen::VectorXd(5) << 1.0, 0.5, 0.2, 0.2, 4.0).finished();
    std::vector<double> lambdas;
    for (int i = 0; i <= 20; ++i) lambdas.push_back(0.5 * i);
    Eigen::VectorXd other_l = truth;
    other_l[4] = 6.0;
    const PoissonArCheck r = poisson_ar_condition_check(intgarch_intensity_map(), truth, lambdas, 15, {truth, other_l});
    CHECK(r.kappa1 == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(r.kappa2 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.contractive);
    CHECK(r.probes[0].is_truth);
    CHECK_FALSE(r.condition_b_violated);

    const Eigen::VectorXd equal = (Eigen::VectorXd(5) << 1.0, 0.3, 0.3, 0.2, 4.0).finished();
    Eigen::VectorXd moved = equal;
    moved[4] = 7.0;
    const PoissonArCheck e = poisson_ar_condition_check(intgarch_intensity_map(), equal, lambdas, 15, {moved});
    CHECK(e.condition_b_violated);
  }
}
