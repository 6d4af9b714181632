#include <doctest.h>

#include "nlts/params.hpp"
#include "nlts/params_json.hpp"

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

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("model_core") {
  TEST_CASE("valid STGARCH passes and exposes its coordinates") {
    const auto r = validate(stgarch_truth());
    CHECK(r.ok());
    const AnyParams any = stgarch_truth();
    const Eigen::VectorXd c = coordinates(any);
    REQUIRE(c.size() == 5);
    CHECK(c[0] == 2.0);
    CHECK(c[4] == 0.5);
    CHECK(coordinate_names(any) == std::vector<std::string>{"gamma", "omega", "alpha1[1]", "alpha2[1]", "beta[1]"});
    CHECK(integer_parameter_name(any) == "d");
    CHECK(integer_parameter(any) == 1);
  }

  TEST_CASE("cone violation is reported") {
    auto p = stgarch_truth();
    p.alpha2 = {3.0 * 0.15};
    const auto v = violations(p);
    CHECK(mentions(v, "cone"));
    CHECK_THROWS_AS(require_valid(p), ValidationError);
  }

  TEST_CASE("cone boundary |alpha2| = 2 alpha1 is allowed") {
    auto p = stgarch_truth();
    p.alpha2 = {-0.3};
    CHECK(validate(p).ok());
  }

  TEST_CASE("beta simplex is strict") {
    auto p = stgarch_truth();
    p.beta = {0.6, 0.4};
    CHECK(mentions(violations(p), "Σβ < 1"));
    p.beta = {0.6, 0.39};
    CHECK(validate(p).ok());
  }

  TEST_CASE("every violation is listed at once") {
    StgarchParams p = stgarch_truth();
    p.omega = -1.0;
    p.gamma = -1.0;
    p.beta = {1.2};
    CHECK(violations(p).size() >= 3);
  }

  TEST_CASE("AGARCH and INTGARCH ranges") {
    AgarchParams a{0.1, 0.1, 1.0, 0.3};
    CHECK_FALSE(validate(a).ok());
    a.beta = 0.85;
    CHECK(validate(a).ok());
    a.gamma = 1.5;
    CHECK_FALSE(validate(a).ok());

    IntgarchParams i{1.0, 0.5, 0.2, 0.2, 4};
    CHECK(validate(i).ok());
    i.l = 0;
    CHECK_FALSE(validate(i).ok());
  }

  TEST_CASE("STAR thresholds must be ordered and regimes identified on request") {
    StarParams s;
    s.phi.resize(3, 2);
    s.phi << 0.2, 0.5, -0.4, 0.4, 0.1, 0.1;
    s.gamma = Eigen::Vector2d(4.0, 2.0);
    s.c = Eigen::Vector2d(1.0, 0.0);
    CHECK_FALSE(validate(s).ok());
    s.c = Eigen::Vector2d(0.0, 1.0);
    CHECK(validate(s).ok());
    s.phi.row(2).setZero();
    CHECK(validate(s).ok());
    CHECK_FALSE(validate(s, true).ok());
  }

  TEST_CASE("with_coordinates inverts coordinates") {
    StarParams s;
    s.phi.resize(2, 2);
    s.phi << 0.2, 0.5, -0.4, 0.4;
    s.gamma = Eigen::VectorXd::Constant(1, 4.0);
    s.c = Eigen::VectorXd::Constant(1, 0.0);
    s.d = 1;
    const AnyParams any = s;
    const AnyParams back = with_coordinates(any, coordinates(any));
    CHECK((coordinates(back) - coordinates(any)).norm() == 0.0);
    CHECK(integer_parameter(with_integer_parameter(any, 1)) == 1);
  }

  TEST_CASE("JSON round trip for every family") {
    std::vector<AnyParams> all{stgarch_truth(), AgarchParams{0.05, 0.1, 0.85, 0.3},
                               IntgarchParams{1.0, 0.5, 0.2, 0.2, 4}};
    for (const auto& p : all) {
      const AnyParams back = params_from_json(params_to_json(p));
      CHECK(family_of(back) == family_of(p));
      CHECK((coordinates(back) - coordinates(p)).norm() == 0.0);
    }
  }

  TEST_CASE("JSON rejects unknown keys") {
    auto doc = params_to_json(stgarch_truth());
    doc["delta"] = 1.0;
    CHECK_THROWS_AS(params_from_json(doc), ValidationError);
  }

  TEST_CASE("three-point innovation is standardized") {
    const auto spec = InnovationSpec::three_point({0.2, 0.5, 0.3}, {-2.0, 0.0, 1.0});
    CHECK(spec.mean() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(spec.variance() == doctest::Approx(1.0).epsilon(1e-14));
    const auto def = InnovationSpec::three_point();
    CHECK(def.values[2] == doctest::Approx(std::sqrt(2.0)));
  }
}
