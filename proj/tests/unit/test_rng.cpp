#include <doctest.h>

#include <cmath>

#include "nlts/rng.hpp"

using namespace nlts;

TEST_SUITE("simulate") {
  TEST_CASE("philox4x32-10 known-answer vectors") {
    using B = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  }

  TEST_CASE("cells are reproducible and distinct") {
    RandomStream a(7, 0, 10), b(7, 0, 10), c(7, 0, 11), d(7, 1, 10), e(8, 0, 10);
    const double va = a.uniform();
    CHECK(va == b.uniform());
    CHECK(va != c.uniform());
    CHECK(va != d.uniform());
    CHECK(va != e.uniform());
  }

  TEST_CASE("normal draws have unit variance") {
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      RandomStream r(3, 0, static_cast<std::uint64_t>(i));
      const double z = r.normal();
      s += z;
      s2 += z * z;
    }
    CHECK(std::abs(s / n) < 5.0 / std::sqrt(n));
    CHECK(std::abs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
  }

  TEST_CASE("poisson mean and variance across the inversion/PTRS switch") {
    for (double lambda : {0.7, 12.0, 45.0}) {
      const int n = 100000;
      double s = 0.0, s2 = 0.0;
      for (int i = 0; i < n; ++i) {
        RandomStream r(5, 2, static_cast<std::uint64_t>(i));
        const double k = static_cast<double>(r.poisson(lambda));
        s += k;
        s2 += k * k;
      }
      const double mean = s / n;
      const double var = s2 / n - mean * mean;
      CHECK(std::abs(mean - lambda) < 5.0 * std::sqrt(lambda / n));
      CHECK(std::abs(var / lambda - 1.0) < 0.05);
    }
  }

  TEST_CASE("student t innovations are standardized") {
    const auto spec = InnovationSpec::student_t(8.0);
    const int n = 200000;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      RandomStream r(9, 0, static_cast<std::uint64_t>(i));
      const double z = r.innovation(spec);
      s2 += z * z;
    }
    CHECK(std::abs(s2 / n - 1.0) < 0.03);
  }
}
