#include <cmath>
#include <numbers>

#include "doctest.h"
#include "radial/quadrature.hpp"

using namespace radial;

TEST_SUITE("quadrature") {
  TEST_CASE("smooth integrands") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 40.0).value ==
          doctest::Approx(1.0 - std::exp(-40.0)).epsilon(1e-14));
    const double g = integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0).value;
    CHECK(g == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  }

  TEST_CASE("endpoint singularity is resolved adaptively") {
    const auto q = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0);
    CHECK(q.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(q.evaluations > 15 * 8);
  }

  TEST_CASE("error estimate is honest") {
    const auto q = integrate([](double x) { return std::cos(50.0 * x); }, 0.0, 3.0);
    CHECK(std::abs(q.value - std::sin(150.0) / 50.0) <= std::max(q.error, 1e-14));
  }
}
