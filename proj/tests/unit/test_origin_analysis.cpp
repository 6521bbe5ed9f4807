#include <cmath>

#include "doctest.h"
#include "radial/errors.hpp"
#include "radial/origin_analysis.hpp"

using namespace radial;

namespace {
IndicialReport report_for(int l, double two_m_c2, double mass = 1.0) {
  return indicial(Channel{l, mass}, OriginCoefficients{two_m_c2 / (2.0 * mass), 0.0, 0.0});
}
}  // namespace

TEST_SUITE("origin_analysis") {
  TEST_CASE("indicial examples") {
    const auto p = report_for(1, 0.0);
    CHECK(p.lambda_eff == 2.0);
    CHECK(*p.s_plus == 2.0);
    CHECK(*p.s_minus == -1.0);
    CHECK(p.classification == Singularity::standard);

    const auto w = report_for(0, -3.0 / 16.0);
    CHECK(w.discriminant == doctest::Approx(1.0 / 16.0));
    CHECK(*w.s_plus == doctest::Approx(0.75));
    CHECK(*w.s_minus == doctest::Approx(0.25));
    CHECK(w.classification == Singularity::limit_circle_window);

    const auto f = report_for(0, -0.5);
    CHECK(f.discriminant == doctest::Approx(-0.25));
    CHECK(f.classification == Singularity::fall_to_center);
    CHECK_FALSE(f.s_plus.has_value());

    const auto c = report_for(0, -0.25);
    CHECK(c.classification == Singularity::critical);
  }

  TEST_CASE("exponent identities") {
    for (int l = 0; l <= 4; ++l)
      for (double g : {-0.2, -0.1, 0.0, 0.3, 0.5, 2.0, 7.5}) {
        const auto rep = report_for(l, g, 1.7);
        REQUIRE(rep.s_plus.has_value());
        const double sp = *rep.s_plus, sm = *rep.s_minus;
        CHECK(sp + sm == 1.0);
        CHECK(sp >= sm);
        const double tol = 4e-16 * std::max(1.0, std::abs(rep.lambda_eff));
        CHECK(std::abs(sp * (sp - 1.0) - rep.lambda_eff) <= tol);
        CHECK(std::abs(sm * (sm - 1.0) - rep.lambda_eff) <= tol);
      }
  }

  TEST_CASE("invalid channel") {
    CHECK_THROWS_AS(indicial(Channel{-1, 1.0}, {}), DomainError);
    CHECK_THROWS_AS(indicial(Channel{0, 0.0}, {}), DomainError);
  }

  TEST_CASE("coulomb series start") {
    const Channel ch{0, 1.0};
    const OriginCoefficients c{0.0, -1.0, 0.0};
    const auto rep = indicial(ch, c);
    const auto s = series_start(rep, c, ch, -0.5, U0Strict{}, 0.01, 0.02);
    CHECK(s.u1 == doctest::Approx(0.0099).epsilon(1e-3));
    // exact ground state r e^{-r}
    CHECK(s.u1 == doctest::Approx(0.01 * std::exp(-0.01)).epsilon(1e-13));
    CHECK(s.u2 == doctest::Approx(0.02 * std::exp(-0.02)).epsilon(1e-13));
  }

  TEST_CASE("two-term residual is higher order") {
    // u = r (1 + a r) with a = -Z; u'' - f u is O(r^s) = O(r).
    const double E = -0.3;
    for (double r : {1e-2, 1e-3, 1e-4}) {
      const double u = r * (1.0 - r);
      const double upp = -2.0;
      const double f = 2.0 * (-1.0 / r - E);
      CHECK(std::abs(upp - f * u) < 3.0 * r + 1e-12);
    }
  }

  TEST_CASE("l=2 leading power") {
    const Channel ch{2, 1.0};
    const OriginCoefficients c{};
    const auto rep = indicial(ch, c);
    const double r1 = 1e-4, r2 = 2e-4;
    const auto s = series_start(rep, c, ch, 0.7, U0Strict{}, r1, r2);
    CHECK(s.u1 / s.u2 == doctest::Approx(std::pow(r1 / r2, 3.0)).epsilon(1e-6));
  }

  TEST_CASE("series matches free spherical bessel") {
    // V = 0, E = k^2/2: u = r j_l(k r) up to normalization.
    const Channel ch{1, 1.0};
    const auto rep = indicial(ch, {});
    const double k = 1.3;
    const double r1 = 0.05, r2 = 0.1;
    const auto s = series_start(rep, {}, ch, 0.5 * k * k, U0Strict{}, r1, r2);
    auto ricatti = [k](double r) { return r * std::sph_bessel(1, k * r); };
    CHECK(s.u1 / s.u2 == doctest::Approx(ricatti(r1) / ricatti(r2)).epsilon(1e-13));
  }

  TEST_CASE("theta zero reproduces strict") {
    const Channel ch{0, 1.0};
    const OriginCoefficients c{0.25, 0.0, 0.0};
    const auto rep = indicial(ch, c);
    const auto a = series_start(rep, c, ch, -0.2, U0Strict{}, 1e-3, 2e-3);
    const auto b = series_start(rep, c, ch, -0.2, L2Only{0.0, 1.0}, 1e-3, 2e-3);
    CHECK(a.u1 == b.u1);
    CHECK(a.u2 == b.u2);
  }

  TEST_CASE("series start errors") {
    const Channel ch{0, 1.0};
    const OriginCoefficients fall{-0.5, 0.0, 0.0};
    const auto rf = indicial(ch, fall);
    CHECK_THROWS_AS(series_start(rf, fall, ch, -1.0, U0Strict{}, 1e-3, 2e-3),
                    UnsupportedChannelError);
    const Channel p{1, 1.0};
    const auto rp = indicial(p, {});
    CHECK_THROWS_AS(series_start(rp, {}, p, -1.0, L2Only{1.0, 1.0}, 1e-3, 2e-3),
                    NonNormalizableError);
    const auto r0 = indicial(ch, {});
    CHECK_THROWS_AS(series_start(r0, {}, ch, -1.0, U0Strict{}, 2e-3, 1e-3), DomainError);
  }

  TEST_CASE("irregular admixture") {
    // 2 m c2 = 0.5, V = c2 / r^2, E = 0 exactly: both branches are pure powers.
    const Channel ch{0, 1.0};
    const OriginCoefficients c{0.25, 0.0, 0.0};
    const auto rep = indicial(ch, c);
    const double sp = *rep.s_plus, sm = *rep.s_minus;
    const double r = 0.3, theta = 2.0;
    const double u = series_value(rep, c, ch, 0.0, L2Only{theta, 1.0}, r);
    CHECK(u == doctest::Approx(std::pow(r, sp) - theta * std::pow(r, sm)).epsilon(1e-14));
  }

  TEST_CASE("coulomb log branch solves the equation") {
    // s- = 0 with a 1/r term: check u'' = f u by finite differences.
    const Channel ch{0, 1.0};
    const OriginCoefficients c{0.0, -1.0, 0.0};
    const auto rep = indicial(ch, c);
    const double E = -0.2;
    const BoundaryMode mode = L2Only{1.0, 1.0};
    auto u = [&](double r) { return series_value(rep, c, ch, E, mode, r); };
    for (double r : {0.02, 0.05, 0.1}) {
      const double h = 1e-4 * r;
      const double upp = (u(r + h) - 2.0 * u(r) + u(r - h)) / (h * h);
      const double f = 2.0 * (-1.0 / r - E);
      CHECK(upp == doctest::Approx(f * u(r)).epsilon(1e-4));
    }
  }

  TEST_CASE("admissible examples") {
    const auto std0 = report_for(0, 0.0);
    const auto a = admissible(std0, U0Strict{});
    REQUIRE(a.exponents.size() == 1);
    CHECK(a.exponents[0] == 1.0);
    CHECK_FALSE(a.ambiguity);

    const auto rep = report_for(0, 0.5);
    CHECK(*rep.s_minus == doctest::Approx(0.5 - std::sqrt(0.75)));
    CHECK(*rep.s_minus > -0.5);
    CHECK(*rep.s_minus < 0.0);
    CHECK(admissible(rep, L2Only{1.0, 1.0}).exponents.size() == 2);

    const auto p = report_for(1, 0.0);
    const auto ap = admissible(p, L2Only{1.0, 1.0});
    REQUIRE(ap.exponents.size() == 1);
    CHECK(ap.exponents[0] == 2.0);

    CHECK(admissible(report_for(0, -3.0 / 16.0), U0Strict{}).ambiguity);
    CHECK_THROWS_AS(admissible(report_for(0, -0.5), U0Strict{}), UnsupportedChannelError);
  }

  TEST_CASE("strict admissible is a singleton") {
    for (int l = 0; l <= 3; ++l)
      for (double g : {-0.24, -0.1, 0.0, 0.5, 3.0})
        CHECK(admissible(report_for(l, g), U0Strict{}).exponents.size() == 1);
  }

  TEST_CASE("effective mode") {
    CHECK(std::holds_alternative<U0Strict>(effective_mode(report_for(1, 0.0), L2Only{1.0, 1.0})));
    CHECK(std::holds_alternative<U0Strict>(effective_mode(report_for(0, 0.5), L2Only{0.0, 1.0})));
    CHECK(std::holds_alternative<L2Only>(effective_mode(report_for(0, 0.5), L2Only{1.0, 1.0})));
    CHECK_THROWS_AS(effective_mode(report_for(0, 0.0), L2Only{1.0, -1.0}), DomainError);
  }
}
