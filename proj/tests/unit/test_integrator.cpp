#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "radial/errors.hpp"
#include "radial/integrator.hpp"
#include "support.hpp"

using namespace radial;
using namespace testing_support;

namespace {

// max |u_num - u_exact| / max |u_exact| over an outward sweep of the whole grid.
double outward_error(const RadialProblem& p, double E, const std::function<double(double)>& exact) {
  const Discretization d(p);
  const int n = d.size();
  const auto half = numerov_outward(d, E, {exact(d.r(0)), exact(d.r(1))}, n - 1);
  double err = 0.0, peak = 0.0;
  for (int i = 0; i < n; ++i) {
    err = std::max(err, std::abs(half.at(i) - exact(d.r(i))));
    peak = std::max(peak, std::abs(exact(d.r(i))));
  }
  return err / peak;
}

double inward_error(const RadialProblem& p, double E, const std::function<double(double)>& exact) {
  const Discretization d(p);
  const int n = d.size();
  const auto half = numerov_inward(d, E, {exact(d.r(n - 1)), exact(d.r(n - 2))}, n - 1, 0);
  double err = 0.0;
  for (int i = 0; i < n; ++i) err = std::max(err, std::abs(half.at(i) / exact(d.r(i)) - 1.0));
  return err;
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace

TEST_SUITE("integrator") {
  TEST_CASE("effective_f examples") {
    CHECK(effective_f(hydrogen(), -0.5, 2.0) == doctest::Approx(0.0));
    CHECK(effective_f(free_uniform(0.1, 10.0, 100, 1), 0.0, 1.0) == doctest::Approx(2.0));
    CHECK(effective_f(oscillator(), 1.5, 1.0) == doctest::Approx(-2.0));
  }

  TEST_CASE("grid construction") {
    const RadialGrid u(GridScheme::uniform, 0.5, 10.5, 101);
    CHECK(u.step() == doctest::Approx(0.1));
    CHECK(u.r_min() == 0.5);
    CHECK(u.r_max() == 10.5);
    const RadialGrid g(GridScheme::log_uniform, 1e-4, 10.0, 501);
    CHECK(g[250] == doctest::Approx(std::sqrt(1e-3)).epsilon(1e-12));
    CHECK_THROWS_AS(RadialGrid(GridScheme::uniform, 0.0, 1.0, 100), DomainError);
    CHECK_THROWS_AS(RadialGrid(GridScheme::uniform, 1.0, 0.5, 100), DomainError);
    CHECK_THROWS_AS(RadialGrid(GridScheme::uniform, 0.1, 1.0, 10), DomainError);
  }

  TEST_CASE("zero curvature is linear") {
    const auto p = free_uniform(0.01, 5.0, 500);
    const Discretization d(p);
    const auto half = numerov_outward(d, 0.0, {d.r(0), d.r(1)}, d.size() - 1);
    for (int i = 0; i < d.size(); ++i) CHECK(half.at(i) == doctest::Approx(d.r(i)).epsilon(1e-13));
  }

  TEST_CASE("sine on a 1000-point grid") {
    const auto p = free_uniform(0.01, 10.0, 1000);
    CHECK(outward_error(p, 0.5, [](double r) { return std::sin(r); }) < 1e-8);
  }

  TEST_CASE("hydrogen ground state outward") {
    const auto p = make_problem(Coulomb{1.0}, 0, U0Strict{}, GridScheme::uniform, 2000, 0.005, 8.0);
    CHECK(outward_error(p, -0.5, [](double r) { return r * std::exp(-r); }) < 1e-8);
  }

  TEST_CASE("hydrogen ground state on the log grid") {
    const auto p = make_problem(Coulomb{1.0}, 0, U0Strict{}, GridScheme::log_uniform, 4000, 1e-5, 10.0);
    CHECK(outward_error(p, -0.5, [](double r) { return r * std::exp(-r); }) < 1e-8);
  }

  TEST_CASE("exponential inward") {
    const auto p = free_uniform(0.1, 15.0, 1500);
    CHECK(inward_error(p, -0.5, [](double r) { return std::exp(-r); }) < 1e-8);
  }

  TEST_CASE("observed order under halving") {
    auto sine = [](double r) { return std::sin(r); };
    auto decay = [](double r) { return std::exp(-r); };
    auto h1s = [](double r) { return r * std::exp(-r); };
    for (int n : {101, 201}) {
      const int m = 2 * n - 1;
      const double o1 = order(outward_error(free_uniform(0.1, 10.1, n), 0.5, sine),
                              outward_error(free_uniform(0.1, 10.1, m), 0.5, sine));
      const double o2 = order(inward_error(free_uniform(0.1, 10.1, n), -0.5, decay),
                              inward_error(free_uniform(0.1, 10.1, m), -0.5, decay));
      auto hp = [](int k) {
        return make_problem(Coulomb{1.0}, 0, U0Strict{}, GridScheme::uniform, k, 0.2, 8.2);
      };
      const double o3 = order(outward_error(hp(n), -0.5, h1s), outward_error(hp(m), -0.5, h1s));
      CHECK(o1 >= 3.0);
      CHECK(o2 >= 3.0);
      CHECK(o3 >= 3.0);
    }
  }

  TEST_CASE("inward and outward commute with reflection") {
    const auto p = free_uniform(0.1, 10.0, 400);
    const Discretization d(p);
    const int n = d.size();
    const double h = d.grid().step();
    const auto out = numerov_outward(d, -0.5, {1.0, std::exp(h)}, n - 1);
    const auto in = numerov_inward(d, -0.5, {1.0, std::exp(h)}, n - 1, 0);
    for (int i = 0; i < n; ++i)
      CHECK(out.at(i) == doctest::Approx(in.at(n - 1 - i)).epsilon(1e-14));
  }

  TEST_CASE("harmonic tail recovers the gaussian") {
    const auto p = make_problem(Harmonic{1.0}, 0, U0Strict{}, GridScheme::uniform, 4000, 0.01, 10.0);
    const Discretization d(p);
    const int n = d.size();
    const double E = 1.5;
    const auto tail = tail_start(p.potential(), p.channel(), E, d.r(n - 1), d.r(n - 2));
    const auto half = numerov_inward(d, E, tail, n - 1, 0);
    auto exact = [](double r) { return r * std::exp(-0.5 * r * r); };
    int ref = 0;
    while (d.r(ref) < 1.0) ++ref;
    const double scale = exact(d.r(ref)) / half.at(ref);
    for (int i = 0; i < n && d.r(i) <= 4.0; ++i)
      CHECK(std::abs(scale * half.at(i) / exact(d.r(i)) - 1.0) < 1e-6);
  }

  TEST_CASE("rescaling leaves log-derivatives unchanged") {
    const auto p = make_problem(Harmonic{1.0}, 0, U0Strict{}, GridScheme::uniform, 4000, 0.01, 10.0);
    const Discretization d(p);
    const int n = d.size();
    const double E = 1.3;
    const StartValues tail{1.0, 1.1};
    const auto a = numerov_inward(d, E, tail, n - 1, 0);
    NumerovOptions tight;
    tight.overflow_limit = 1e3;
    const auto b = numerov_inward(d, E, tail, n - 1, 0, tight);
    CHECK(a.rescales == 0);
    CHECK(b.rescales > 0);
    for (int i : {5, 400, 1000, 2500}) {
      const double la = log_derivative(d, a, i, false);
      const double lb = log_derivative(d, b, i, false);
      CHECK(std::abs(la - lb) <= 1e-12 * std::abs(la));
    }
  }

  TEST_CASE("overflow guard on deep tunnelling") {
    const auto p = make_problem(Coulomb{0.0}, 0, U0Strict{}, GridScheme::uniform, 20000, 0.01, 400.0);
    const Discretization d(p);
    const auto half = numerov_outward(d, -0.5, {1.0, 1.0}, d.size() - 1);
    CHECK(half.rescales > 0);
    for (double x : half.u) CHECK(std::isfinite(x));
  }

  TEST_CASE("strict start has no spurious node") {
    const auto p = hydrogen();
    const Discretization d(p);
    const auto s = series_start(p.indicial_report(), p.coefficients(), p.channel(), -0.5,
                                U0Strict{}, d.r(0), d.r(1));
    const auto half = numerov_outward(d, -0.5, s, 2000);
    for (double x : half.u) CHECK(x > 0.0);
  }

  TEST_CASE("start errors") {
    const auto p = free_uniform(0.1, 10.0, 100);
    const Discretization d(p);
    CHECK_THROWS_AS(numerov_outward(d, 0.0, {0.0, 0.0}, 50), DomainError);
    CHECK_THROWS_AS(numerov_inward(d, 0.0, {0.0, 0.0}, 99, 0), DomainError);
    CHECK_THROWS_AS(numerov_outward(d, 0.0, {1.0, std::nan("")}, 50), DomainError);
  }

  TEST_CASE("tail_start examples") {
    const Channel ch{0, 1.0};
    const double h = 0.01;
    const auto free = tail_start(Coulomb{0.0}, ch, -0.5, 20.0, 20.0 - h);
    CHECK(free.u2 / free.u1 == doctest::Approx(std::exp(h)).epsilon(1e-14));

    const auto osc = tail_start(Harmonic{1.0}, ch, 1.5, 10.0, 10.0 - h);
    CHECK(std::log(osc.u2 / osc.u1) / h == doctest::Approx(std::sqrt(97.0)).epsilon(1e-12));

    try {
      tail_start(Coulomb{1.0}, ch, -0.01, 5.0, 4.99);
      FAIL("expected RMaxTooSmallError");
    } catch (const RMaxTooSmallError& e) {
      CHECK(e.suggested_r_max() > 100.0);
    }
  }

  TEST_CASE("count_nodes examples") {
    std::vector<double> s;
    for (int i = 1; i < 300; ++i) s.push_back(std::sin(3.0 * std::numbers::pi * i / 300.0));
    CHECK(count_nodes(s) == 2);
    std::vector<double> h;
    for (int i = 1; i < 300; ++i) h.push_back(i * 0.05 * std::exp(-i * 0.05));
    CHECK(count_nodes(h) == 0);
    const std::vector<double> alt{1.0, -1.0, 1.0};
    CHECK(count_nodes(alt) == 2);
  }

  TEST_CASE("count_nodes ignores zeros and grazing touches") {
    const std::vector<double> z{1.0, 0.0, -1.0, 0.0, 0.0, -2.0, 3.0};
    CHECK(count_nodes(z) == 2);
    const std::vector<double> graze{1.0, 2.0, -1e-20, 2.0, 1.0};
    CHECK(count_nodes(graze) == 2);
    CHECK(count_nodes(graze, 1e-14) == 0);
  }

  TEST_CASE("match index is clamped") {
    const auto p = hydrogen();
    const Discretization d(p);
    const int n = d.size();
    for (double E : {-0.5, -0.125, -10.0, -1e-4}) {
      const int m = match_index(d, E);
      CHECK(m >= n / 50);
      CHECK(m <= 4 * n / 5);
    }
  }

  TEST_CASE("power-law fit at the origin") {
    const RadialGrid g(GridScheme::log_uniform, 1e-6, 10.0, 2000);
    std::vector<double> u;
    for (double r : g.r()) u.push_back(-2.0 * std::pow(r, 1.5) * (1.0 + 0.1 * r));
    const auto fit = fit_origin_power_law(g.r(), u);
    CHECK(fit.s == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(fit.c == doctest::Approx(-2.0).epsilon(1e-5));
    std::vector<double> bad(u.size(), 0.0);
    CHECK_THROWS_AS(fit_origin_power_law(g.r(), bad), ExtrapolationError);
  }
}
