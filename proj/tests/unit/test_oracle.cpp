#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "radial/errors.hpp"
#include "radial/oracle.hpp"
#include "support.hpp"

using namespace radial;
using namespace testing_support;

namespace {

RadialProblem on_oracle_grid(PotentialSpec v, double r_max, int n, int l = 0) {
  return RadialProblem(Channel{l, 1.0}, std::move(v), U0Strict{}, oracle_grid(r_max, n, l));
}

PotentialSpec gaussian_well() {
  std::vector<double> r, v;
  for (int i = 1; i <= 400; ++i) {
    r.push_back(0.025 * i);
    v.push_back(-5.0 * std::exp(-r.back() * r.back()));
  }
  return Tabulated(r, v);
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("oracle grid walls") {
    const auto g = oracle_grid(10.0, 99, 0);
    CHECK(g.step() == doctest::Approx(0.1));
    CHECK(g.r_min() == doctest::Approx(0.1));
    CHECK(g.r_max() + g.step() == doctest::Approx(10.0));
    const auto g1 = oracle_grid(10.0, 98, 1);
    CHECK(g1.r_min() == doctest::Approx(2.0 * g1.step()));
    CHECK(g1.r_max() + g1.step() == doctest::Approx(10.0));
  }

  TEST_CASE("box spectrum") {
    const int n = 999;
    const auto p = on_oracle_grid(Coulomb{0.0}, std::numbers::pi, n);
    const auto ev = fd_spectrum(p, 3);
    const double h = std::numbers::pi / (n + 1);
    for (int k = 1; k <= 3; ++k) {
      // discrete Dirichlet Laplacian
      const double exact_fd = (1.0 - std::cos(k * h)) / (h * h);
      CHECK(ev[k - 1] == doctest::Approx(exact_fd).epsilon(1e-11));
      CHECK(std::abs(ev[k - 1] - 0.5 * k * k) <= std::pow(k, 4) * h * h / 24.0 * 1.01);
    }
  }

  TEST_CASE("inertia examples") {
    const auto m = build_fd_matrix(on_oracle_grid(Coulomb{0.0}, std::numbers::pi, 200));
    CHECK(inertia_count(m, -1.0) == 0);
    CHECK(inertia_count(m, 1e9) == m.dimension());
    CHECK(inertia_count(m, 1.0) == 1);
    int last = 0;
    for (double E = -1.0; E < 60.0; E += 0.37) {
      const int c = inertia_count(m, E);
      CHECK(c >= last);
      last = c;
    }
  }

  TEST_CASE("coulomb ground state and h^2 convergence") {
    const int fine = 16383;
    const int coarse = 8191;
    const auto pf = on_oracle_grid(Coulomb{1.0}, 80.0, fine);
    CHECK(pf.grid().step() == doctest::Approx(80.0 / 16384));
    const double ef = fd_spectrum(pf, 1)[0];
    const double ec = fd_spectrum(on_oracle_grid(Coulomb{1.0}, 80.0, coarse), 1)[0];
    CHECK(std::abs(ef + 0.5) <= 5e-4);
    const double ratio = (ec + 0.5) / (ef + 0.5);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
    // Richardson: (4 e_fine - e_coarse) / 3 removes the h^2 term
    CHECK(std::abs((4.0 * ef - ec) / 3.0 + 0.5) < 0.1 * std::abs(ef + 0.5));
  }

  TEST_CASE("harmonic pair") {
    const auto ev = fd_spectrum(on_oracle_grid(Harmonic{1.0}, 12.0, 4000), 2);
    const double h = 12.0 / 4001;
    CHECK(std::abs(ev[0] - 1.5) <= h * h);
    CHECK(std::abs(ev[1] - 3.5) <= 2.0 * h * h);
  }

  TEST_CASE("l=1 with the shifted wall") {
    const auto ev = fd_spectrum(on_oracle_grid(Harmonic{1.0}, 12.0, 4000, 1), 1);
    CHECK(ev[0] == doctest::Approx(2.5).epsilon(1e-5));
  }

  TEST_CASE("bound-state counts agree with the shooting solver") {
    const auto fd = on_oracle_grid(gaussian_well(), 30.0, 6000);
    const int below = inertia_count(build_fd_matrix(fd), 0.0);
    const auto shoot = make_problem(gaussian_well(), 0, U0Strict{}, GridScheme::log_uniform, 20000,
                                    1e-6, 30.0);
    CHECK(static_cast<int>(spectrum(shoot, 10).size()) == below);
    CHECK(below >= 1);

    const auto rep = on_oracle_grid(InverseSquare{0.25}, 40.0, 4000);
    CHECK(inertia_count(build_fd_matrix(rep), 0.0) == 0);
    CHECK(spectrum(make_problem(InverseSquare{0.25}), 3).empty());
  }

  TEST_CASE("errors") {
    const auto p = on_oracle_grid(Coulomb{1.0}, 10.0, 100);
    CHECK_THROWS_AS(fd_spectrum(p, 101), DomainError);
    CHECK_THROWS_AS(build_fd_matrix(hydrogen()), DomainError);
    CHECK_THROWS_AS(build_fd_matrix(p.with_mode(L2Only{1.0, 1.0})), DomainError);
    CHECK_NOTHROW(build_fd_matrix(p.with_mode(L2Only{0.0, 1.0})));
  }
}
