#pragma once

#include <cmath>
#include <vector>

#include "radial/eigensolver.hpp"

namespace testing_support {

using namespace radial;

inline RadialProblem make_problem(PotentialSpec v, int l = 0, BoundaryMode mode = U0Strict{},
                                  GridScheme scheme = GridScheme::log_uniform, int n = 20000,
                                  double r_min = 1e-6, double r_max = 80.0, double mass = 1.0) {
  return RadialProblem(Channel{l, mass}, std::move(v), mode, RadialGrid(scheme, r_min, r_max, n));
}

inline RadialProblem hydrogen(int l = 0) { return make_problem(Coulomb{1.0}, l); }

inline RadialProblem oscillator(int l = 0) {
  return make_problem(Harmonic{1.0}, l, U0Strict{}, GridScheme::log_uniform, 20000, 1e-6, 12.0);
}

inline RadialProblem free_uniform(double r_min, double r_max, int n, int l = 0) {
  return make_problem(Coulomb{0.0}, l, U0Strict{}, GridScheme::uniform, n, r_min, r_max);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testing_support
