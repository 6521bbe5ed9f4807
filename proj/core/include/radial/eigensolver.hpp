#pragma once

#include <span>
#include <utility>
#include <vector>

#include "radial/integrator.hpp"

namespace radial {

struct SolverOptions {
  double tol_E = 1e-10;
  double mismatch_tol = 1e-8;
  int max_iter = 200;
  /// Samples below this fraction of max|u| are zero touches, not nodes.
  double zero_fraction = 1e-14;
};

struct EigenvalueResult {
  double E = 0.0;
  int n_radial = 0;
  BoundaryMode mode;
  double mismatch_residual = 0.0;
  int iterations = 0;
  RadialSolution solution;  ///< normalized, \int u^2 dr = 1
};

/// Normalized log-derivative mismatch at the matching point,
/// (L - R) / (|L| + |R| + 1/r_match).
double mismatch(const RadialProblem& problem, double E);

/// Energies with outward node counts <= n and >= n + 1. Throws
/// NoSuchStateError when the count never reaches n + 1 below threshold.
std::pair<double, double> bracket_state(const RadialProblem& problem, int n);

EigenvalueResult solve_state(const RadialProblem& problem, int n, const SolverOptions& opts = {});

/// States n = 0..n_max in order; stops at the first missing state.
std::vector<EigenvalueResult> spectrum(const RadialProblem& problem, int n_max,
                                       const SolverOptions& opts = {});

struct SaeRow {
  double theta = 0.0;
  std::vector<EigenvalueResult> states;
};

/// One L2-only spectrum per theta. Throws ModeUnavailableError when the
/// channel has no square-integrable irregular branch.
std::vector<SaeRow> sae_scan(const RadialProblem& problem, std::span<const double> thetas,
                             int n_max, const SolverOptions& opts = {});

/// Bound-state search window [lower, threshold): threshold is 0 for
/// decaying tails and V_eff(r_max) for confining ones.
double energy_threshold(const RadialProblem& problem);

/// Leading power of u at the origin from the innermost decade of the grid.
double origin_log_slope(const RadialSolution& solution);

/// \int u_a u_b dr (trapezoid in the integration variable).
double overlap(const RadialSolution& a, const RadialSolution& b);

}  // namespace radial
