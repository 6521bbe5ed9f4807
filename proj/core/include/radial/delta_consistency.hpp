#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "radial/eigensolver.hpp"

namespace radial {

/// Closed-form trial u(r) with its second derivative and u(0).
struct AnalyticTrial {
  std::string name;
  std::function<double(double)> u;
  std::function<double(double)> upp;
  double u0 = 0.0;
};

/// Solver output; u'' is rebuilt as f(r) u from the radial equation.
struct SampledTrial {
  RadialProblem problem;
  double E = 0.0;
  RadialSolution solution;
};

using TrialFunction = std::variant<AnalyticTrial, SampledTrial>;

/// exp: e^{-r}; rexp: r e^{-r}; polyexp: (1 + 2r) e^{-r}; const: u = 1.
/// Throws DomainError for other names.
AnalyticTrial builtin_trial(const std::string& name);
std::vector<std::string> builtin_trial_names();

/// a * A + b * B
AnalyticTrial combine(const AnalyticTrial& A, double a, const AnalyticTrial& B, double b);

/// Gaussian test profile phi_w(r) = exp(-r^2 / (2 w^2)).
double gaussian(double r, double w);
/// d^2/dr^2 [r phi_w(r)].
double gaussian_rphi_pp(double r, double w);

/// D(w) = 4 pi [ \int u (r phi_w)'' dr - \int u'' r phi_w dr ] over (0, inf).
/// Integration by parts gives D(w) = -4 pi u(0) for every w.
/// Analytic trials throw PrecisionError when the quadrature error estimate
/// exceeds 1e-8 (1 + 4 pi |u0|). Sampled trials throw ExtrapolationError
/// when u has no power-law start, and DomainError when it diverges.
double weak_defect(const TrialFunction& trial, double w);

struct DeltaResidualReport {
  std::vector<double> widths;
  std::vector<double> defects;
  double reference = 0.0;  ///< -4 pi u0
  double max_abs_error = 0.0;
};

/// Throws DomainError unless widths are positive and distinct.
DeltaResidualReport defect_report(const AnalyticTrial& trial, std::span<const double> widths);

struct OriginValue {
  double u0 = 0.0;        ///< extrapolated u(0); meaningless when divergent
  double exponent = 0.0;  ///< fitted leading power
  bool divergent = false;
};

/// u ~ c r^s on the innermost decade: u0 = 0 for s > 0.05, u0 = c for
/// |s| <= 0.05, divergent for s < -0.05.
OriginValue extrapolate_origin(const RadialSolution& solution);

struct Verdict {
  bool compatible = false;
  std::optional<double> defect;  ///< absent when u diverges at the origin
  OriginValue origin;
  double width = 0.0;
};

inline constexpr double kDefaultCompatibilityTol = 1e-6;

/// compatible iff |D(w)| <= tol, with w the median grid radius unless given.
Verdict check_compatibility(const RadialProblem& problem, const EigenvalueResult& state,
                            double tol = kDefaultCompatibilityTol,
                            std::optional<double> width = std::nullopt);

struct LinearityProbe {
  double combined = 0.0;  ///< D(a A + b B)
  double separate = 0.0;  ///< a D(A) + b D(B)
};

LinearityProbe linearity_probe(const AnalyticTrial& A, double a, const AnalyticTrial& B, double b,
                               double w);

}  // namespace radial
