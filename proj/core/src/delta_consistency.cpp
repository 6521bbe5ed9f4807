#include "radial/delta_consistency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "radial/errors.hpp"
#include "radial/quadrature.hpp"

namespace radial {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// phi_w(r_cut) = 1e-20.
double cutoff(double w) { return w * std::sqrt(2.0 * std::log(1e20)); }

double analytic_defect(const AnalyticTrial& t, double w) {
  const auto integrand = [&](double r) {
    return t.u(r) * gaussian_rphi_pp(r, w) - t.upp(r) * r * gaussian(r, w);
  };
  const double reference = -kFourPi * t.u0;
  const auto q = integrate(integrand, 0.0, cutoff(w), 1e-14, 1e-14);
  const double d = kFourPi * q.value;
  if (kFourPi * q.error > 1e-8 * (1.0 + std::abs(reference)))
    throw PrecisionError("defect quadrature did not converge for trial '" + t.name +
                         "' at w = " + std::to_string(w));
  return d;
}

double trapezoid(std::span<const double> g, std::size_t end, std::size_t stride) {
  double s = 0.5 * (g[0] + g[end]);
  for (std::size_t i = stride; i < end; i += stride) s += g[i];
  return s * static_cast<double>(stride);
}

// \int g dx over the whole grid (unit spacing). Romberg on the longest
// prefix with a multiple of four intervals, a local cubic rule on the rest.
double romberg_unit(std::span<const double> g) {
  const std::size_t intervals = g.size() - 1;
  const std::size_t k = intervals - intervals % 4;
  const double t1 = trapezoid(g, k, 1);
  const double t2 = trapezoid(g, k, 2);
  const double t4 = trapezoid(g, k, 4);
  const double r1 = (4.0 * t1 - t2) / 3.0;
  const double r2 = (4.0 * t2 - t4) / 3.0;
  double total = (16.0 * r1 - r2) / 15.0;

  const std::size_t n = intervals;
  switch (intervals - k) {
    case 1:
      total += (g[n - 3] - 5.0 * g[n - 2] + 19.0 * g[n - 1] + 9.0 * g[n]) / 24.0;
      break;
    case 2:
      total += (g[n - 2] + 4.0 * g[n - 1] + g[n]) / 3.0;
      break;
    case 3:
      total += 3.0 * (g[n - 3] + 3.0 * g[n - 2] + 3.0 * g[n - 1] + g[n]) / 8.0;
      break;
    default:
      break;
  }
  return total;
}

double sampled_defect(const SampledTrial& t, double w) {
  const auto origin = extrapolate_origin(t.solution);
  if (origin.divergent)
    throw DomainError("u diverges at the origin (leading power " +
                      std::to_string(origin.exponent) + ")");
  const Discretization disc(t.problem);
  const auto& u = t.solution.u;
  if (static_cast<int>(u.size()) != disc.size())
    throw DomainError("solution does not live on the problem grid");

  std::vector<double> g(u.size());
  for (int i = 0; i < disc.size(); ++i) {
    const double r = disc.r(i);
    const double rphi = r * gaussian(r, w);
    const auto k = static_cast<std::size_t>(i);
    g[k] = u[k] * (gaussian_rphi_pp(r, w) - disc.f(i, t.E) * rphi) * disc.jacobian(i);
  }
  const double body = romberg_unit(g) * disc.grid().step();

  // [u g' - u' g] between 0 and r_min, with r u'(r) taken from the fit.
  const auto fit = fit_origin_power_law(t.solution.grid.r(), u);
  const double r0 = disc.r(0);
  const double phi0 = gaussian(r0, w);
  const double head = u.front() * phi0 * (1.0 - r0 * r0 / (w * w)) -
                      fit.log_slope_ref * fit.u_ref * phi0 - origin.u0;
  return kFourPi * (body + head);
}

}  // namespace

double gaussian(double r, double w) { return std::exp(-r * r / (2.0 * w * w)); }

double gaussian_rphi_pp(double r, double w) {
  const double x = r / w;
  return gaussian(r, w) * x / w * (x * x - 3.0);
}

AnalyticTrial builtin_trial(const std::string& name) {
  if (name == "exp")
    return {name, [](double r) { return std::exp(-r); }, [](double r) { return std::exp(-r); },
            1.0};
  if (name == "rexp")
    return {name, [](double r) { return r * std::exp(-r); },
            [](double r) { return (r - 2.0) * std::exp(-r); }, 0.0};
  if (name == "polyexp")
    return {name, [](double r) { return (1.0 + 2.0 * r) * std::exp(-r); },
            [](double r) { return (2.0 * r - 3.0) * std::exp(-r); }, 1.0};
  if (name == "const")
    return {name, [](double) { return 1.0; }, [](double) { return 0.0; }, 1.0};
  throw DomainError("unknown trial '" + name + "' (expected exp, rexp, polyexp or const)");
}

std::vector<std::string> builtin_trial_names() { return {"exp", "rexp", "polyexp", "const"}; }

AnalyticTrial combine(const AnalyticTrial& A, double a, const AnalyticTrial& B, double b) {
  return {A.name + "+" + B.name, [=](double r) { return a * A.u(r) + b * B.u(r); },
          [=](double r) { return a * A.upp(r) + b * B.upp(r); }, a * A.u0 + b * B.u0};
}

double weak_defect(const TrialFunction& trial, double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("test width must be positive");
  if (const auto* a = std::get_if<AnalyticTrial>(&trial)) return analytic_defect(*a, w);
  return sampled_defect(std::get<SampledTrial>(trial), w);
}

DeltaResidualReport defect_report(const AnalyticTrial& trial, std::span<const double> widths) {
  DeltaResidualReport rep;
  rep.widths.assign(widths.begin(), widths.end());
  for (double w : rep.widths)
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("widths must be positive");
  auto sorted = rep.widths;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("widths must be distinct");
  rep.reference = -kFourPi * trial.u0;
  for (double w : rep.widths) {
    const double d = analytic_defect(trial, w);
    rep.defects.push_back(d);
    rep.max_abs_error = std::max(rep.max_abs_error, std::abs(d - rep.reference));
  }
  return rep;
}

OriginValue extrapolate_origin(const RadialSolution& solution) {
  const auto fit = fit_origin_power_law(solution.grid.r(), solution.u);
  if (fit.rms_residual > 1e-3)
    throw ExtrapolationError("innermost samples do not follow a power law (rms residual " +
                             std::to_string(fit.rms_residual) + ")");
  OriginValue out;
  out.exponent = fit.s;
  if (fit.s > 0.05) {
    out.u0 = 0.0;
  } else if (fit.s >= -0.05) {
    out.u0 = fit.c;
  } else {
    out.divergent = true;
    out.u0 = std::copysign(std::numeric_limits<double>::infinity(), fit.c);
  }
  return out;
}

Verdict check_compatibility(const RadialProblem& problem, const EigenvalueResult& state,
                            double tol, std::optional<double> width) {
  Verdict v;
  const auto& r = state.solution.grid.r();
  const std::size_t n = r.size();
  v.width = width ? *width : (n % 2 ? r[n / 2] : 0.5 * (r[n / 2 - 1] + r[n / 2]));
  v.origin = extrapolate_origin(state.solution);
  if (v.origin.divergent) return v;
  v.defect = weak_defect(SampledTrial{problem, state.E, state.solution}, v.width);
  v.compatible = std::abs(*v.defect) <= tol;
  return v;
}

LinearityProbe linearity_probe(const AnalyticTrial& A, double a, const AnalyticTrial& B, double b,
                               double w) {
  return {analytic_defect(combine(A, a, B, b), w),
          a * analytic_defect(A, w) + b * analytic_defect(B, w)};
}

}  // namespace radial
