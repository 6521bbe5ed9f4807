#include "radial/origin_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "radial/errors.hpp"

namespace radial {

namespace {

// Discriminants this close to zero are treated as the critical coupling.
constexpr double kCriticalTol = 1e-12;

constexpr int kMaxTerms = 200;

// u'' = [lambda/r^2 + p/r + q] u with p = 2m c1, q = 2m (c0 - E).
struct SeriesModel {
  double p = 0.0;
  double q = 0.0;
};

SeriesModel model(const OriginCoefficients& c, double mass, double E) {
  return {2.0 * mass * c.c1, 2.0 * mass * (c.c0 - E)};
}

// Coefficients of r^s sum a_k r^k. The order-r^{s+k} balance has the factor
// (s+k)(s+k-1) - lambda = k (2s + k - 1).
std::vector<double> frobenius(double s, SeriesModel m, double r) {
  std::vector<double> a{1.0};
  double sum = 1.0;
  double rk = 1.0;
  double prev_term = 1.0;
  for (int k = 1; k < kMaxTerms; ++k) {
    const double den = k * (2.0 * s + k - 1.0);
    const double num = m.p * a[static_cast<std::size_t>(k - 1)] +
                       (k >= 2 ? m.q * a[static_cast<std::size_t>(k - 2)] : 0.0);
    // den vanishes only at the resonance s = 0, k = 1, where num = 0 unless
    // the caller takes the logarithmic branch.
    a.push_back(std::abs(den) < 1e-12 ? 0.0 : num / den);
    rk *= r;
    const double term = std::abs(a.back()) * rk;
    sum += a.back() * rk;
    if (k >= 4 && term <= 1e-17 * std::abs(sum) && prev_term <= 1e-17 * std::abs(sum)) break;
    prev_term = term;
  }
  return a;
}

double poly(const std::vector<double>& a, double r) {
  double acc = 0.0;
  for (std::size_t j = a.size(); j-- > 0;) acc = acc * r + a[j];
  return acc;
}

double regular_value(double s_plus, SeriesModel m, double r) {
  return std::pow(r, s_plus) * poly(frobenius(s_plus, m, r), r);
}

// s- = 0, s+ = 1 with p != 0: u = C u_reg ln(r/r0) + sum b_j r^j with
// b_0 = 1, b_1 = 0 and C = p.
double log_branch_value(SeriesModel m, double r, double r0) {
  const auto a = frobenius(1.0, m, r);
  const double C = m.p;
  std::vector<double> b{1.0, 0.0};
  for (int j = 2; j < static_cast<int>(a.size()) + 1; ++j) {
    const auto k = static_cast<std::size_t>(j);
    b.push_back((m.p * b[k - 1] + m.q * b[k - 2] - C * a[k - 1] * (2.0 * j - 1.0)) /
                (j * (j - 1.0)));
  }
  return C * r * poly(a, r) * std::log(r / r0) + poly(b, r);
}

double irregular_value(double s_minus, double s_plus, SeriesModel m, double r, double r0) {
  const bool resonant = std::abs((s_plus - s_minus) - 1.0) < 1e-12;
  if (resonant && m.p != 0.0) return log_branch_value(m, r, r0);
  return std::pow(r, s_minus) * poly(frobenius(s_minus, m, r), r);
}

// Throws for the cases series_start rejects; returns the L2Only data or null.
const L2Only* checked_l2(const IndicialReport& report, const BoundaryMode& mode) {
  const auto* l2 = std::get_if<L2Only>(&mode);
  if (report.classification == Singularity::fall_to_center) {
    if (l2) throw ModeUnavailableError("fall to the center: L2-only spectra are not supported");
    throw UnsupportedChannelError("fall to the center: u(0)=0 cannot select a branch");
  }
  if (!l2 || l2->theta == 0.0) return nullptr;
  if (report.classification == Singularity::critical)
    throw ModeUnavailableError("critical coupling: the second branch is logarithmic");
  if (*report.s_minus <= -0.5)
    throw NonNormalizableError("irregular branch r^" + std::to_string(*report.s_minus) +
                               " is not square integrable at the origin");
  return l2;
}

}  // namespace

void validate(const Channel& channel) {
  if (channel.l < 0) throw DomainError("orbital quantum number l must be non-negative");
  if (!(channel.mass > 0.0) || !std::isfinite(channel.mass))
    throw DomainError("mass must be positive and finite");
}

void validate(const BoundaryMode& mode) {
  if (const auto* l2 = std::get_if<L2Only>(&mode)) {
    if (!(l2->r0 > 0.0) || !std::isfinite(l2->r0))
      throw DomainError("L2-only reference radius r0 must be positive");
    if (!std::isfinite(l2->theta)) throw DomainError("L2-only theta must be finite");
  }
}

std::string_view to_string(Singularity s) {
  switch (s) {
    case Singularity::standard:
      return "standard";
    case Singularity::limit_circle_window:
      return "limit_circle_window";
    case Singularity::critical:
      return "critical";
    case Singularity::fall_to_center:
      return "fall_to_center";
  }
  return "unknown";
}

IndicialReport indicial(const Channel& channel, const OriginCoefficients& coeffs) {
  validate(channel);
  IndicialReport rep;
  const double l = channel.l;
  rep.lambda_eff = l * (l + 1.0) + 2.0 * channel.mass * coeffs.c2;
  rep.discriminant = 0.25 + rep.lambda_eff;

  if (std::abs(rep.discriminant) <= kCriticalTol) {
    rep.discriminant = 0.0;
    rep.s_plus = 0.5;
    rep.s_minus = 0.5;
    rep.classification = Singularity::critical;
    return rep;
  }
  if (rep.discriminant < 0.0) {
    rep.complex_re = 0.5;
    rep.complex_im = std::sqrt(-rep.discriminant);
    rep.classification = Singularity::fall_to_center;
    return rep;
  }
  const double root = std::sqrt(rep.discriminant);
  rep.s_plus = 0.5 + root;
  // 1 - s_plus is exact for s_plus in [1/2, 2], which keeps s+ + s- = 1.
  rep.s_minus = 1.0 - *rep.s_plus;
  rep.classification =
      *rep.s_minus <= 0.0 ? Singularity::standard : Singularity::limit_circle_window;
  return rep;
}

bool admits_irregular_branch(const IndicialReport& report) {
  if (report.classification == Singularity::fall_to_center ||
      report.classification == Singularity::critical)
    return false;
  return *report.s_minus > -0.5;
}

Admissible admissible(const IndicialReport& report, const BoundaryMode& mode) {
  if (report.classification == Singularity::fall_to_center)
    throw UnsupportedChannelError("fall to the center: indicial exponents are complex");
  Admissible out;
  out.exponents.push_back(*report.s_plus);
  out.ambiguity = report.classification == Singularity::limit_circle_window ||
                  report.classification == Singularity::critical;
  if (std::holds_alternative<L2Only>(mode) && admits_irregular_branch(report))
    out.exponents.push_back(*report.s_minus);
  return out;
}

BoundaryMode effective_mode(const IndicialReport& report, const BoundaryMode& mode) {
  validate(mode);
  const auto* l2 = std::get_if<L2Only>(&mode);
  if (report.classification == Singularity::fall_to_center) {
    if (l2) throw ModeUnavailableError("fall to the center: L2-only spectra are not supported");
    throw UnsupportedChannelError("fall to the center: u(0)=0 cannot select a branch");
  }
  if (!l2 || l2->theta == 0.0) return U0Strict{};
  if (report.classification == Singularity::critical)
    throw ModeUnavailableError("critical coupling: the second branch is logarithmic");
  if (!admits_irregular_branch(report)) return U0Strict{};
  return mode;
}

double series_value(const IndicialReport& report, const OriginCoefficients& coeffs,
                    const Channel& channel, double E, const BoundaryMode& mode, double r) {
  validate(channel);
  validate(mode);
  if (!(r > 0.0)) throw DomainError("series evaluation requires r > 0");
  const auto* l2 = checked_l2(report, mode);
  const auto m = model(coeffs, channel.mass, E);
  const double s_plus = *report.s_plus;
  double u = regular_value(s_plus, m, r);
  if (!l2) return u;
  const double s_minus = *report.s_minus;
  const double weight = l2->theta * std::pow(l2->r0, s_plus - s_minus);
  return u - weight * irregular_value(s_minus, s_plus, m, r, l2->r0);
}

StartValues series_start(const IndicialReport& report, const OriginCoefficients& coeffs,
                         const Channel& channel, double E, const BoundaryMode& mode, double r1,
                         double r2) {
  if (!(r1 > 0.0 && r2 > r1)) throw DomainError("series_start requires 0 < r1 < r2");
  return {series_value(report, coeffs, channel, E, mode, r1),
          series_value(report, coeffs, channel, E, mode, r2)};
}

double series_handoff_radius(const IndicialReport& report, const OriginCoefficients& coeffs,
                             const Channel& channel, double E, const BoundaryMode& mode) {
  validate(channel);
  const auto* l2 = checked_l2(report, mode);
  if (!l2) return 0.0;
  const double gap = *report.s_plus - *report.s_minus;
  const double r = l2->r0 * std::pow(std::abs(l2->theta) / 100.0, 1.0 / gap);
  const auto m = model(coeffs, channel.mass, E);
  double cap = std::numeric_limits<double>::infinity();
  if (m.p != 0.0) cap = std::min(cap, 0.25 / std::abs(m.p));
  if (m.q != 0.0) cap = std::min(cap, 0.25 / std::sqrt(std::abs(m.q)));
  return std::min(r, cap);
}

}  // namespace radial
