#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "radial/potentials.hpp"

namespace radial {

/// Orbital quantum number and mass (hbar = 1).
struct Channel {
  int l = 0;
  double mass = 1.0;
};

/// Throws DomainError unless l >= 0 and mass > 0.
void validate(const Channel& channel);

enum class Singularity { standard, limit_circle_window, critical, fall_to_center };

std::string_view to_string(Singularity s);

/// Near r = 0, u ~ r^s with s(s-1) = lambda_eff.
struct IndicialReport {
  double lambda_eff = 0.0;    ///< l(l+1) + 2 m c2
  double discriminant = 0.0;  ///< 1/4 + lambda_eff
  std::optional<double> s_plus;
  std::optional<double> s_minus;
  /// For fall to the center: s = re +- i im.
  double complex_re = 0.0;
  double complex_im = 0.0;
  Singularity classification = Singularity::standard;
};

/// The physical condition u(0) = 0: only the regular branch r^{s+}.
struct U0Strict {
  bool operator==(const U0Strict&) const = default;
};

/// Square integrability only: the irregular branch r^{s-} may be admixed
/// with weight theta, anchored at reference radius r0.
struct L2Only {
  double theta = 0.0;
  double r0 = 1.0;
  bool operator==(const L2Only&) const = default;
};

using BoundaryMode = std::variant<U0Strict, L2Only>;

/// Throws DomainError if L2Only.r0 <= 0 or theta is not finite.
void validate(const BoundaryMode& mode);

IndicialReport indicial(const Channel& channel, const OriginCoefficients& coeffs);

struct StartValues {
  double u1 = 0.0;
  double u2 = 0.0;
};

/// Values at r1 < r2 of the origin series selected by `mode`.
///
/// Both branches are Frobenius series r^s (1 + a1 r + a2 r^2 + ...) of
/// u'' = [lambda/r^2 + 2m (c1/r + c0 - E)] u, summed to convergence.
/// U0Strict starts on the s+ branch. L2Only subtracts
/// theta * r0^{s+} (r/r0)^{s-} (1 + ...); for s- = 0 with a Coulomb term the
/// irregular branch carries a C u_reg ln(r/r0) part instead.
///
/// Throws UnsupportedChannelError (U0Strict, fall to the center),
/// ModeUnavailableError (L2Only at fall to the center or at the critical
/// coupling with theta != 0) and NonNormalizableError (theta != 0 with
/// s- <= -1/2).
StartValues series_start(const IndicialReport& report, const OriginCoefficients& coeffs,
                         const Channel& channel, double E, const BoundaryMode& mode, double r1,
                         double r2);

/// Single-point form of series_start.
double series_value(const IndicialReport& report, const OriginCoefficients& coeffs,
                    const Channel& channel, double E, const BoundaryMode& mode, double r);

/// Smallest radius from which an outward sweep keeps the regular part of an
/// L2Only start above rounding noise: where theta r0^{s+-s-} r^{s-} is about
/// 100 r^{s+}, capped to the region where the series converges quickly.
/// Returns 0 for U0Strict (and theta = 0).
double series_handoff_radius(const IndicialReport& report, const OriginCoefficients& coeffs,
                             const Channel& channel, double E, const BoundaryMode& mode);

struct Admissible {
  std::vector<double> exponents;
  /// Set when both branches vanish at the origin, so u(0) = 0 alone does
  /// not pick one (limit-circle window and the critical coupling).
  bool ambiguity = false;
};

/// Throws UnsupportedChannelError at fall to the center.
Admissible admissible(const IndicialReport& report, const BoundaryMode& mode);

/// True when the irregular branch is square integrable (s- > -1/2).
bool admits_irregular_branch(const IndicialReport& report);

/// The boundary mode actually applied by the solvers: L2Only collapses to
/// U0Strict when the irregular branch is not admissible or theta = 0.
BoundaryMode effective_mode(const IndicialReport& report, const BoundaryMode& mode);

}  // namespace radial
