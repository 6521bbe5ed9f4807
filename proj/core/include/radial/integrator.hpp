#pragma once

#include <span>
#include <vector>

#include "radial/origin_analysis.hpp"
#include "radial/potentials.hpp"

namespace radial {

enum class GridScheme { uniform, log_uniform };

/// Radial mesh. Log-uniform grids are uniform in x = ln r.
class RadialGrid {
 public:
  /// Throws DomainError unless 0 < r_min < r_max and n >= 64.
  RadialGrid(GridScheme scheme, double r_min, double r_max, int n);

  GridScheme scheme() const { return scheme_; }
  double r_min() const { return r_.front(); }
  double r_max() const { return r_.back(); }
  int size() const { return static_cast<int>(r_.size()); }
  double operator[](int i) const { return r_[static_cast<std::size_t>(i)]; }
  std::span<const double> r() const { return r_; }
  /// Spacing in the integration variable (r or ln r).
  double step() const { return step_; }

 private:
  GridScheme scheme_;
  std::vector<double> r_;
  double step_;
};

/// Eq. u'' = f(r) u with f = l(l+1)/r^2 + 2m (V - E), plus the boundary
/// data at the origin.
class RadialProblem {
 public:
  /// Throws DomainError for invalid parts and UnsupportedChannelError for a
  /// fall-to-the-center channel under U0Strict.
  RadialProblem(Channel channel, PotentialSpec potential, BoundaryMode mode, RadialGrid grid);

  const Channel& channel() const { return channel_; }
  const PotentialSpec& potential() const { return potential_; }
  const BoundaryMode& mode() const { return mode_; }
  const RadialGrid& grid() const { return grid_; }
  const OriginCoefficients& coefficients() const { return coeffs_; }
  const IndicialReport& indicial_report() const { return report_; }

  RadialProblem with_mode(BoundaryMode mode) const;
  RadialProblem with_grid(RadialGrid grid) const;

 private:
  Channel channel_;
  PotentialSpec potential_;
  BoundaryMode mode_;
  RadialGrid grid_;
  OriginCoefficients coeffs_;
  IndicialReport report_;
};

struct RadialSolution {
  RadialGrid grid;
  std::vector<double> u;
  int nodes = 0;
  int match_index = 0;
  double logderiv_left = 0.0;
  double logderiv_right = 0.0;
};

/// f(r) = l(l+1)/r^2 + 2m (V(r) - E).
double effective_f(const RadialProblem& problem, double E, double r);

/// Energy-independent samples of the problem on its grid. In the log
/// scheme the recurrence runs on v = u / sqrt(r) with
/// v'' = [r^2 f(r) + 1/4] v in x = ln r.
class Discretization {
 public:
  explicit Discretization(const RadialProblem& problem);

  const RadialProblem& problem() const { return problem_; }
  const RadialGrid& grid() const { return problem_.grid(); }
  int size() const { return grid().size(); }
  double r(int i) const { return grid()[i]; }
  double two_m() const { return two_m_; }

  /// Physical f(r_i) at energy E.
  double f(int i, double E) const { return q_[static_cast<std::size_t>(i)] - two_m_ * E; }
  /// Coefficient of the recurrence in the integration variable.
  double F(int i, double E) const {
    return jac2_[static_cast<std::size_t>(i)] * f(i, E) + shift_;
  }
  /// u_i = scale_i * v_i.
  double scale(int i) const { return vscale_[static_cast<std::size_t>(i)]; }
  /// l(l+1)/(2m r^2) + V(r) at grid point i.
  double v_eff(int i) const { return q_[static_cast<std::size_t>(i)] / two_m_; }
  /// dr/dx at grid point i (1 on uniform grids, r on log grids).
  double jacobian(int i) const;

 private:
  RadialProblem problem_;
  double two_m_;
  double shift_;
  std::vector<double> q_;
  std::vector<double> jac2_;
  std::vector<double> vscale_;
};

struct NumerovOptions {
  /// Running values are rescaled by an exact power of two past this bound.
  double overflow_limit = 1e100;
};

/// A stretch of u computed by one sweep. `u[k]` is the value at grid index
/// `first + k`.
struct HalfSolution {
  int first = 0;
  std::vector<double> u;
  int rescales = 0;

  int last() const { return first + static_cast<int>(u.size()) - 1; }
  double at(int i) const { return u[static_cast<std::size_t>(i - first)]; }
};

/// Outward sweep over [first, stop]; `start` holds u at first, first + 1.
HalfSolution numerov_outward(const Discretization& disc, double E, StartValues start, int stop,
                             int first = 0, const NumerovOptions& opts = {});
/// Inward sweep from `top` down to `stop`; (u_top, u_{top-1}) = tail.
HalfSolution numerov_inward(const Discretization& disc, double E, StartValues tail, int top,
                            int stop, const NumerovOptions& opts = {});

/// Starting pair (u(r_max), u(r_prev)) from the local decay constant
/// kappa = sqrt(2m (V_eff(r_max) - E)). Throws RMaxTooSmallError when E is
/// not below V_eff(r_max).
StartValues tail_start(const PotentialSpec& potential, const Channel& channel, double E,
                       double r_max, double r_prev);

/// Strict sign changes between consecutive nonzero samples. Zero samples,
/// including the walls at either end, are never nodes. Samples with
/// |u| <= zero_fraction * max|u| count as zero.
int count_nodes(std::span<const double> u, double zero_fraction = 0.0);

/// Outermost classical turning point clamped to [n / 50, 0.8 n]. Without a
/// turning point the index of smallest f is used.
int match_index(const Discretization& disc, double E);

/// Largest index usable as the start of an inward sweep: the recurrence
/// weight h^2 F / 12 must stay below 1/2.
int inward_top(const Discretization& disc, double E);

/// u'/u at `index` from a one-sided three-point difference in the
/// integration variable; `backward` uses index, index-1, index-2.
double log_derivative(const Discretization& disc, const HalfSolution& half, int index,
                      bool backward);

/// Node count of the outward solution, stopping once the sweep is in the
/// forbidden region beyond the last turning point and moving away from
/// zero (no further node is possible there). Samples below `first` are
/// taken to be node free.
int outward_node_count(const Discretization& disc, double E, StartValues start, int first = 0);

/// ln|u| = ln|c| + s ln r + a r + b r^2 fitted over the innermost decade of
/// the grid.
struct PowerLawFit {
  double c = 0.0;  ///< carries the sign of u
  double s = 0.0;
  double a = 0.0;
  double b = 0.0;
  double rms_residual = 0.0;
  double r_ref = 0.0;  ///< innermost abscissa
  double u_ref = 0.0;  ///< u at r_ref
  /// r u'(r) / u at r_ref from the fitted form.
  double log_slope_ref = 0.0;
};

/// Throws ExtrapolationError when u changes sign or vanishes in the window.
PowerLawFit fit_origin_power_law(std::span<const double> r, std::span<const double> u);

}  // namespace radial
