#include "radial/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "radial/errors.hpp"

namespace radial {

namespace {

// 2^-332 ~ 1e-100; multiplying by a power of two is exact.
constexpr int kRescaleExponent = -332;

// t_i = h^2 F_i / 12 for all grid points.
std::vector<double> numerov_weights(const Discretization& disc, double E) {
  const double h2 = disc.grid().step() * disc.grid().step() / 12.0;
  std::vector<double> t(static_cast<std::size_t>(disc.size()));
  for (int i = 0; i < disc.size(); ++i) t[static_cast<std::size_t>(i)] = h2 * disc.F(i, E);
  return t;
}

// Numerov as w_{i+1} = w_i + d_{i+1}, d_{i+1} = d_i + 12 t_i v_i with
// w = (1 - t) v. Forming 1 - t or 2 w_i - w_{i-1} directly would round the
// small term 12 t v on fine grids; carrying the difference d keeps it.
class NumerovStep {
 public:
  NumerovStep(const std::vector<double>& t, int i0, int i1, double v0, double v1)
      : t_(t), dir_(i1 - i0), i_(i1), v_(v1) {
    w_ = (1.0 - t_[idx(i1)]) * v1;
    d_ = w_ - (1.0 - t_[idx(i0)]) * v0;
  }

  int index() const { return i_; }
  double value() const { return v_; }

  // Advances one point; false when 1 - t_next <= 0 (step too large).
  bool advance() {
    const int next = i_ + dir_;
    const double denom = 1.0 - t_[idx(next)];
    if (!(denom > 0.0)) return false;
    d_ += 12.0 * t_[idx(i_)] * v_;
    w_ += d_;
    v_ = w_ / denom;
    i_ = next;
    return true;
  }

  void rescale(int exponent) {
    v_ = std::ldexp(v_, exponent);
    w_ = std::ldexp(w_, exponent);
    d_ = std::ldexp(d_, exponent);
  }

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

  const std::vector<double>& t_;
  int dir_;
  int i_;
  double v_;
  double w_ = 0.0;
  double d_ = 0.0;
};

void check_start(StartValues s) {
  if (!std::isfinite(s.u1) || !std::isfinite(s.u2))
    throw DomainError("Numerov start values must be finite");
  if (s.u1 == 0.0 && s.u2 == 0.0) throw DomainError("Numerov start values are both zero");
}

[[noreturn]] void too_coarse(double r, double E) {
  throw DomainError("grid too coarse for E = " + std::to_string(E) + " near r = " +
                    std::to_string(r));
}

double v_eff(const PotentialSpec& potential, const Channel& ch, double r) {
  const double l = ch.l;
  return l * (l + 1.0) / (2.0 * ch.mass * r * r) + evaluate(potential, r, ch.mass);
}

}  // namespace

RadialGrid::RadialGrid(GridScheme scheme, double r_min, double r_max, int n) : scheme_(scheme) {
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max))
    throw DomainError("grid requires 0 < r_min < r_max");
  if (n < 64) throw DomainError("grid requires at least 64 points");
  r_.resize(static_cast<std::size_t>(n));
  if (scheme == GridScheme::uniform) {
    step_ = (r_max - r_min) / (n - 1);
    for (int i = 0; i < n; ++i) r_[static_cast<std::size_t>(i)] = r_min + i * step_;
  } else {
    const double x0 = std::log(r_min);
    step_ = (std::log(r_max) - x0) / (n - 1);
    for (int i = 0; i < n; ++i) r_[static_cast<std::size_t>(i)] = std::exp(x0 + i * step_);
  }
  r_.front() = r_min;
  r_.back() = r_max;
}

RadialProblem::RadialProblem(Channel channel, PotentialSpec potential, BoundaryMode mode,
                             RadialGrid grid)
    : channel_(channel),
      potential_(std::move(potential)),
      mode_(mode),
      grid_(std::move(grid)),
      coeffs_(origin_coefficients(potential_)),
      report_(indicial(channel_, coeffs_)) {
  validate(mode_);
  if (std::holds_alternative<U0Strict>(mode_) &&
      report_.classification == Singularity::fall_to_center)
    throw UnsupportedChannelError("fall to the center: u(0)=0 cannot select a branch");
}

RadialProblem RadialProblem::with_mode(BoundaryMode mode) const {
  return RadialProblem(channel_, potential_, mode, grid_);
}

RadialProblem RadialProblem::with_grid(RadialGrid grid) const {
  return RadialProblem(channel_, potential_, mode_, std::move(grid));
}

double effective_f(const RadialProblem& problem, double E, double r) {
  if (!(r > 0.0)) throw DomainError("effective_f requires r > 0");
  const auto& ch = problem.channel();
  const double l = ch.l;
  return l * (l + 1.0) / (r * r) + 2.0 * ch.mass * (evaluate(problem.potential(), r, ch.mass) - E);
}

Discretization::Discretization(const RadialProblem& problem)
    : problem_(problem), two_m_(2.0 * problem.channel().mass) {
  const auto& grid = problem_.grid();
  const auto n = static_cast<std::size_t>(grid.size());
  const bool log = grid.scheme() == GridScheme::log_uniform;
  shift_ = log ? 0.25 : 0.0;
  q_.resize(n);
  jac2_.resize(n);
  vscale_.resize(n);
  const double l = problem_.channel().l;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid[static_cast<int>(i)];
    q_[i] = l * (l + 1.0) / (r * r) +
            two_m_ * evaluate(problem_.potential(), r, problem_.channel().mass);
    jac2_[i] = log ? r * r : 1.0;
    vscale_[i] = log ? std::sqrt(r) : 1.0;
  }
}

double Discretization::jacobian(int i) const {
  return grid().scheme() == GridScheme::log_uniform ? r(i) : 1.0;
}

HalfSolution numerov_outward(const Discretization& disc, double E, StartValues start, int stop,
                             int first, const NumerovOptions& opts) {
  check_start(start);
  if (first < 0 || stop <= first || stop >= disc.size())
    throw DomainError("outward sweep: index range out of bounds");
  const auto t = numerov_weights(disc, E);
  HalfSolution out;
  out.first = first;
  auto& v = out.u;
  v.resize(static_cast<std::size_t>(stop - first + 1));
  v[0] = start.u1 / disc.scale(first);
  v[1] = start.u2 / disc.scale(first + 1);
  NumerovStep step(t, first, first + 1, v[0], v[1]);
  while (step.index() < stop) {
    if (!step.advance()) too_coarse(disc.r(step.index() + 1), E);
    const auto k = static_cast<std::size_t>(step.index() - first);
    v[k] = step.value();
    if (std::abs(v[k]) > opts.overflow_limit) {
      for (std::size_t j = 0; j <= k; ++j) v[j] = std::ldexp(v[j], kRescaleExponent);
      step.rescale(kRescaleExponent);
      ++out.rescales;
    }
  }
  for (int i = first; i <= stop; ++i) v[static_cast<std::size_t>(i - first)] *= disc.scale(i);
  return out;
}

HalfSolution numerov_inward(const Discretization& disc, double E, StartValues tail, int top,
                            int stop, const NumerovOptions& opts) {
  check_start(tail);
  if (top >= disc.size() || stop < 0 || top - stop < 1)
    throw DomainError("inward sweep: index range out of bounds");
  const auto t = numerov_weights(disc, E);
  HalfSolution out;
  out.first = stop;
  auto& v = out.u;
  v.resize(static_cast<std::size_t>(top - stop + 1));
  auto at = [&](int i) -> double& { return v[static_cast<std::size_t>(i - stop)]; };
  at(top) = tail.u1 / disc.scale(top);
  at(top - 1) = tail.u2 / disc.scale(top - 1);
  NumerovStep step(t, top, top - 1, at(top), at(top - 1));
  while (step.index() > stop) {
    if (!step.advance()) too_coarse(disc.r(step.index() - 1), E);
    const int i = step.index();
    at(i) = step.value();
    if (std::abs(at(i)) > opts.overflow_limit) {
      for (int j = i; j <= top; ++j) at(j) = std::ldexp(at(j), kRescaleExponent);
      step.rescale(kRescaleExponent);
      ++out.rescales;
    }
  }
  for (int i = stop; i <= top; ++i) at(i) *= disc.scale(i);
  return out;
}

StartValues tail_start(const PotentialSpec& potential, const Channel& channel, double E,
                       double r_max, double r_prev) {
  validate(channel);
  if (!(r_prev > 0.0 && r_prev < r_max)) throw DomainError("tail_start requires 0 < r_prev < r_max");
  const double barrier = v_eff(potential, channel, r_max);
  if (!(E < barrier)) {
    double r = r_max;
    for (int k = 0; k < 64 && !(v_eff(potential, channel, r) > E); ++k) r *= 2.0;
    const double suggestion = v_eff(potential, channel, r) > E
                                  ? 2.0 * r
                                  : std::numeric_limits<double>::infinity();
    throw RMaxTooSmallError("E = " + std::to_string(E) + " is not below V_eff(r_max) = " +
                                std::to_string(barrier) + "; try r_max >= " +
                                std::to_string(suggestion),
                            suggestion);
  }
  const double kappa = std::sqrt(2.0 * channel.mass * (barrier - E));
  return {1.0, std::exp(kappa * (r_max - r_prev))};
}

int count_nodes(std::span<const double> u, double zero_fraction) {
  if (u.size() < 2) return 0;
  double peak = 0.0;
  if (zero_fraction > 0.0)
    for (double x : u) peak = std::max(peak, std::abs(x));
  const double floor = zero_fraction * peak;
  int nodes = 0;
  int last = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0 || std::abs(u[i]) <= floor) continue;
    const int sign = u[i] > 0.0 ? 1 : -1;
    if (last != 0 && sign != last) ++nodes;
    last = sign;
  }
  return nodes;
}

int match_index(const Discretization& disc, double E) {
  const int n = disc.size();
  int turning = -1;
  int argmin = 0;
  double fmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double f = disc.f(i, E);
    if (f <= 0.0) turning = i;
    if (f < fmin) {
      fmin = f;
      argmin = i;
    }
  }
  const int idx = turning >= 0 ? turning : argmin;
  const int lo = std::max(2, n / 50);
  const int hi = std::min(n - 3, (4 * n) / 5);
  return std::clamp(idx, lo, hi);
}

int inward_top(const Discretization& disc, double E) {
  const double h2 = disc.grid().step() * disc.grid().step() / 12.0;
  int top = disc.size() - 1;
  while (top > 1 && h2 * disc.F(top, E) > 0.5) --top;
  return top;
}

double log_derivative(const Discretization& disc, const HalfSolution& half, int index,
                      bool backward) {
  const int d = backward ? -1 : 1;
  const double v0 = half.at(index) / disc.scale(index);
  const double v1 = half.at(index + d) / disc.scale(index + d);
  const double v2 = half.at(index + 2 * d) / disc.scale(index + 2 * d);
  const double dv = -d * (3.0 * v0 - 4.0 * v1 + v2) / (2.0 * disc.grid().step());
  if (disc.grid().scheme() == GridScheme::log_uniform)
    return (0.5 + dv / v0) / disc.r(index);
  return dv / v0;
}

int outward_node_count(const Discretization& disc, double E, StartValues start, int first) {
  check_start(start);
  const int n = disc.size();
  if (first < 0 || first + 2 >= n) throw DomainError("outward count: start index out of range");
  const auto t = numerov_weights(disc, E);
  int turning = -1;
  for (int i = 0; i < n; ++i)
    if (disc.F(i, E) <= 0.0) turning = i;

  NumerovStep step(t, first, first + 1, start.u1 / disc.scale(first),
                   start.u2 / disc.scale(first + 1));
  double v_prev = start.u1 / disc.scale(first);
  int nodes = 0;
  int last = step.value() > 0.0 ? 1 : (step.value() < 0.0 ? -1 : 0);
  while (step.index() + 1 <= n - 2) {
    const double v_cur = step.value();
    if (!step.advance()) {
      if (step.index() + 1 > turning) break;
      too_coarse(disc.r(step.index() + 1), E);
    }
    const double v_next = step.value();
    if (v_next != 0.0) {
      const int sign = v_next > 0.0 ? 1 : -1;
      if (last != 0 && sign != last) ++nodes;
      last = sign;
    }
    v_prev = v_cur;
    if (std::abs(v_next) > 1e100) {
      v_prev = std::ldexp(v_prev, kRescaleExponent);
      step.rescale(kRescaleExponent);
    }
    if (step.index() > turning && step.value() * (step.value() - v_prev) > 0.0) break;
  }
  return nodes;
}

PowerLawFit fit_origin_power_law(std::span<const double> r, std::span<const double> u) {
  if (r.size() != u.size() || r.size() < 4)
    throw ExtrapolationError("origin fit needs at least 4 samples");
  const double r0 = r[0];
  std::size_t end = 0;
  while (end < r.size() && r[end] <= 10.0 * r0 * (1.0 + 1e-12)) ++end;
  end = std::max<std::size_t>(end, std::min<std::size_t>(8, r.size()));

  // At most 64 evenly spaced samples from the window.
  const std::size_t count = std::min<std::size_t>(end, 64);
  std::vector<std::size_t> idx(count);
  for (std::size_t k = 0; k < count; ++k) idx[k] = (k * (end - 1)) / (count - 1);

  const double sign = u[0] > 0.0 ? 1.0 : -1.0;
  const double rc = r[end - 1];
  Eigen::MatrixXd a(static_cast<Eigen::Index>(count), 4);
  Eigen::VectorXd b(static_cast<Eigen::Index>(count));
  for (std::size_t k = 0; k < count; ++k) {
    const double ri = r[idx[k]];
    const double ui = u[idx[k]];
    if (!(ui * sign > 0.0) || !std::isfinite(ui))
      throw ExtrapolationError("u changes sign or vanishes in the innermost decade");
    const auto row = static_cast<Eigen::Index>(k);
    a(row, 0) = 1.0;
    a(row, 1) = std::log(ri / rc);
    a(row, 2) = ri / rc;
    a(row, 3) = (ri / rc) * (ri / rc);
    b(row) = std::log(std::abs(ui));
  }
  const Eigen::Vector4d x = a.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd resid = a * x - b;

  PowerLawFit fit;
  fit.s = x(1);
  fit.a = x(2) / rc;
  fit.b = x(3) / (rc * rc);
  fit.c = sign * std::exp(x(0) - fit.s * std::log(rc));
  fit.rms_residual = std::sqrt(resid.squaredNorm() / static_cast<double>(count));
  fit.r_ref = r0;
  fit.u_ref = u[0];
  fit.log_slope_ref = fit.s + fit.a * r0 + 2.0 * fit.b * r0 * r0;
  return fit;
}

}  // namespace radial
