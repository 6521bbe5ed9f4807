#include "radial/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "radial/errors.hpp"

namespace radial {

namespace {

// Sign changes among nonzero samples u[from..to] (inclusive).
int sign_changes(const HalfSolution& half, int from, int to) {
  int changes = 0;
  int last = 0;
  for (int i = from; i <= to; ++i) {
    const double x = half.at(i);
    if (x == 0.0) continue;
    const int sign = x > 0.0 ? 1 : -1;
    if (last != 0 && sign != last) ++changes;
    last = sign;
  }
  return changes;
}

struct Shot {
  double E = 0.0;
  int m = 0;
  int top = 0;
  double L = 0.0;
  double R = 0.0;
  double delta = 0.0;
  int nodes = 0;
  HalfSolution left;
  HalfSolution right;

  bool finite() const { return std::isfinite(L) && std::isfinite(R) && std::isfinite(delta); }
};

// Largest grid index whose radius is at most r and at which the origin
// model c2/r^2 + c1/r + c0 still matches V to within 1e-10 / (2m r^2).
int handoff_index(const Discretization& disc, double r_handoff) {
  if (!(r_handoff > 0.0)) return 0;
  const auto& p = disc.problem();
  const auto& c = p.coefficients();
  const double l = p.channel().l;
  const double cent = l * (l + 1.0) / disc.two_m();
  int idx = 0;
  const int limit = (4 * disc.size()) / 5 - 3;
  for (int i = 0; i < limit && disc.r(i) <= r_handoff; ++i) {
    const double r = disc.r(i);
    const double model = (cent + c.c2) / (r * r) + c.c1 / r + c.c0;
    if (disc.two_m() * std::abs(disc.v_eff(i) - model) * r * r > 1e-10) break;
    idx = i;
  }
  return idx;
}

class Shooter {
 public:
  explicit Shooter(const RadialProblem& problem)
      : disc_(problem),
        mode_(effective_mode(problem.indicial_report(), problem.mode())),
        first_(handoff_index(disc_, series_handoff_radius(problem.indicial_report(),
                                                           problem.coefficients(),
                                                           problem.channel(), 0.0, mode_))) {}

  const Discretization& disc() const { return disc_; }
  const RadialProblem& problem() const { return disc_.problem(); }
  const BoundaryMode& mode() const { return mode_; }

  double series(double E, int i) const {
    const auto& p = problem();
    return series_value(p.indicial_report(), p.coefficients(), p.channel(), E, mode_, disc_.r(i));
  }

  StartValues start(double E) const { return {series(E, first_), series(E, first_ + 1)}; }

  // Matching point, kept clear of the series region.
  int match(double E) const { return std::max(match_index(disc_, E), first_ + 3); }

  int node_count(double E) const { return outward_node_count(disc_, E, start(E), first_); }

  Shot shoot(double E, int m) const {
    Shot s;
    s.E = E;
    s.m = m;
    s.left = numerov_outward(disc_, E, start(E), m, first_);
    s.top = inward_top(disc_, E);
    if (s.top < m + 2) throw DomainError("inward sweep cannot reach the matching point");
    const auto& p = problem();
    const auto tail = tail_start(p.potential(), p.channel(), E, disc_.r(s.top), disc_.r(s.top - 1));
    s.right = numerov_inward(disc_, E, tail, s.top, m);
    s.L = log_derivative(disc_, s.left, m, true);
    s.R = log_derivative(disc_, s.right, m, false);
    s.delta = (s.L - s.R) / (std::abs(s.L) + std::abs(s.R) + 1.0 / disc_.r(m));
    s.nodes = sign_changes(s.left, std::max(1, first_), m) + sign_changes(s.right, m, s.top - 1);
    return s;
  }

  double leading_exponent() const {
    const auto& rep = problem().indicial_report();
    return std::holds_alternative<L2Only>(mode_) ? *rep.s_minus : *rep.s_plus;
  }

  RadialSolution assemble(const Shot& s, double zero_fraction) const {
    const int n = disc_.size();
    RadialSolution sol{disc_.grid(), std::vector<double>(static_cast<std::size_t>(n), 0.0), 0,
                       s.m, s.L, s.R};
    for (int i = 0; i < first_; ++i) sol.u[static_cast<std::size_t>(i)] = series(s.E, i);
    for (int i = first_; i <= s.m; ++i) sol.u[static_cast<std::size_t>(i)] = s.left.at(i);
    const double join = s.left.at(s.m) / s.right.at(s.m);
    for (int i = s.m + 1; i <= s.top; ++i) sol.u[static_cast<std::size_t>(i)] = join * s.right.at(i);

    double norm2 = 0.0;
    const double h = disc_.grid().step();
    for (int i = 0; i < n; ++i) {
      const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      const double u = sol.u[static_cast<std::size_t>(i)];
      norm2 += w * h * disc_.jacobian(i) * u * u;
    }
    // \int_0^{r_min} u^2 dr for u ~ r^s.
    const double u0 = sol.u.front();
    norm2 += u0 * u0 * disc_.r(0) / (2.0 * leading_exponent() + 1.0);
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& x : sol.u) x *= scale;
    sol.nodes = count_nodes(sol.u, zero_fraction);
    return sol;
  }

 private:
  Discretization disc_;
  BoundaryMode mode_;
  int first_;
};

double min_v_eff(const Discretization& disc) {
  double v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < disc.size(); ++i) v = std::min(v, disc.v_eff(i));
  return v;
}

std::pair<double, double> bracket_impl(const Shooter& sh, int n) {
  if (n < 0) throw DomainError("state index n must be non-negative");
  const auto& p = sh.problem();
  const double thr = energy_threshold(p);
  // Tails can only be started where E < V_eff(r_max).
  const double top = std::min(thr, sh.disc().v_eff(sh.disc().size() - 1));
  const double hi = top - 1e-12 * std::max(1.0, std::abs(top));
  if (sh.node_count(hi) < n + 1)
    throw NoSuchStateError("no bound state with " + std::to_string(n) +
                           " nodes below threshold " + std::to_string(thr));
  double lo = min_v_eff(sh.disc());
  if (std::holds_alternative<L2Only>(sh.mode())) lo = std::min(lo, thr - 1.0);
  lo = std::min(lo, hi);
  for (int k = 0; sh.node_count(lo) > n; ++k) {
    if (k >= 200) throw NoSuchStateError("no lower energy bracket for state " + std::to_string(n));
    lo = thr - 2.0 * (thr - lo);
  }
  return {lo, hi};
}

EigenvalueResult solve_impl(const Shooter& sh, int n, const SolverOptions& opts) {
  auto [lo, hi] = bracket_impl(sh, n);
  int iterations = 0;
  std::optional<RMaxTooSmallError> tail_error;

  auto try_shoot = [&](double E, int m) -> std::optional<Shot> {
    try {
      auto s = sh.shoot(E, m);
      if (!s.finite()) return std::nullopt;
      return s;
    } catch (const RMaxTooSmallError& e) {
      tail_error = e;
      return std::nullopt;
    } catch (const DomainError&) {
      return std::nullopt;
    }
  };

  // Node-count bisection until the mismatch changes sign across a bracket
  // free of poles (same node structure at both ends).
  std::optional<Shot> a_shot, b_shot;
  int m = 0;
  bool walked = false;
  for (;;) {
    m = sh.match(0.5 * (lo + hi));
    if (!a_shot || a_shot->E != lo || a_shot->m != m) a_shot = try_shoot(lo, m);
    if (!b_shot || b_shot->E != hi || b_shot->m != m) b_shot = try_shoot(hi, m);
    if (a_shot && b_shot && a_shot->nodes == n && b_shot->nodes == n &&
        a_shot->delta * b_shot->delta < 0.0)
      break;
    if (a_shot && a_shot->delta == 0.0 && a_shot->nodes == n) {
      b_shot = a_shot;
      break;
    }
    // The node transition is isolated but the mismatch zero sits just
    // outside it: walk away from the transition toward smaller |delta|.
    if (!walked && a_shot && b_shot && a_shot->nodes == n && b_shot->nodes == n &&
        hi - lo <= 1e-6 * std::max(1.0, std::abs(hi))) {
      walked = true;
      const bool down = std::abs(a_shot->delta) <= std::abs(b_shot->delta);
      Shot edge = down ? *a_shot : *b_shot;
      double step = std::max(hi - lo, 1e-12 * std::max(1.0, std::abs(hi)));
      for (int k = 0; k < 64; ++k, step *= 2.0) {
        ++iterations;
        auto s = try_shoot(edge.E + (down ? -step : step), m);
        if (!s || s->nodes != n) break;
        if (s->delta * edge.delta <= 0.0) {
          a_shot = down ? s : std::optional<Shot>(edge);
          b_shot = down ? std::optional<Shot>(edge) : s;
          lo = a_shot->E;
          hi = b_shot->E;
          break;
        }
        edge = *s;
      }
      if (a_shot->delta * b_shot->delta <= 0.0 && a_shot->nodes == n && b_shot->nodes == n) break;
    }
    const double mid = 0.5 * (lo + hi);
    if (iterations >= opts.max_iter || !(mid > lo && mid < hi)) {
      if (tail_error) throw *tail_error;
      throw NonConvergenceError("node bisection did not isolate state " + std::to_string(n), lo,
                                hi);
    }
    ++iterations;
    if (sh.node_count(mid) <= n)
      lo = mid;
    else
      hi = mid;
  }

  // Illinois-modified regula falsi on the mismatch, bisection as fallback.
  Shot best = std::abs(a_shot->delta) <= std::abs(b_shot->delta) ? *a_shot : *b_shot;
  double a = a_shot->E, fa = a_shot->delta;
  double b = b_shot->E, fb = b_shot->delta;
  double prev = b;
  while (best.delta != 0.0 && a != b) {
    if (iterations >= opts.max_iter)
      throw NonConvergenceError("mismatch iteration exceeded max_iter for state " +
                                    std::to_string(n),
                                std::min(a, b), std::max(a, b));
    ++iterations;
    const double left = std::min(a, b), right = std::max(a, b);
    double c = b - fb * (b - a) / (fb - fa);
    if (!(c > left && c < right)) c = 0.5 * (left + right);
    if (!(c > left && c < right)) break;
    auto sc = try_shoot(c, m);
    if (!sc || sc->nodes != n) {
      c = 0.5 * (left + right);
      sc = try_shoot(c, m);
      if (!sc || sc->nodes != n)
        throw NonConvergenceError("mismatch lost continuity near state " + std::to_string(n), left,
                                  right);
    }
    const double fc = sc->delta;
    if (std::abs(fc) <= std::abs(best.delta)) best = *sc;
    const double step = std::abs(c - prev);
    prev = c;
    if (fc == 0.0) break;
    if (fc * fb < 0.0) {
      a = b;
      fa = fb;
    } else {
      fa *= 0.5;
    }
    b = c;
    fb = fc;
    if (std::abs(b - a) <= opts.tol_E) break;
    if (step <= opts.tol_E && std::abs(fc) <= opts.mismatch_tol) break;
  }

  EigenvalueResult res{best.E, n, sh.mode(), std::abs(best.delta), iterations,
                       sh.assemble(best, opts.zero_fraction)};
  if (res.mismatch_residual > opts.mismatch_tol)
    throw NonConvergenceError("mismatch residual " + std::to_string(res.mismatch_residual) +
                                  " above tolerance for state " + std::to_string(n),
                              std::min(a, b), std::max(a, b));
  if (res.solution.nodes != n)
    throw NonConvergenceError("converged solution has " + std::to_string(res.solution.nodes) +
                                  " nodes, expected " + std::to_string(n),
                              std::min(a, b), std::max(a, b));
  return res;
}

}  // namespace

double energy_threshold(const RadialProblem& problem) {
  if (tail_kind(problem.potential()) == TailKind::decaying) return 0.0;
  const auto& ch = problem.channel();
  const double r = problem.grid().r_max();
  const double l = ch.l;
  return l * (l + 1.0) / (2.0 * ch.mass * r * r) + evaluate(problem.potential(), r, ch.mass);
}

double mismatch(const RadialProblem& problem, double E) {
  const Shooter sh(problem);
  return sh.shoot(E, sh.match(E)).delta;
}

std::pair<double, double> bracket_state(const RadialProblem& problem, int n) {
  return bracket_impl(Shooter(problem), n);
}

EigenvalueResult solve_state(const RadialProblem& problem, int n, const SolverOptions& opts) {
  return solve_impl(Shooter(problem), n, opts);
}

std::vector<EigenvalueResult> spectrum(const RadialProblem& problem, int n_max,
                                       const SolverOptions& opts) {
  const Shooter sh(problem);
  std::vector<EigenvalueResult> out;
  for (int n = 0; n <= n_max; ++n) {
    try {
      out.push_back(solve_impl(sh, n, opts));
    } catch (const NoSuchStateError&) {
      break;
    }
  }
  return out;
}

std::vector<SaeRow> sae_scan(const RadialProblem& problem, std::span<const double> thetas,
                             int n_max, const SolverOptions& opts) {
  const auto& rep = problem.indicial_report();
  if (!admits_irregular_branch(rep))
    throw ModeUnavailableError(
        "channel admits no square-integrable irregular branch (needs s- > -1/2, non-critical)");
  const double r0 = std::holds_alternative<L2Only>(problem.mode())
                        ? std::get<L2Only>(problem.mode()).r0
                        : 1.0;
  std::vector<SaeRow> rows;
  rows.reserve(thetas.size());
  for (double theta : thetas)
    rows.push_back({theta, spectrum(problem.with_mode(L2Only{theta, r0}), n_max, opts)});
  return rows;
}

double origin_log_slope(const RadialSolution& solution) {
  return fit_origin_power_law(solution.grid.r(), solution.u).s;
}

double overlap(const RadialSolution& a, const RadialSolution& b) {
  if (a.grid.r().size() != b.grid.r().size() || a.grid.scheme() != b.grid.scheme() ||
      a.grid.r_min() != b.grid.r_min() || a.grid.r_max() != b.grid.r_max())
    throw DomainError("overlap requires solutions on the same grid");
  const int n = a.grid.size();
  const bool log = a.grid.scheme() == GridScheme::log_uniform;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    const auto k = static_cast<std::size_t>(i);
    acc += w * (log ? a.grid[i] : 1.0) * a.u[k] * b.u[k];
  }
  return acc * a.grid.step();
}

}  // namespace radial
