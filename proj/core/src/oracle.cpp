#include "radial/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "radial/errors.hpp"

namespace radial {

RadialGrid oracle_grid(double r_max, int n, int l) {
  if (n < 64) throw DomainError("oracle grid needs at least 64 points");
  if (l < 0) throw DomainError("l must be non-negative");
  // Walls at 0 (or h) and at r_max.
  const double h = l == 0 ? r_max / (n + 1) : r_max / (n + 2);
  const double first = l == 0 ? h : 2.0 * h;
  return RadialGrid(GridScheme::uniform, first, first + (n - 1) * h, n);
}

FDMatrix build_fd_matrix(const RadialProblem& problem) {
  const auto& grid = problem.grid();
  if (grid.scheme() != GridScheme::uniform)
    throw DomainError("the finite-difference oracle needs a uniform grid");
  if (const auto* l2 = std::get_if<L2Only>(&problem.mode()); l2 && l2->theta != 0.0)
    throw DomainError("the finite-difference oracle certifies u(0) = 0 only");

  const auto& ch = problem.channel();
  const double two_m = 2.0 * ch.mass;
  const double h = grid.step();
  const double ll = static_cast<double>(ch.l) * (ch.l + 1.0);
  const int n = grid.size();

  FDMatrix m;
  m.h = h;
  m.diag.resize(static_cast<std::size_t>(n));
  m.offdiag.assign(static_cast<std::size_t>(n - 1), -1.0 / (h * h * two_m));
  for (int i = 0; i < n; ++i) {
    const double r = grid[i];
    m.diag[static_cast<std::size_t>(i)] =
        (2.0 / (h * h) + ll / (r * r)) / two_m + evaluate(problem.potential(), r, ch.mass);
  }
  return m;
}

int inertia_count(const FDMatrix& matrix, double E) {
  constexpr double kTiny = std::numeric_limits<double>::min();
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < matrix.diag.size(); ++i) {
    const double b2 = i == 0 ? 0.0 : matrix.offdiag[i - 1] * matrix.offdiag[i - 1];
    d = (matrix.diag[i] - E) - (i == 0 ? 0.0 : b2 / d);
    if (d == 0.0) d = kTiny;
    if (d < 0.0) ++count;
  }
  return count;
}

std::vector<double> fd_spectrum(const FDMatrix& matrix, int k, double tol) {
  const int n = matrix.dimension();
  if (k < 0 || k > n)
    throw DomainError("requested " + std::to_string(k) + " eigenvalues of a " +
                      std::to_string(n) + "-point matrix");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < n; ++i) {
    const auto k_i = static_cast<std::size_t>(i);
    const double radius = (i > 0 ? std::abs(matrix.offdiag[k_i - 1]) : 0.0) +
                          (i + 1 < n ? std::abs(matrix.offdiag[k_i]) : 0.0);
    lo = std::min(lo, matrix.diag[k_i] - radius);
    hi = std::max(hi, matrix.diag[k_i] + radius);
  }

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k));
  double floor = lo;
  for (int j = 0; j < k; ++j) {
    double a = floor, b = hi;
    for (;;) {
      const double mid = 0.5 * (a + b);
      if (b - a <= tol * std::max(1.0, std::abs(mid)) || !(mid > a && mid < b)) break;
      if (inertia_count(matrix, mid) >= j + 1)
        b = mid;
      else
        a = mid;
    }
    out.push_back(0.5 * (a + b));
    floor = a;
  }
  return out;
}

std::vector<double> fd_spectrum(const RadialProblem& problem, int k, double tol) {
  return fd_spectrum(build_fd_matrix(problem), k, tol);
}

}  // namespace radial
