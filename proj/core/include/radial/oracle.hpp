#pragma once

#include <vector>

#include "radial/integrator.hpp"

namespace radial {

/// Symmetric tridiagonal sampling of (-d^2/dr^2 + l(l+1)/r^2 + 2m V) / (2m)
/// on the interior points of a uniform grid, u = 0 one step beyond each end.
struct FDMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;  ///< size diag.size() - 1
  double h = 0.0;

  int dimension() const { return static_cast<int>(diag.size()); }
};

/// Uniform grid of `n` interior points with the outer wall at r_max. The
/// first point is h for l = 0 and 2h otherwise, so that the inner wall sits
/// at 0 or h.
RadialGrid oracle_grid(double r_max, int n, int l);

/// Throws DomainError for non-uniform grids and for modes other than
/// U0Strict (L2Only with theta = 0 is accepted).
FDMatrix build_fd_matrix(const RadialProblem& problem);

/// Number of eigenvalues strictly below E (Sturm sequence count).
int inertia_count(const FDMatrix& matrix, double E);

/// The k lowest eigenvalues in ascending order, by bisection on
/// inertia_count. Throws DomainError when k exceeds the dimension.
std::vector<double> fd_spectrum(const FDMatrix& matrix, int k, double tol = 1e-13);
std::vector<double> fd_spectrum(const RadialProblem& problem, int k, double tol = 1e-13);

}  // namespace radial
