#pragma once

#include <functional>

namespace radial {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  ///< sum of |K15 - G7| over the final panels
  int evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod 7/15 on [a, b]. Bisects the panel with
/// the largest error estimate until the total estimate drops below
/// max(abs_tol, rel_tol * |value|) or `max_panels` is reached.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-13, double rel_tol = 1e-13,
                           int max_panels = 4000);

}  // namespace radial
