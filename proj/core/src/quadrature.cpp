#include "radial/quadrature.hpp"

#include <array>
#include <cmath>
#include <algorithm>
#include <vector>

#include "radial/errors.hpp"

namespace radial {

namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes.
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = kKronrod[7] * fc;
  double g = kGauss[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kNodes[static_cast<std::size_t>(j)];
    const double s = f(c - dx) + f(c + dx);
    k += kKronrod[static_cast<std::size_t>(j)] * s;
    if (j % 2 == 1) g += kGauss[static_cast<std::size_t>(j / 2)] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double rel_tol, int max_panels) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(b > a))
    throw DomainError("integration interval must be finite with b > a");
  std::vector<Panel> panels;
  constexpr int kInitial = 8;
  QuadratureResult res;
  const double width = (b - a) / kInitial;
  for (int i = 0; i < kInitial; ++i) {
    const double lo = a + i * width;
    const double hi = i + 1 == kInitial ? b : a + (i + 1) * width;
    const Panel p = gk15(f, lo, hi);
    res.value += p.value;
    res.error += p.error;
    panels.push_back(p);
  }
  std::make_heap(panels.begin(), panels.end());
  res.evaluations = 15 * kInitial;

  while (static_cast<int>(panels.size()) < max_panels &&
         res.error > std::max(abs_tol, rel_tol * std::abs(res.value))) {
    std::pop_heap(panels.begin(), panels.end());
    const Panel worst = panels.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      std::push_heap(panels.begin(), panels.end());
      break;
    }
    panels.pop_back();
    const Panel l = gk15(f, worst.a, mid);
    const Panel r = gk15(f, mid, worst.b);
    res.evaluations += 30;
    panels.push_back(l);
    std::push_heap(panels.begin(), panels.end());
    panels.push_back(r);
    std::push_heap(panels.begin(), panels.end());
    // Re-sum to keep cancellation out of the running totals.
    res.value = 0.0;
    res.error = 0.0;
    for (const auto& p : panels) {
      res.value += p.value;
      res.error += p.error;
    }
  }
  if (!std::isfinite(res.value)) throw PrecisionError("integrand produced a non-finite value");
  return res;
}

}  // namespace radial
