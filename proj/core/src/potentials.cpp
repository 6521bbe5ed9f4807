#include "radial/potentials.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
// Boost 1.74's pchip calls isnan unqualified.
#include <math.h>
#include <boost/math/interpolators/pchip.hpp>

#include "radial/errors.hpp"

namespace radial {

namespace detail {
struct MonotoneCubic {
  boost::math::interpolators::pchip<std::vector<double>> spline;
};
}  // namespace detail

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

OriginCoefficients fit_origin(std::span<const double> r, std::span<const double> v, int window) {
  if (r.size() != v.size()) throw DomainError("fit_origin: r and V differ in length");
  if (r.size() < 4) throw InsufficientDataError("origin fit needs at least 4 samples");
  if (window < 3) throw DomainError("origin fit window must be at least 3");
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(window), r.size());

  // Columns are rescaled by the outermost abscissa of the window so the
  // 1/r^2 column does not swamp the others.
  const double s = r[k - 1];
  Eigen::MatrixXd a(k, 3);
  Eigen::VectorXd b(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double q = s / r[i];
    a(i, 0) = q * q;
    a(i, 1) = q;
    a(i, 2) = 1.0;
    b(i) = v[i];
  }
  const Eigen::Vector3d x = a.colPivHouseholderQr().solve(b);
  return {x(0) * s * s, x(1) * s, x(2)};
}

Tabulated::Tabulated(std::vector<double> r, std::vector<double> v, int origin_window)
    : r_(std::move(r)), v_(std::move(v)) {
  if (r_.size() != v_.size()) throw DomainError("tabulated potential: column length mismatch");
  if (r_.size() < 4) throw InsufficientDataError("tabulated potential needs at least 4 samples");
  for (std::size_t i = 0; i < r_.size(); ++i) {
    if (!std::isfinite(r_[i]) || !std::isfinite(v_[i]))
      throw DomainError("tabulated potential: non-finite sample");
    if (r_[i] <= 0.0) throw DomainError("tabulated potential: r must be positive");
    if (i > 0 && !(r_[i] > r_[i - 1]))
      throw DomainError("tabulated potential: r must be strictly increasing");
  }

  origin_ = fit_origin(r_, v_, origin_window);

  const std::size_t n = r_.size();
  const std::size_t outer = std::max<std::size_t>(2, n / 10);
  double num = 0.0, den = 0.0;
  for (std::size_t i = n - outer; i < n; ++i) {
    num += v_[i] / r_[i];
    den += 1.0 / (r_[i] * r_[i]);
  }
  tail_c_ = num / den;

  // Confining: the outer samples rise and are not described by c/r.
  bool increasing = true;
  for (std::size_t i = n - outer + 1; i < n; ++i) increasing = increasing && v_[i] > v_[i - 1];
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = n - outer; i < n; ++i) {
    worst = std::max(worst, std::abs(v_[i] - tail_c_ / r_[i]));
    scale = std::max(scale, std::abs(v_[i]));
  }
  tail_ = increasing && worst > 1e-2 * scale ? TailKind::confining : TailKind::decaying;

  interp_ = std::make_shared<const detail::MonotoneCubic>(
      detail::MonotoneCubic{boost::math::interpolators::pchip<std::vector<double>>(
          std::vector<double>(r_), std::vector<double>(v_))});
  tail_slope_ = interp_->spline.prime(r_.back());
}

double Tabulated::evaluate(double r) const {
  if (r < r_.front()) return origin_.c2 / (r * r) + origin_.c1 / r + origin_.c0;
  if (r > r_.back()) {
    if (tail_ == TailKind::confining) return v_.back() + tail_slope_ * (r - r_.back());
    return tail_c_ / r;
  }
  // Exact at the abscissae, independent of the spline's rounding.
  const auto it = std::lower_bound(r_.begin(), r_.end(), r);
  if (it != r_.end() && *it == r) return v_[static_cast<std::size_t>(it - r_.begin())];
  return interp_->spline(r);
}

PotentialSpec::PotentialSpec(SumOf sum) {
  SumOf flat;
  const Tabulated* table = nullptr;
  auto add = [&](auto&& self, const PotentialSpec& p) -> void {
    if (const auto* s = std::get_if<SumOf>(&p.variant())) {
      for (const auto& t : s->terms) self(self, t);
      return;
    }
    if (const auto* t = std::get_if<Tabulated>(&p.variant())) {
      if (table && !table->same_grid(*t))
        throw DomainError("sum contains tabulated terms on conflicting grids");
      table = t;
    }
    flat.terms.push_back(p);
  };
  for (const auto& t : sum.terms) add(add, t);
  if (flat.terms.empty()) throw DomainError("sum of potentials must not be empty");
  v_ = std::move(flat);
}

std::string PotentialSpec::describe() const {
  return std::visit(
      overloaded{
          [](const Coulomb& c) { return "coulomb:Z=" + fmt_num(c.Z); },
          [](const Harmonic& h) { return "harmonic:omega=" + fmt_num(h.omega); },
          [](const InverseSquare& s) { return "invsq:alpha=" + fmt_num(s.alpha); },
          [](const Tabulated& t) {
            return "tabulated:samples=" + std::to_string(t.r().size());
          },
          [](const SumOf& s) {
            std::string out;
            for (const auto& t : s.terms) {
              if (!out.empty()) out += "+";
              out += t.describe();
            }
            return out;
          },
      },
      v_);
}

double evaluate(const PotentialSpec& spec, double r, double mass) {
  if (!(r > 0.0)) throw DomainError("potential evaluated at non-positive r");
  return std::visit(overloaded{
                        [&](const Coulomb& c) { return -c.Z / r; },
                        [&](const Harmonic& h) { return 0.5 * mass * h.omega * h.omega * r * r; },
                        [&](const InverseSquare& s) { return s.alpha / (r * r); },
                        [&](const Tabulated& t) { return t.evaluate(r); },
                        [&](const SumOf& s) {
                          double acc = 0.0;
                          for (const auto& t : s.terms) acc += evaluate(t, r, mass);
                          return acc;
                        },
                    },
                    spec.variant());
}

OriginCoefficients origin_coefficients(const PotentialSpec& spec) {
  return std::visit(overloaded{
                        [](const Coulomb& c) { return OriginCoefficients{0.0, -c.Z, 0.0}; },
                        [](const Harmonic&) { return OriginCoefficients{}; },
                        [](const InverseSquare& s) { return OriginCoefficients{s.alpha, 0.0, 0.0}; },
                        [](const Tabulated& t) { return t.origin_fit(); },
                        [](const SumOf& s) {
                          OriginCoefficients acc;
                          for (const auto& t : s.terms) {
                            const auto c = origin_coefficients(t);
                            acc.c2 += c.c2;
                            acc.c1 += c.c1;
                            acc.c0 += c.c0;
                          }
                          return acc;
                        },
                    },
                    spec.variant());
}

TailKind tail_kind(const PotentialSpec& spec) {
  return std::visit(overloaded{
                        [](const Harmonic& h) {
                          return h.omega != 0.0 ? TailKind::confining : TailKind::decaying;
                        },
                        [](const Tabulated& t) { return t.tail_fit(); },
                        [](const SumOf& s) {
                          for (const auto& t : s.terms)
                            if (tail_kind(t) == TailKind::confining) return TailKind::confining;
                          return TailKind::decaying;
                        },
                        [](const auto&) { return TailKind::decaying; },
                    },
                    spec.variant());
}

PotentialSpec load_tabulated(std::istream& in, int origin_window) {
  std::vector<double> r, v;
  std::string line;
  std::size_t lineno = 0;
  auto parse_field = [&](const std::string& text, const char* what) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(text, &pos);
    } catch (const std::exception&) {
      throw ParseError(lineno, std::string("cannot parse ") + what + " '" + text + "'");
    }
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size())
      throw ParseError(lineno, std::string("trailing characters in ") + what + " '" + text + "'");
    if (!std::isfinite(x)) throw ParseError(lineno, std::string("non-finite ") + what);
    return x;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw ParseError(lineno, "expected two comma-separated columns");
    const double rv = parse_field(line.substr(0, comma), "r");
    const double vv = parse_field(line.substr(comma + 1), "V");
    if (rv <= 0.0) throw ParseError(lineno, "r must be positive");
    if (!r.empty() && !(rv > r.back())) throw ParseError(lineno, "r column is not strictly increasing");
    r.push_back(rv);
    v.push_back(vv);
  }
  if (r.size() < 4)
    throw ParseError(lineno == 0 ? 1 : lineno, "need at least 4 data rows, found " + std::to_string(r.size()));
  return PotentialSpec(Tabulated(std::move(r), std::move(v), origin_window));
}

}  // namespace radial
