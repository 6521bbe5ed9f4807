#pragma once

#include <istream>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace radial {

/// Leading behaviour of a potential at the origin:
/// V(r) = c2/r^2 + c1/r + c0 + o(1) as r -> 0.
struct OriginCoefficients {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  bool operator==(const OriginCoefficients&) const = default;
};

enum class TailKind { decaying, confining };

/// V(r) = -Z/r
struct Coulomb {
  double Z = 1.0;
};

/// V(r) = m omega^2 r^2 / 2 (the mass comes from the channel)
struct Harmonic {
  double omega = 1.0;
};

/// V(r) = alpha / r^2
struct InverseSquare {
  double alpha = 0.0;
};

inline constexpr int kDefaultOriginWindow = 8;

/// Least-squares fit of c2/r^2 + c1/r + c0 over the innermost `window`
/// samples.
OriginCoefficients fit_origin(std::span<const double> r, std::span<const double> v,
                              int window = kDefaultOriginWindow);

namespace detail {
struct MonotoneCubic;
}

/// Sampled potential. Interpolated with a shape-preserving piecewise cubic
/// inside the sample range, continued by the origin fit below the first
/// sample and by the tail fit above the last one.
class Tabulated {
 public:
  Tabulated(std::vector<double> r, std::vector<double> v,
            int origin_window = kDefaultOriginWindow);

  double evaluate(double r) const;

  std::span<const double> r() const { return r_; }
  std::span<const double> v() const { return v_; }
  const OriginCoefficients& origin_fit() const { return origin_; }
  TailKind tail_fit() const { return tail_; }
  /// Coefficient c of the c/r continuation used for decaying tails.
  double tail_coefficient() const { return tail_c_; }

  bool same_grid(const Tabulated& other) const { return r_ == other.r_; }

 private:
  std::vector<double> r_;
  std::vector<double> v_;
  std::shared_ptr<const detail::MonotoneCubic> interp_;
  OriginCoefficients origin_;
  TailKind tail_ = TailKind::decaying;
  double tail_c_ = 0.0;
  double tail_slope_ = 0.0;
};

class PotentialSpec;

struct SumOf {
  std::vector<PotentialSpec> terms;
};

/// A central potential. Immutable after construction.
class PotentialSpec {
 public:
  using Variant = std::variant<Coulomb, Harmonic, InverseSquare, SumOf, Tabulated>;

  PotentialSpec(Coulomb c) : v_(c) {}
  PotentialSpec(Harmonic h) : v_(h) {}
  PotentialSpec(InverseSquare s) : v_(s) {}
  PotentialSpec(Tabulated t) : v_(std::move(t)) {}
  /// Nested sums are flattened. Throws DomainError for an empty sum or for
  /// tabulated terms sampled on different grids.
  PotentialSpec(SumOf sum);

  const Variant& variant() const { return v_; }

  /// Human-readable form in the `name:key=val` mini-language.
  std::string describe() const;

 private:
  Variant v_;
};

/// V(r). Throws DomainError for r <= 0.
double evaluate(const PotentialSpec& spec, double r, double mass = 1.0);

/// Exact for catalog variants, additive over sums, the stored fit for
/// tabulated data.
OriginCoefficients origin_coefficients(const PotentialSpec& spec);

/// Confining if any term grows without bound at large r.
TailKind tail_kind(const PotentialSpec& spec);

/// Reads the two-column `r,V` CSV format. Lines starting with `#` are
/// comments. Throws ParseError naming the offending line.
PotentialSpec load_tabulated(std::istream& in, int origin_window = kDefaultOriginWindow);

}  // namespace radial
