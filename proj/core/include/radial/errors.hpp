#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace radial {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation (e.g. r <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed tabulated potential input. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// The channel cannot be handled in the requested boundary mode
/// (fall to the center under u(0)=0).
class UnsupportedChannelError : public Error {
 public:
  using Error::Error;
};

/// The requested admixture is not square integrable at the origin.
class NonNormalizableError : public Error {
 public:
  using Error::Error;
};

/// L2-only boundary data was requested for a channel that admits no second
/// square-integrable branch.
class ModeUnavailableError : public Error {
 public:
  using Error::Error;
};

/// The trial energy is not classically forbidden at r_max.
class RMaxTooSmallError : public Error {
 public:
  RMaxTooSmallError(const std::string& what, double suggested_r_max)
      : Error(what), suggested_r_max_(suggested_r_max) {}
  double suggested_r_max() const noexcept { return suggested_r_max_; }

 private:
  double suggested_r_max_;
};

/// The potential does not support the requested bound state.
class NoSuchStateError : public Error {
 public:
  using Error::Error;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double lo, double hi)
      : Error(what), lo_(lo), hi_(hi) {}
  std::pair<double, double> last_bracket() const noexcept { return {lo_, hi_}; }

 private:
  double lo_;
  double hi_;
};

/// Quadrature could not reach the requested accuracy.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// The innermost samples do not follow a power law, so u(0) is undefined.
class ExtrapolationError : public Error {
 public:
  using Error::Error;
};

}  // namespace radial
