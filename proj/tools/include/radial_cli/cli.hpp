#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "radial/eigensolver.hpp"
#include "radial/errors.hpp"

namespace radial::cli {

enum class Format { json, csv };

/// Malformed command-line value (potential, mode, grid, number).
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string potential = "coulomb:Z=1";
  int l = 0;
  double mass = 1.0;
  std::string grid = "log";
  int points = 20000;
  double r_min = 1e-6;
  double r_max = 80.0;
  std::string mode = "u0";
  double tol_E = 1e-10;
  double mismatch_tol = 1e-8;
  double compat_tol = kCompatTolDefault;
  Format format = Format::json;

  static constexpr double kCompatTolDefault = 1e-6;
};

/// Potential mini-language: `name:key=val,...` terms joined by `+`, e.g.
/// `coulomb:Z=1+invsq:c=0.1`. Terms: coulomb:Z, harmonic:omega,
/// invsq:c (= 2 m alpha) or invsq:alpha, free, file:PATH.
/// Throws UsageError on malformed input and ParseError for bad files.
PotentialSpec parse_potential(const std::string& text, double mass);

/// `u0` or `l2:theta=X[,r0=Y]`.
BoundaryMode parse_mode(const std::string& text);

GridScheme parse_grid(const std::string& text);

RadialProblem make_problem(const RunConfig& cfg);
SolverOptions solver_options(const RunConfig& cfg);

/// JSON with fixed key order, two-space indentation and doubles printed
/// as %.17g; non-finite numbers become null.
std::string to_json(const nlohmann::ordered_json& j);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
std::string csv_number(double x);

/// Entry point. Writes the report to `out`, one diagnostic line to `err` on
/// failure. Exit codes: 0 success, 2 no such bound state, 1 any other error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace radial::cli
