#include "radial_cli/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "radial/delta_consistency.hpp"
#include "radial/oracle.hpp"

namespace radial::cli {

namespace {

using nlohmann::ordered_json;

double parse_number(const std::string& s, const std::string& what) {
  double x = 0.0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, x);
  if (s.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(x))
    throw UsageError("invalid number '" + s + "' for " + what);
  return x;
}

std::vector<std::string> split_terms(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    // '+' only separates terms when a name follows; 1e+5 stays intact.
    if (c == '+' && i + 1 < text.size() && std::isalpha(static_cast<unsigned char>(text[i + 1])) &&
        cur.rfind("file:", 0) != 0) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  out.push_back(cur);
  return out;
}

std::map<std::string, std::string> parse_params(const std::string& body, const std::string& term) {
  std::map<std::string, std::string> kv;
  if (body.empty()) return kv;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("expected key=value in '" + term + "'");
    if (!kv.emplace(item.substr(0, eq), item.substr(eq + 1)).second)
      throw UsageError("duplicate key in '" + term + "'");
  }
  return kv;
}

PotentialSpec parse_term(const std::string& term, double mass) {
  const auto colon = term.find(':');
  const std::string name = term.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : term.substr(colon + 1);
  if (name == "file") {
    if (body.empty()) throw UsageError("file: needs a path");
    std::ifstream in(body);
    if (!in) throw UsageError("cannot open potential file '" + body + "'");
    return load_tabulated(in);
  }
  auto kv = parse_params(body, term);
  auto take = [&](const std::string& key) -> std::optional<double> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    const double x = parse_number(it->second, name + ":" + key);
    kv.erase(it);
    return x;
  };
  std::optional<PotentialSpec> spec;
  if (name == "coulomb") {
    spec = Coulomb{take("Z").value_or(1.0)};
  } else if (name == "harmonic") {
    spec = Harmonic{take("omega").value_or(1.0)};
  } else if (name == "invsq") {
    const auto c = take("c");
    const auto alpha = take("alpha");
    if (c && alpha) throw UsageError("invsq takes c or alpha, not both");
    if (!c && !alpha) throw UsageError("invsq needs c (= 2 m alpha) or alpha");
    spec = InverseSquare{alpha ? *alpha : *c / (2.0 * mass)};
  } else if (name == "free") {
    spec = InverseSquare{0.0};
  } else {
    throw UsageError("unknown potential '" + name +
                     "' (expected coulomb, harmonic, invsq, free or file)");
  }
  if (!kv.empty()) throw UsageError("unknown key '" + kv.begin()->first + "' for " + name);
  return *spec;
}

// ---- JSON ----------------------------------------------------------------

std::string fmt_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_json(const ordered_json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ordered_json(k).dump() + ": ";
        write_json(v, out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_json(j[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case ordered_json::value_t::number_float:
      out += fmt_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

ordered_json num_or_null(std::optional<double> x) {
  return x && std::isfinite(*x) ? ordered_json(*x) : ordered_json(nullptr);
}

// ---- reports ---------------------------------------------------------------

ordered_json mode_json(const BoundaryMode& mode) {
  ordered_json j;
  if (const auto* l2 = std::get_if<L2Only>(&mode)) {
    j["kind"] = "l2";
    j["theta"] = l2->theta;
    j["r0"] = l2->r0;
  } else {
    j["kind"] = "u0";
  }
  return j;
}

ordered_json problem_json(const RunConfig& cfg, const RadialProblem& p) {
  ordered_json j;
  j["potential"] = cfg.potential;
  j["l"] = cfg.l;
  j["mass"] = cfg.mass;
  ordered_json g;
  g["scheme"] = p.grid().scheme() == GridScheme::log_uniform ? "log" : "uniform";
  g["points"] = p.grid().size();
  g["r_min"] = p.grid().r_min();
  g["r_max"] = p.grid().r_max();
  j["grid"] = g;
  j["mode"] = mode_json(p.mode());
  return j;
}

struct Emitter {
  const RunConfig& cfg;
  std::ostream& out;

  void json(const ordered_json& j) const {
    std::string s;
    write_json(j, s, 0);
    out << s << "\n";
  }

  void csv(const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) const {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
      out << "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

std::string csv_bool(bool b) { return b ? "true" : "false"; }
std::string csv_opt(std::optional<double> x) { return x ? csv_number(*x) : ""; }

// Reports are built fully before anything is written, so a failure never
// leaves partial output behind.
std::string render(const RunConfig& cfg, const ordered_json& j,
                   const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream ss;
  Emitter e{cfg, ss};
  if (cfg.format == Format::json)
    e.json(j);
  else
    e.csv(header, rows);
  return ss.str();
}

std::string cmd_solve(const RunConfig& cfg, int n) {
  const auto problem = make_problem(cfg);
  const auto res = solve_state(problem, n, solver_options(cfg));
  const auto verdict = check_compatibility(problem, res, cfg.compat_tol);
  const double slope = origin_log_slope(res.solution);

  ordered_json r;
  r["E"] = res.E;
  r["n"] = res.n_radial;
  r["nodes"] = res.solution.nodes;
  r["mismatch"] = res.mismatch_residual;
  r["iterations"] = res.iterations;
  r["origin_slope"] = slope;
  r["compatible"] = verdict.compatible;
  r["defect"] = num_or_null(verdict.defect);
  r["u0"] = num_or_null(verdict.origin.divergent ? std::nullopt
                                                 : std::optional<double>(verdict.origin.u0));
  r["divergent"] = verdict.origin.divergent;
  r["width"] = verdict.width;
  ordered_json j;
  j["schema"] = 1;
  j["problem"] = problem_json(cfg, problem);
  j["result"] = r;
  return render(cfg, j,
                {"n", "E", "nodes", "mismatch", "origin_slope", "compatible", "defect"},
                {{std::to_string(n), csv_number(res.E), std::to_string(res.solution.nodes),
                  csv_number(res.mismatch_residual), csv_number(slope),
                  csv_bool(verdict.compatible), csv_opt(verdict.defect)}});
}

std::string cmd_spectrum(const RunConfig& cfg, int n_max) {
  const auto problem = make_problem(cfg);
  const auto states = spectrum(problem, n_max, solver_options(cfg));
  ordered_json arr = ordered_json::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : states) {
    ordered_json e;
    e["n"] = s.n_radial;
    e["E"] = s.E;
    e["nodes"] = s.solution.nodes;
    e["mismatch"] = s.mismatch_residual;
    e["origin_slope"] = origin_log_slope(s.solution);
    rows.push_back({std::to_string(s.n_radial), csv_number(s.E), std::to_string(s.solution.nodes),
                    csv_number(s.mismatch_residual), csv_number(e["origin_slope"].get<double>())});
    arr.push_back(e);
  }
  ordered_json j;
  j["schema"] = 1;
  j["problem"] = problem_json(cfg, problem);
  j["states"] = arr;
  return render(cfg, j, {"n", "E", "nodes", "mismatch", "origin_slope"}, rows);
}

std::string cmd_indicial(const RunConfig& cfg) {
  Channel ch{cfg.l, cfg.mass};
  validate(ch);
  const auto spec = parse_potential(cfg.potential, cfg.mass);
  const auto rep = indicial(ch, origin_coefficients(spec));
  const auto mode = parse_mode(cfg.mode);
  ordered_json j;
  j["schema"] = 1;
  ordered_json p;
  p["potential"] = cfg.potential;
  p["l"] = cfg.l;
  p["mass"] = cfg.mass;
  p["mode"] = mode_json(mode);
  j["problem"] = p;
  ordered_json r;
  r["lambda_eff"] = rep.lambda_eff;
  r["discriminant"] = rep.discriminant;
  r["s_plus"] = num_or_null(rep.s_plus);
  r["s_minus"] = num_or_null(rep.s_minus);
  r["classification"] = std::string(to_string(rep.classification));
  std::vector<std::string> exps;
  if (rep.classification == Singularity::fall_to_center) {
    r["complex"] = {{"re", rep.complex_re}, {"im", rep.complex_im}};
    r["ambiguity"] = false;
    r["admissible"] = ordered_json::array();
  } else {
    const auto adm = admissible(rep, mode);
    r["complex"] = nullptr;
    r["ambiguity"] = adm.ambiguity;
    r["admissible"] = adm.exponents;
    for (double e : adm.exponents) exps.push_back(csv_number(e));
  }
  r["irregular_branch_l2"] = admits_irregular_branch(rep);
  j["indicial"] = r;
  std::string joined;
  for (const auto& e : exps) joined += (joined.empty() ? "" : ";") + e;
  return render(cfg, j,
                {"lambda_eff", "s_plus", "s_minus", "classification", "ambiguity", "admissible"},
                {{csv_number(rep.lambda_eff), csv_opt(rep.s_plus), csv_opt(rep.s_minus),
                  std::string(to_string(rep.classification)),
                  csv_bool(r["ambiguity"].get<bool>()), joined}});
}

std::string cmd_delta_trial(const RunConfig& cfg, const std::string& trial,
                            const std::vector<double>& widths) {
  const auto t = builtin_trial(trial);
  const auto rep = defect_report(t, widths);
  ordered_json j;
  j["schema"] = 1;
  j["trial"] = trial;
  j["u0"] = t.u0;
  j["reference"] = rep.reference;
  j["max_abs_error"] = rep.max_abs_error;
  ordered_json arr = ordered_json::array();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < rep.widths.size(); ++i) {
    arr.push_back({{"w", rep.widths[i]}, {"defect", rep.defects[i]}});
    rows.push_back({trial, csv_number(rep.widths[i]), csv_number(rep.defects[i]),
                    csv_number(rep.reference)});
  }
  j["widths"] = arr;
  return render(cfg, j, {"trial", "w", "defect", "reference"}, rows);
}

std::string cmd_delta_state(const RunConfig& cfg, int n, std::optional<double> width) {
  const auto problem = make_problem(cfg);
  const auto res = solve_state(problem, n, solver_options(cfg));
  const auto v = check_compatibility(problem, res, cfg.compat_tol, width);
  ordered_json j;
  j["schema"] = 1;
  j["problem"] = problem_json(cfg, problem);
  j["state"] = {{"n", n}, {"E", res.E}};
  ordered_json vj;
  vj["compatible"] = v.compatible;
  vj["defect"] = num_or_null(v.defect);
  vj["u0"] = num_or_null(v.origin.divergent ? std::nullopt : std::optional<double>(v.origin.u0));
  vj["exponent"] = v.origin.exponent;
  vj["divergent"] = v.origin.divergent;
  vj["width"] = v.width;
  vj["tolerance"] = cfg.compat_tol;
  j["verdict"] = vj;
  return render(cfg, j, {"n", "E", "compatible", "defect", "exponent", "divergent", "width"},
                {{std::to_string(n), csv_number(res.E), csv_bool(v.compatible), csv_opt(v.defect),
                  csv_number(v.origin.exponent), csv_bool(v.origin.divergent),
                  csv_number(v.width)}});
}

std::string cmd_compare(const RunConfig& cfg, const std::vector<double>& thetas, int n_max) {
  const auto problem = make_problem(cfg).with_mode(U0Strict{});
  const auto opts = solver_options(cfg);
  const double r0 = [&] {
    const auto m = parse_mode(cfg.mode);
    const auto* l2 = std::get_if<L2Only>(&m);
    return l2 ? l2->r0 : 1.0;
  }();

  ordered_json arr = ordered_json::array();
  std::vector<std::vector<std::string>> rows;
  auto add = [&](const RadialProblem& p, const std::string& mode, std::optional<double> theta,
                 const std::vector<EigenvalueResult>& states) {
    for (const auto& s : states) {
      const auto v = check_compatibility(p, s, cfg.compat_tol);
      ordered_json row;
      row["mode"] = mode;
      row["theta"] = num_or_null(theta);
      row["n"] = s.n_radial;
      row["E"] = s.E;
      row["u0_defect"] = num_or_null(v.defect);
      row["compatible"] = v.compatible;
      arr.push_back(row);
      rows.push_back({mode, csv_opt(theta), std::to_string(s.n_radial), csv_number(s.E),
                      csv_opt(v.defect), csv_bool(v.compatible)});
    }
  };
  add(problem, "u0", std::nullopt, spectrum(problem, n_max, opts));
  const auto scan = sae_scan(problem.with_mode(L2Only{0.0, r0}), thetas, n_max, opts);
  for (const auto& row : scan)
    add(problem.with_mode(L2Only{row.theta, r0}), "l2", row.theta, row.states);

  ordered_json j;
  j["schema"] = 1;
  j["problem"] = problem_json(cfg, problem);
  j["rows"] = arr;
  return render(cfg, j, {"mode", "theta", "n", "E", "u0_defect", "compatible"}, rows);
}

std::string cmd_oracle(const RunConfig& cfg, int k) {
  const auto base = make_problem(cfg);
  const auto problem = base.with_grid(oracle_grid(cfg.r_max, cfg.points, cfg.l));
  const auto values = fd_spectrum(problem, k);
  ordered_json j;
  j["schema"] = 1;
  j["problem"] = problem_json(cfg, problem);
  j["h"] = problem.grid().step();
  j["eigenvalues"] = values;
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < values.size(); ++i)
    rows.push_back({std::to_string(i), csv_number(values[i])});
  return render(cfg, j, {"index", "E"}, rows);
}

void add_common(CLI::App* app, RunConfig& cfg, std::string& format) {
  app->add_option("--potential", cfg.potential, "Potential, e.g. coulomb:Z=1+invsq:c=0.1")
      ->capture_default_str();
  app->add_option("--l", cfg.l, "Orbital quantum number")->capture_default_str();
  app->add_option("--mass", cfg.mass, "Particle mass")->capture_default_str();
  app->add_option("--grid", cfg.grid, "Grid scheme: log or uniform")->capture_default_str();
  app->add_option("--points", cfg.points, "Grid points")->capture_default_str();
  app->add_option("--r-min", cfg.r_min, "Innermost radius")->capture_default_str();
  app->add_option("--r-max", cfg.r_max, "Outermost radius")->capture_default_str();
  app->add_option("--mode", cfg.mode, "Boundary mode: u0 or l2:theta=X[,r0=Y]")
      ->capture_default_str();
  app->add_option("--tol-e", cfg.tol_E, "Energy tolerance")->capture_default_str();
  app->add_option("--mismatch-tol", cfg.mismatch_tol, "Matching tolerance")
      ->capture_default_str();
  app->add_option("--compat-tol", cfg.compat_tol, "Delta-defect tolerance")
      ->capture_default_str();
  app->add_option("--format", format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

PotentialSpec parse_potential(const std::string& text, double mass) {
  if (text.empty()) throw UsageError("empty potential");
  if (!(mass > 0.0)) throw UsageError("mass must be positive");
  std::vector<PotentialSpec> terms;
  for (const auto& t : split_terms(text)) {
    if (t.empty()) throw UsageError("empty term in potential '" + text + "'");
    terms.push_back(parse_term(t, mass));
  }
  if (terms.size() == 1) return terms.front();
  return SumOf{std::move(terms)};
}

BoundaryMode parse_mode(const std::string& text) {
  if (text == "u0") return U0Strict{};
  if (text.rfind("l2", 0) == 0) {
    L2Only m;
    if (text.size() > 2) {
      if (text[2] != ':') throw UsageError("expected l2:theta=X[,r0=Y], got '" + text + "'");
      auto kv = parse_params(text.substr(3), text);
      for (const auto& [k, v] : kv) {
        if (k == "theta")
          m.theta = parse_number(v, "theta");
        else if (k == "r0")
          m.r0 = parse_number(v, "r0");
        else
          throw UsageError("unknown mode key '" + k + "'");
      }
    }
    validate(BoundaryMode{m});
    return m;
  }
  throw UsageError("unknown mode '" + text + "' (expected u0 or l2:theta=X)");
}

GridScheme parse_grid(const std::string& text) {
  if (text == "log") return GridScheme::log_uniform;
  if (text == "uniform") return GridScheme::uniform;
  throw UsageError("unknown grid '" + text + "' (expected log or uniform)");
}

RadialProblem make_problem(const RunConfig& cfg) {
  Channel ch{cfg.l, cfg.mass};
  validate(ch);
  return RadialProblem(ch, parse_potential(cfg.potential, cfg.mass), parse_mode(cfg.mode),
                       RadialGrid(parse_grid(cfg.grid), cfg.r_min, cfg.r_max, cfg.points));
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions o;
  o.tol_E = cfg.tol_E;
  o.mismatch_tol = cfg.mismatch_tol;
  return o;
}

std::string to_json(const ordered_json& j) {
  std::string s;
  write_json(j, s, 0);
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double x) { return std::isfinite(x) ? fmt_double(x) : ""; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial Schroedinger bound states with explicit origin boundary conditions",
               "radial"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "json";
  int n = 0;
  int n_max = 2;
  int k = 3;
  std::string trial;
  std::vector<double> widths{0.1, 0.5, 1.0, 2.0};
  std::vector<double> thetas{0.5, 1.0, 2.0};
  std::optional<double> width;

  auto* solve = app.add_subcommand("solve", "Solve for one bound state");
  add_common(solve, cfg, format);
  solve->add_option("--n", n, "Radial quantum number (node count)")->capture_default_str();

  auto* spec = app.add_subcommand("spectrum", "Bound states n = 0..n-max");
  add_common(spec, cfg, format);
  spec->add_option("--n-max", n_max, "Highest radial quantum number")->capture_default_str();

  auto* ind = app.add_subcommand("indicial", "Indicial exponents at the origin");
  add_common(ind, cfg, format);

  auto* delta = app.add_subcommand("delta-check", "Weak-form delta defect of a trial or a state");
  add_common(delta, cfg, format);
  delta->add_option("--trial", trial, "Builtin trial: exp, rexp, polyexp, const");
  delta->add_option("--widths", widths, "Test widths for --trial")->delimiter(',');
  delta->add_option("--n", n, "State to check when no trial is given");
  delta->add_option("--width", width, "Test width for a state (default: median grid radius)");

  auto* cmp = app.add_subcommand("compare", "u(0)=0 spectrum against L2-only spectra");
  add_common(cmp, cfg, format);
  cmp->add_option("--thetas", thetas, "Comma-separated theta values")->delimiter(',');
  cmp->add_option("--n-max", n_max, "Highest radial quantum number")->capture_default_str();

  auto* orc = app.add_subcommand("oracle", "Finite-difference eigenvalues on a uniform grid");
  add_common(orc, cfg, format);
  orc->add_option("--k", k, "Number of eigenvalues")->capture_default_str();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << first_line(e.what()) << "\n";
    return 1;
  }
  cfg.format = format == "csv" ? Format::csv : Format::json;

  try {
    std::string report;
    if (solve->parsed()) {
      report = cmd_solve(cfg, n);
    } else if (spec->parsed()) {
      report = cmd_spectrum(cfg, n_max);
    } else if (ind->parsed()) {
      report = cmd_indicial(cfg);
    } else if (delta->parsed()) {
      report = trial.empty() ? cmd_delta_state(cfg, n, width) : cmd_delta_trial(cfg, trial, widths);
    } else if (cmp->parsed()) {
      report = cmd_compare(cfg, thetas, n_max);
    } else {
      report = cmd_oracle(cfg, k);
    }
    out << report;
    return 0;
  } catch (const NoSuchStateError& e) {
    const std::string msg = first_line(e.what());
    err << (msg.rfind("no bound state", 0) == 0 ? "" : "no bound state: ") << msg << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << first_line(e.what()) << "\n";
    return 1;
  }
}

}  // namespace radial::cli
