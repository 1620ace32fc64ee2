#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "slowdrive/carnot.hpp"

namespace slowdrive::cli {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Formatting helpers

// Shortest fixed format that round-trips doubles; non-finite values must
// never reach an output file.
inline std::string format_double(double v) {
  if (!std::isfinite(v))
    throw NumericalError("output formatting: non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

// RFC 4180 CSV with CRLF line endings. The resolved configuration is echoed
// as a leading comment block so every output file is self-describing.
class CsvBuilder {
 public:
  explicit CsvBuilder(const json& resolved_config) {
    std::istringstream lines(resolved_config.dump(2));
    std::string line;
    while (std::getline(lines, line)) os_ << "# " << line << "\r\n";
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os_ << ',';
      os_ << csv_escape(fields[i]);
    }
    os_ << "\r\n";
  }

  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

// ---------------------------------------------------------------------------
// Strict config access: every key must be known, every value well-typed.

inline void require_keys_known(const json& obj,
                               const std::set<std::string>& allowed,
                               const std::string& context) {
  if (!obj.is_object())
    throw ConfigError("config: '" + context + "' must be an object");
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw ConfigError("config: unknown key '" + item.key() + "' in " +
                        context);
}

inline double get_number(const json& obj, const std::string& key,
                         const std::string& context) {
  if (!obj.contains(key))
    throw ConfigError("config: missing key '" + key + "' in " + context);
  if (!obj[key].is_number())
    throw ConfigError("config: '" + key + "' in " + context +
                      " must be a number");
  return obj[key].get<double>();
}

inline double get_number_or(const json& obj, const std::string& key,
                            const std::string& context, double fallback) {
  return obj.contains(key) ? get_number(obj, key, context) : fallback;
}

inline int get_int_or(const json& obj, const std::string& key,
                      const std::string& context, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw ConfigError("config: '" + key + "' in " + context +
                      " must be an integer");
  return obj[key].get<int>();
}

inline std::string get_string(const json& obj, const std::string& key,
                              const std::string& context) {
  if (!obj.contains(key))
    throw ConfigError("config: missing key '" + key + "' in " + context);
  if (!obj[key].is_string())
    throw ConfigError("config: '" + key + "' in " + context +
                      " must be a string");
  return obj[key].get<std::string>();
}

inline std::string get_string_or(const json& obj, const std::string& key,
                                 const std::string& context,
                                 const std::string& fallback) {
  return obj.contains(key) ? get_string(obj, key, context) : fallback;
}

inline bool get_bool_or(const json& obj, const std::string& key,
                        const std::string& context, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean())
    throw ConfigError("config: '" + key + "' in " + context +
                      " must be a boolean");
  return obj[key].get<bool>();
}

// ---------------------------------------------------------------------------
// Schema blocks

inline BathSpec parse_bath(const json& cfg) {
  if (!cfg.contains("bath"))
    throw ConfigError("config: missing 'bath' block");
  const json& b = cfg["bath"];
  require_keys_known(b, {"beta", "gamma0", "alpha"}, "bath");
  BathSpec bath;
  bath.beta = get_number(b, "beta", "bath");
  bath.gamma0 = get_number(b, "gamma0", "bath");
  bath.alpha = get_number_or(b, "alpha", "bath", 0.0);
  bath.validate();
  return bath;
}

// Builds the protocol named by the config's "protocol" block. Supported
// shapes: "driven-qubit" (resonant bath, cosine drive of the gap), and the
// single-bath frequency ramps "cosine-ramp" and "constant".
inline Protocol parse_protocol(const json& cfg, const BathSpec& bath,
                               double tau) {
  if (!cfg.contains("protocol"))
    throw ConfigError("config: missing 'protocol' block");
  const json& pr = cfg["protocol"];
  const std::string shape = get_string(pr, "shape", "protocol");
  if (shape == "driven-qubit") {
    require_keys_known(pr, {"shape", "omega", "delta0"}, "protocol");
    return driven_qubit_protocol(get_number(pr, "omega", "protocol"),
                                 get_number(pr, "delta0", "protocol"), bath,
                                 tau);
  }
  if (shape == "cosine-ramp") {
    require_keys_known(pr, {"shape", "omega_start", "omega_end", "floor_frac"},
                       "protocol");
    const double w0 = get_number(pr, "omega_start", "protocol");
    const double w1 = get_number(pr, "omega_end", "protocol");
    if (!(w0 >= 0.0) || !(w1 >= 0.0))
      throw ConfigError("config: ramp frequencies must be >= 0");
    const double floor_frac =
        get_number_or(pr, "floor_frac", "protocol", 1e-6);
    constexpr double pi = std::numbers::pi;
    auto omega = [w0, w1](double t) {
      return w1 + (w0 - w1) * 0.5 * (1.0 + std::cos(pi * t));
    };
    auto omega_dot = [w0, w1](double t) {
      return -(w0 - w1) * 0.5 * pi * std::sin(pi * t);
    };
    return qubit_isotherm_protocol(omega, bath, tau, omega_dot, floor_frac);
  }
  if (shape == "constant") {
    require_keys_known(pr, {"shape", "omega"}, "protocol");
    const double w = get_number(pr, "omega", "protocol");
    if (!(w > 0.0))
      throw ConfigError("config: constant protocol needs omega > 0");
    return qubit_isotherm_protocol([w](double) { return w; }, bath, tau,
                                   [](double) { return 0.0; });
  }
  throw ConfigError("config: unknown protocol shape '" + shape +
                    "' (expected driven-qubit, cosine-ramp, constant)");
}

inline CarnotSpec parse_carnot(const json& cfg, bool needs_tc) {
  if (!cfg.contains("carnot"))
    throw ConfigError("config: missing 'carnot' block");
  const json& c = cfg["carnot"];
  require_keys_known(
      c, {"T_H", "T_C", "alpha", "gamma0", "omega0", "hot_shape"}, "carnot");
  CarnotSpec spec;
  spec.T_H = get_number(c, "T_H", "carnot");
  spec.T_C = needs_tc ? get_number(c, "T_C", "carnot")
                      : get_number_or(c, "T_C", "carnot", 0.5 * spec.T_H);
  spec.alpha = get_number_or(c, "alpha", "carnot", 0.0);
  spec.gamma0 = get_number_or(c, "gamma0", "carnot", 1.0);
  spec.omega0 = get_number(c, "omega0", "carnot");
  spec.hot_shape = get_string_or(c, "hot_shape", "carnot", "cosine");
  spec.validate();
  return spec;
}

inline json bath_json(const BathSpec& b) {
  return {{"beta", b.beta}, {"gamma0", b.gamma0}, {"alpha", b.alpha}};
}

inline json matrix_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k)
      row.push_back({M(i, k).real(), M(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Command handlers. Each returns the full output document as a string; the
// resolved configuration (defaults applied) is embedded in the document.

struct CommandOutput {
  std::string text;
  std::string warning;  // non-fatal notes for stderr
};

namespace detail {

inline json resolved_header(const json& cfg, const std::string& command) {
  json r;
  r["command"] = command;
  r["seed"] = get_int_or(cfg, "seed", "config", 0);  // recorded; all solvers
                                                     // are deterministic
  if (cfg.contains("output")) r["output"] = cfg["output"];
  return r;
}

inline void bloch_components(const Mat& rho, double& sx, double& sy,
                             double& sz) {
  sx = expectation(sigma_x(), rho);
  sy = expectation(sigma_y(), rho);
  sz = expectation(sigma_z(), rho);
}

}  // namespace detail

inline CommandOutput cmd_steady(const json& cfg) {
  require_keys_known(
      cfg, {"command", "output", "seed", "protocol", "bath", "t_prime"},
      "config");
  const BathSpec bath = parse_bath(cfg);
  const double tp = get_number_or(cfg, "t_prime", "config", 0.0);
  if (!(tp >= 0.0 && tp <= 1.0))
    throw ConfigError("config: t_prime must lie in [0, 1]");
  const Protocol p = parse_protocol(
      cfg, bath, std::numeric_limits<double>::quiet_NaN());

  const Mat rho = steady_state(p.liouvillian_at(tp));
  json resolved = detail::resolved_header(cfg, "steady");
  resolved["bath"] = bath_json(bath);
  resolved["protocol"] = cfg["protocol"];
  resolved["t_prime"] = tp;

  json doc;
  doc["resolved_config"] = resolved;
  json result;
  result["t_prime"] = tp;
  result["rho"] = matrix_json(rho);
  double sx, sy, sz;
  detail::bloch_components(rho, sx, sy, sz);
  result["bloch"] = {{"sx", sx}, {"sy", sy}, {"sz", sz}};
  result["purity"] = std::real((rho * rho).trace());
  doc["result"] = result;
  return {doc.dump(2) + "\n", ""};
}

namespace detail {

inline Mat initial_state_of(const std::string& name, const Protocol& p) {
  if (name == "maximally-mixed")
    return Mat(Mat::Identity(p.dim, p.dim)) / static_cast<double>(p.dim);
  if (name == "steady") return slowdrive::detail::steady_of(p, 0.0);
  throw ConfigError(
      "config: initial_state must be 'maximally-mixed' or 'steady'");
}

}  // namespace detail

inline CommandOutput cmd_evolve(const json& cfg) {
  require_keys_known(cfg,
                     {"command", "output", "seed", "protocol", "bath", "tau",
                      "tolerance", "grid_points", "initial_state"},
                     "config");
  const BathSpec bath = parse_bath(cfg);
  const double tau = get_number(cfg, "tau", "config");
  const double tol = get_number_or(cfg, "tolerance", "config", 1e-10);
  const int n_grid = get_int_or(cfg, "grid_points", "config", 201);
  if (n_grid < 2) throw ConfigError("config: grid_points >= 2 required");
  const std::string init =
      get_string_or(cfg, "initial_state", "config", "maximally-mixed");
  const Protocol p = parse_protocol(cfg, bath, tau);
  const Mat rho0 = detail::initial_state_of(init, p);

  const Trajectory traj = integrate(p, rho0, tol);

  json resolved = detail::resolved_header(cfg, "evolve");
  resolved["bath"] = bath_json(bath);
  resolved["protocol"] = cfg["protocol"];
  resolved["tau"] = tau;
  resolved["tolerance"] = tol;
  resolved["grid_points"] = n_grid;
  resolved["initial_state"] = init;

  CsvBuilder csv(resolved);
  csv.row({"t_prime", "t", "sx", "sy", "sz"});
  for (int k = 0; k < n_grid; ++k) {
    const double tp = static_cast<double>(k) / (n_grid - 1);
    const Mat rho = traj.state_at(tp * tau);
    double sx, sy, sz;
    detail::bloch_components(rho, sx, sy, sz);
    csv.row({format_double(tp), format_double(tp * tau), format_double(sx),
             format_double(sy), format_double(sz)});
  }
  return {csv.str(), ""};
}

inline CommandOutput cmd_perturb(const json& cfg) {
  require_keys_known(cfg,
                     {"command", "output", "seed", "protocol", "bath", "tau",
                      "order", "tolerance", "grid_points", "initial_state"},
                     "config");
  const BathSpec bath = parse_bath(cfg);
  const double tau = get_number(cfg, "tau", "config");
  const double tol = get_number_or(cfg, "tolerance", "config", 1e-10);
  const int J = get_int_or(cfg, "order", "config", 2);
  if (J < 0 || J > 4)
    throw ConfigError("config: order must lie in [0, 4]");
  const int n_grid = get_int_or(cfg, "grid_points", "config", 201);
  if (n_grid < 2) throw ConfigError("config: grid_points >= 2 required");
  const std::string init =
      get_string_or(cfg, "initial_state", "config", "maximally-mixed");
  const Protocol p = parse_protocol(cfg, bath, tau);
  const Mat rho_init = detail::initial_state_of(init, p);

  const Trajectory traj = integrate(p, rho_init, tol);

  json resolved = detail::resolved_header(cfg, "perturb");
  resolved["bath"] = bath_json(bath);
  resolved["protocol"] = cfg["protocol"];
  resolved["tau"] = tau;
  resolved["order"] = J;
  resolved["tolerance"] = tol;
  resolved["grid_points"] = n_grid;
  resolved["initial_state"] = init;

  CsvBuilder csv(resolved);
  std::vector<std::string> head{"t_prime", "sz_exact"};
  for (int j = 0; j <= J; ++j) head.push_back("sz_ord" + std::to_string(j));
  head.push_back("sy_exact");
  for (int j = 0; j <= J; ++j) head.push_back("sy_ord" + std::to_string(j));
  csv.row(head);

  int positivity_violations = 0;
  for (int k = 0; k < n_grid; ++k) {
    const double tp = static_cast<double>(k) / (n_grid - 1);
    const Mat rho_ex = traj.state_at(tp * tau);
    const PerturbativeState terms = perturbation_terms(p, tp, J);
    std::vector<std::string> sz_cells, sy_cells;
    Mat acc = Mat::Zero(p.dim, p.dim);
    double tau_pow = 1.0;
    for (int j = 0; j <= J; ++j) {
      if (j > 0) tau_pow *= tau;
      acc += terms.terms[j] / tau_pow;
      sz_cells.push_back(format_double(expectation(sigma_z(), acc)));
      sy_cells.push_back(format_double(expectation(sigma_y(), acc)));
    }
    if (min_eigenvalue(acc) < -1e-6) ++positivity_violations;
    std::vector<std::string> row{
        format_double(tp), format_double(expectation(sigma_z(), rho_ex))};
    row.insert(row.end(), sz_cells.begin(), sz_cells.end());
    row.push_back(format_double(expectation(sigma_y(), rho_ex)));
    row.insert(row.end(), sy_cells.begin(), sy_cells.end());
    csv.row(row);
  }
  std::string warning;
  if (positivity_violations > 0)
    warning = "warning: truncated expansion dips below positivity (eigenvalue "
              "< -1e-6) at " +
              std::to_string(positivity_violations) + " of " +
              std::to_string(n_grid) +
              " grid points; tau is likely too small for this order\n";
  return {csv.str(), warning};
}

inline CommandOutput cmd_isotherm(const json& cfg) {
  require_keys_known(cfg,
                     {"command", "output", "seed", "protocol", "bath",
                      "order", "quad_rel_tol"},
                     "config");
  const BathSpec bath = parse_bath(cfg);
  const int J = get_int_or(cfg, "order", "config", 2);
  if (J < 0 || J > 4) throw ConfigError("config: order must lie in [0, 4]");
  const double quad_tol = get_number_or(cfg, "quad_rel_tol", "config", 1e-8);
  if (!(quad_tol > 0.0))
    throw ConfigError("config: quad_rel_tol must be positive");
  const Protocol p = parse_protocol(
      cfg, bath, std::numeric_limits<double>::quiet_NaN());

  const ThermoExpansion e = thermo_expansion(p, J, quad_tol);

  json resolved = detail::resolved_header(cfg, "isotherm");
  resolved["bath"] = bath_json(bath);
  resolved["protocol"] = cfg["protocol"];
  resolved["order"] = J;
  resolved["quad_rel_tol"] = quad_tol;

  CsvBuilder csv(resolved);
  csv.row({"j", "Q_j", "W_j", "dU_j", "first_law_residual"});
  for (int j = 0; j <= J; ++j)
    csv.row({std::to_string(j), format_double(e.Q[j]), format_double(e.W[j]),
             format_double(e.dU[j]),
             format_double(e.dU[j] - e.Q[j] - e.W[j])});
  return {csv.str(), ""};
}

inline CommandOutput cmd_carnot(const json& cfg) {
  require_keys_known(
      cfg, {"command", "output", "seed", "carnot", "exact_engine",
            "tolerance"},
      "config");
  const CarnotSpec spec = parse_carnot(cfg, /*needs_tc=*/true);
  const bool exact = get_bool_or(cfg, "exact_engine", "config", true);
  const double tol = get_number_or(cfg, "tolerance", "config", 1e-9);

  const CarnotResult point = carnot_point(spec);

  json resolved = detail::resolved_header(cfg, "carnot");
  resolved["carnot"] = {{"T_H", spec.T_H},       {"T_C", spec.T_C},
                        {"alpha", spec.alpha},   {"gamma0", spec.gamma0},
                        {"omega0", spec.omega0}, {"hot_shape", spec.hot_shape}};
  resolved["exact_engine"] = exact;
  resolved["tolerance"] = tol;

  json result;
  result["eta_C"] = point.eta_C;
  result["heats"] = {{"Q0H", point.heats.Q0H},
                     {"Q0C", point.heats.Q0C},
                     {"Q1H", point.heats.Q1H},
                     {"Q1C", point.heats.Q1C}};
  result["tau_H_opt"] = point.tau_H_opt;
  result["tau_C_opt"] = point.tau_C_opt;
  result["P_max"] = point.P_max;
  result["eta_star"] = point.eta_star;
  result["eta_star_closed_form"] = point.eta_star_closed_form;
  result["eta_star_symmetric"] = point.eta_star_symmetric;

  if (exact) {
    const EngineResult er =
        simulate_exact_engine(spec, point.tau_H_opt, point.tau_C_opt, tol);
    json ej;
    ej["Q_H"] = er.Q_H;
    ej["Q_C"] = er.Q_C;
    ej["work_extracted"] = er.work_extracted;
    ej["cycles"] = er.cycles;
    ej["is_engine"] = er.is_engine;
    if (er.is_engine) ej["eta"] = er.eta;  // omitted when not an engine
    result["exact"] = ej;
  }

  json doc;
  doc["resolved_config"] = resolved;
  doc["result"] = result;
  return {doc.dump(2) + "\n", ""};
}

inline CommandOutput cmd_sweep(const json& cfg, int jobs) {
  require_keys_known(cfg,
                     {"command", "output", "seed", "carnot", "ratios",
                      "alphas", "exact_engine", "tolerance"},
                     "config");
  const CarnotSpec base = parse_carnot(cfg, /*needs_tc=*/false);
  if (!cfg.contains("ratios") || !cfg["ratios"].is_array() ||
      cfg["ratios"].empty())
    throw ConfigError("config: 'ratios' must be a non-empty array");
  if (!cfg.contains("alphas") || !cfg["alphas"].is_array() ||
      cfg["alphas"].empty())
    throw ConfigError("config: 'alphas' must be a non-empty array");
  std::vector<double> ratios, alphas;
  for (const auto& v : cfg["ratios"]) {
    if (!v.is_number()) throw ConfigError("config: ratios must be numbers");
    ratios.push_back(v.get<double>());
  }
  for (const auto& v : cfg["alphas"]) {
    if (!v.is_number()) throw ConfigError("config: alphas must be numbers");
    alphas.push_back(v.get<double>());
  }
  const bool exact = get_bool_or(cfg, "exact_engine", "config", true);
  const double tol = get_number_or(cfg, "tolerance", "config", 1e-9);

  const std::vector<SweepRow> rows =
      sweep(base, ratios, alphas, exact, jobs, tol);

  json resolved = detail::resolved_header(cfg, "sweep");
  resolved["carnot"] = {{"T_H", base.T_H},
                        {"alpha", base.alpha},
                        {"gamma0", base.gamma0},
                        {"omega0", base.omega0},
                        {"hot_shape", base.hot_shape}};
  resolved["ratios"] = ratios;
  resolved["alphas"] = alphas;
  resolved["exact_engine"] = exact;
  resolved["tolerance"] = tol;

  auto cell = [](double v) {
    return std::isfinite(v) ? format_double(v) : std::string();
  };
  CsvBuilder csv(resolved);
  csv.row({"ratio", "alpha", "eta_analytic", "eta_exact", "engine_flag",
           "tauH_opt", "tauC_opt"});
  for (const auto& r : rows)
    csv.row({format_double(r.ratio), format_double(r.alpha),
             cell(r.eta_analytic), cell(r.eta_exact), r.flag, cell(r.tau_H_opt),
             cell(r.tau_C_opt)});
  return {csv.str(), ""};
}

// ---------------------------------------------------------------------------
// Driver

struct RunOptions {
  std::string config_path;
  std::string output_override;  // empty: use the config's "output", if any
  int jobs = 0;                 // 0: hardware concurrency
  bool verbose = false;
};

inline json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config root must be a JSON object");
  return cfg;
}

inline CommandOutput dispatch(const json& cfg, int jobs) {
  const std::string command = get_string(cfg, "command", "config");
  if (cfg.contains("seed")) {
    if (!cfg["seed"].is_number_integer() || cfg["seed"].get<long long>() < 0)
      throw ConfigError("config: seed must be a non-negative integer");
  }
  if (cfg.contains("output") && !cfg["output"].is_string())
    throw ConfigError("config: output must be a string path");
  if (command == "steady") return cmd_steady(cfg);
  if (command == "evolve") return cmd_evolve(cfg);
  if (command == "perturb") return cmd_perturb(cfg);
  if (command == "isotherm") return cmd_isotherm(cfg);
  if (command == "carnot") return cmd_carnot(cfg);
  if (command == "sweep") return cmd_sweep(cfg, jobs);
  throw ConfigError("config: unknown command '" + command +
                    "' (expected steady, evolve, perturb, isotherm, carnot, "
                    "sweep)");
}

// Runs one config end to end. All computation happens before the output file
// is opened, so a failing run never leaves a partial file behind.
inline int run(const RunOptions& opts, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  try {
    json cfg = load_config_file(opts.config_path);
    int jobs = opts.jobs;
    if (jobs <= 0)
      jobs = std::max(1u, std::thread::hardware_concurrency());
    if (opts.verbose)
      err << "slowdrive: running command '"
          << get_string(cfg, "command", "config") << "' with " << jobs
          << " worker(s)\n";

    const CommandOutput result = dispatch(cfg, jobs);
    if (!result.warning.empty()) err << result.warning;

    std::string target = opts.output_override;
    if (target.empty() && cfg.contains("output"))
      target = cfg["output"].get<std::string>();
    if (target.empty()) {
      out << result.text;
    } else {
      std::ofstream f(target, std::ios::binary);
      if (!f) throw ConfigError("cannot open output file: " + target);
      f << result.text;
      if (!f.good()) throw ConfigError("failed writing output file: " + target);
      if (opts.verbose) err << "slowdrive: wrote " << target << "\n";
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

// Reference text surfaced by --help.
inline const char* config_reference() {
  return R"(Units: hbar = k_B = 1; rates and frequencies share one energy unit.

Config file (strict JSON; unknown keys are rejected):
  command        steady | evolve | perturb | isotherm | carnot | sweep
  output         optional path; CSV for tabular commands, JSON otherwise
  seed           optional non-negative integer, echoed into outputs
                 (all solvers are deterministic; kept for provenance)

  bath           { beta, gamma0, alpha=0 }   spectral density gamma0*w^alpha
  protocol       { shape: driven-qubit, omega, delta0 }
                 { shape: cosine-ramp, omega_start, omega_end, floor_frac=1e-6 }
                 { shape: constant, omega }

  steady         protocol, bath, t_prime=0
  evolve         protocol, bath, tau, tolerance=1e-10, grid_points=201,
                 initial_state=maximally-mixed|steady
  perturb        evolve keys plus order=2 (expansion truncation J)
  isotherm       protocol, bath, order=2, quad_rel_tol=1e-8
  carnot         carnot{T_H, T_C, alpha=0, gamma0=1, omega0, hot_shape=cosine|
                 cosine-squared|shifted-cosine}, exact_engine=true,
                 tolerance=1e-9
  sweep          carnot (template; T_C ignored), ratios[], alphas[],
                 exact_engine=true, tolerance=1e-9

Exit codes: 0 success, 1 configuration error, 2 numerical failure.)";
}

}  // namespace slowdrive::cli
