#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "slowdrive/propagator.hpp"
#include "slowdrive/thermo.hpp"

namespace slowdrive {

// A finite-time Carnot cycle on a qubit: a hot isotherm at T_H traversing
// omega_H(t'), an instantaneous adiabat rescaling every frequency by
// lambda = T_C / T_H, the mirrored cold isotherm at T_C, and the adiabat
// back. The frequency schedules satisfy beta_C omega_C(t') =
// beta_H omega_H(1 - t'), so the zeroth-order (quasistatic) state retraces
// the same Gibbs curve on both branches.
struct CarnotSpec {
  double T_H = 1.0;
  double T_C = 0.5;
  double alpha = 0.0;   // bath spectral exponent gamma(w) = gamma0 w^alpha
  double gamma0 = 1.0;
  double omega0 = 1.0;  // scale of the hot frequency schedule
  std::string hot_shape = "cosine";

  double ratio() const { return T_C / T_H; }

  void validate() const {
    if (!(T_H > 0.0) || !std::isfinite(T_H))
      throw ConfigError("CarnotSpec: T_H must be positive");
    if (!(T_C > 0.0) || !(T_C < T_H))
      throw ConfigError("CarnotSpec: require 0 < T_C < T_H");
    if (!(gamma0 > 0.0) || !std::isfinite(gamma0))
      throw ConfigError("CarnotSpec: gamma0 must be positive");
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
      throw ConfigError("CarnotSpec: omega0 must be positive");
    if (!std::isfinite(alpha)) throw ConfigError("CarnotSpec: alpha finite");
    if (hot_shape != "cosine" && hot_shape != "cosine-squared" &&
        hot_shape != "shifted-cosine")
      throw ConfigError("CarnotSpec: unknown hot_shape '" + hot_shape +
                        "' (expected cosine, cosine-squared, shifted-cosine)");
  }
};

namespace detail {

struct ShapeFns {
  std::function<double(double)> omega;
  std::function<double(double)> omega_dot;
};

// Hot-branch frequency schedules. All have omega_dot = 0 at both ends so the
// quasistatic state is differentiable across the cycle's corners.
inline ShapeFns hot_shape_functions(const std::string& name, double omega0) {
  constexpr double pi = std::numbers::pi;
  if (name == "cosine")
    return {[omega0](double t) { return omega0 * (1.0 + std::cos(pi * t)); },
            [omega0](double t) { return -omega0 * pi * std::sin(pi * t); }};
  if (name == "cosine-squared")
    return {[omega0](double t) {
              const double c = 1.0 + std::cos(pi * t);
              return 0.5 * omega0 * c * c;
            },
            [omega0](double t) {
              return -omega0 * pi * (1.0 + std::cos(pi * t)) *
                     std::sin(pi * t);
            }};
  if (name == "shifted-cosine")
    return {[omega0](double t) {
              return omega0 * (1.25 + 0.75 * std::cos(pi * t));
            },
            [omega0](double t) {
              return -0.75 * omega0 * pi * std::sin(pi * t);
            }};
  throw ConfigError("hot_shape_functions: unknown shape '" + name + "'");
}

}  // namespace detail

struct CyclePair {
  Protocol hot;
  Protocol cold;
};

// Builds the hot isotherm and derives the cold one mechanically:
// omega_C(t') = lambda * omega_H(1 - t'), beta_C = beta_H / lambda, so the
// joint condition beta_C omega_C(0) = beta_H omega_H(1) holds identically.
inline CyclePair build_cycle(
    const CarnotSpec& spec,
    double tau_H = std::numeric_limits<double>::quiet_NaN(),
    double tau_C = std::numeric_limits<double>::quiet_NaN()) {
  spec.validate();
  const double lambda = spec.ratio();
  const double beta_H = 1.0 / spec.T_H;
  auto s = detail::hot_shape_functions(spec.hot_shape, spec.omega0);
  if (std::abs(s.omega_dot(0.0)) > 1e-10 * spec.omega0 ||
      std::abs(s.omega_dot(1.0)) > 1e-10 * spec.omega0)
    throw ConfigError(
        "build_cycle: hot shape must have omega_dot = 0 at both endpoints");

  BathSpec hot_bath{beta_H, spec.gamma0, spec.alpha};
  BathSpec cold_bath{beta_H / lambda, spec.gamma0, spec.alpha};
  Protocol hot = qubit_isotherm_protocol(s.omega, hot_bath, tau_H, s.omega_dot);
  auto omega_c = [om = s.omega, lambda](double t) {
    return lambda * om(1.0 - t);
  };
  auto omega_dot_c = [od = s.omega_dot, lambda](double t) {
    return -lambda * od(1.0 - t);
  };
  Protocol cold =
      qubit_isotherm_protocol(omega_c, cold_bath, tau_C, omega_dot_c);
  return {std::move(hot), std::move(cold)};
}

// Quasistatic heats and leading finite-time corrections of the two isotherms.
// Q0 branches follow from the Gibbs entropy change; Q1 from the slow-driving
// expansion. Sign structure of an engine-oriented cycle: Q0H > 0, Q0C < 0,
// and both corrections are dissipative, Q1H < 0, Q1C < 0.
struct FirstOrderHeats {
  double Q0H = 0.0, Q0C = 0.0;
  double Q1H = 0.0, Q1C = 0.0;
};

inline FirstOrderHeats first_order_heats(const CarnotSpec& spec,
                                         double quad_rel_tol = 1e-8) {
  auto cycle = build_cycle(spec);
  const double beta_H = 1.0 / spec.T_H;
  const double beta_C = 1.0 / spec.T_C;
  auto entropy_at = [](const Protocol& iso, double t) {
    return equilibrium_quantities(iso.hamiltonian_at(t), iso.bath.beta).S0;
  };
  FirstOrderHeats h;
  const double dS_H = entropy_at(cycle.hot, 1.0) - entropy_at(cycle.hot, 0.0);
  h.Q0H = dS_H / beta_H;
  h.Q0C = (entropy_at(cycle.cold, 1.0) - entropy_at(cycle.cold, 0.0)) / beta_C;
  h.Q1H = heat_coefficient(cycle.hot, 1, quad_rel_tol);
  h.Q1C = heat_coefficient(cycle.cold, 1, quad_rel_tol);
  if (!(h.Q0H > 0.0 && h.Q0C < 0.0 && h.Q1H < 0.0 && h.Q1C < 0.0))
    throw NumericalError(
        "first_order_heats: sign structure violated (expected Q0H > 0, "
        "Q0C < 0, Q1H < 0, Q1C < 0)");
  return h;
}

// Efficiency of the first-order cycle model at the given stroke durations:
// P = (Q0H + Q1H/tau_H + Q0C + Q1C/tau_C) / (tau_H + tau_C).
inline double cycle_power(const FirstOrderHeats& h, double tau_H,
                          double tau_C) {
  return (h.Q0H + h.Q1H / tau_H + h.Q0C + h.Q1C / tau_C) / (tau_H + tau_C);
}

struct PowerOptimum {
  double tau_H = 0.0;
  double tau_C = 0.0;
  double P_max = 0.0;
  double eta_star = 0.0;  // efficiency at maximum power
};

// Maximizes the first-order power over stroke durations with a coarse
// logarithmic grid followed by coordinate golden-section refinement.
inline PowerOptimum optimize_power(const FirstOrderHeats& h) {
  if (!(h.Q0H > 0.0) || !(h.Q0C < 0.0) || !(h.Q1H < 0.0) || !(h.Q1C < 0.0))
    throw ConfigError(
        "optimize_power: heats must satisfy Q0H > 0, Q0C < 0, Q1H < 0, "
        "Q1C < 0");
  if (!(h.Q0H + h.Q0C > 0.0))
    throw NumericalError(
        "optimize_power: no positive-work regime (Q0H + Q0C <= 0)");

  auto P = [&](double tH, double tC) { return cycle_power(h, tH, tC); };
  const double sH = std::abs(h.Q1H / h.Q0H);
  const double sC = std::abs(h.Q1C / h.Q0C);

  double tH = sH, tC = sC, best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 64; ++i) {
    const double cH = sH * std::pow(10.0, -3.0 + 9.0 * i / 63.0);
    for (int k = 0; k < 64; ++k) {
      const double cC = sC * std::pow(10.0, -3.0 + 9.0 * k / 63.0);
      const double v = P(cH, cC);
      if (v > best) {
        best = v;
        tH = cH;
        tC = cC;
      }
    }
  }

  constexpr double gr = 0.6180339887498949;  // (sqrt(5) - 1) / 2
  auto golden = [&](const std::function<double(double)>& f, double a,
                    double b) {
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 120; ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = f(d);
      }
      if (b - a < 1e-12 * (std::abs(a) + std::abs(b))) break;
    }
    return 0.5 * (a + b);
  };

  for (int sweep = 0; sweep < 40; ++sweep) {
    const double lH = golden([&](double x) { return P(std::exp(x), tC); },
                             std::log(tH) - 1.0, std::log(tH) + 1.0);
    tH = std::exp(lH);
    const double lC = golden([&](double x) { return P(tH, std::exp(x)); },
                             std::log(tC) - 1.0, std::log(tC) + 1.0);
    tC = std::exp(lC);
  }

  PowerOptimum o;
  o.tau_H = tH;
  o.tau_C = tC;
  o.P_max = P(tH, tC);
  o.eta_star = 1.0 + (h.Q0C + h.Q1C / tC) / (h.Q0H + h.Q1H / tH);
  if (!(o.P_max > 0.0))
    throw NumericalError("optimize_power: maximum power is not positive");
  return o;
}

// Closed form of the efficiency at maximum power of the first-order model,
// eta* = 1 / (2/eta_C - 1 / (1 + sqrt(Q1C / Q1H))).
inline double eta_star_from_heats(const FirstOrderHeats& h) {
  const double eta_C = 1.0 + h.Q0C / h.Q0H;
  return 1.0 / (2.0 / eta_C - 1.0 / (1.0 + std::sqrt(h.Q1C / h.Q1H)));
}

// Same closed form specialized to the symmetric qubit cycle, where
// Q1C / Q1H = (T_C / T_H)^(1 - alpha):
// eta* = 1 / (2/eta_C - 1 / (1 + r^((1 - alpha)/2))), r = 1 - eta_C.
inline double eta_star_analytic(double eta_C, double alpha) {
  if (!(eta_C > 0.0) || !(eta_C < 1.0))
    throw ConfigError("eta_star_analytic: eta_C must lie in (0, 1)");
  if (!std::isfinite(alpha))
    throw ConfigError("eta_star_analytic: alpha must be finite");
  const double r = 1.0 - eta_C;
  return 1.0 / (2.0 / eta_C - 1.0 / (1.0 + std::pow(r, 0.5 * (1.0 - alpha))));
}

// Optimal stroke-duration closed forms of the first-order model.
inline std::pair<double, double> optimal_durations(const FirstOrderHeats& h) {
  const double W0 = h.Q0H + h.Q0C;
  if (!(W0 > 0.0))
    throw NumericalError("optimal_durations: no positive-work regime");
  const double tH =
      2.0 * (-h.Q1H + std::sqrt(h.Q1H * h.Q1C)) / W0;
  const double tC =
      2.0 * (-h.Q1C + std::sqrt(h.Q1H * h.Q1C)) / W0;
  return {tH, tC};
}

// One full finite-time cycle repeated until the per-cycle hot heat settles
// (relative change < 1e-8), i.e. until the state reaches its periodic orbit.
// Heats are then reported for the converged cycle. work_extracted =
// Q_H + Q_C; when it is not positive the cycle is flagged as not an engine
// and eta is NaN.
struct EngineResult {
  double Q_H = 0.0;
  double Q_C = 0.0;
  double work_extracted = 0.0;
  double eta = std::numeric_limits<double>::quiet_NaN();
  int cycles = 0;
  bool is_engine = false;
};

inline EngineResult simulate_exact_engine(const CarnotSpec& spec, double tau_H,
                                          double tau_C, double tol = 1e-9,
                                          int max_cycles = 200) {
  if (!(tau_H > 0.0) || !(tau_C > 0.0))
    throw ConfigError("simulate_exact_engine: stroke durations must be > 0");
  if (max_cycles < 2)
    throw ConfigError("simulate_exact_engine: max_cycles >= 2");
  auto cycle = build_cycle(spec, tau_H, tau_C);

  Mat rho = cycle.hot.steady_at(0.0);  // Gibbs at the hot start
  double qh_prev = std::numeric_limits<double>::quiet_NaN();
  for (int n = 1; n <= max_cycles; ++n) {
    const Trajectory hot_traj = integrate(cycle.hot, rho, tol);
    const HeatWork hw_h = exact_heat_work(hot_traj, cycle.hot);
    rho = hot_traj.state_at(tau_H);
    // Instantaneous adiabat: frequencies rescale, the state is unchanged.
    const Trajectory cold_traj = integrate(cycle.cold, rho, tol);
    const HeatWork hw_c = exact_heat_work(cold_traj, cycle.cold);
    rho = cold_traj.state_at(tau_C);

    if (n > 1 && std::abs(hw_h.Q - qh_prev) <= 1e-8 * std::abs(hw_h.Q)) {
      EngineResult r;
      r.Q_H = hw_h.Q;
      r.Q_C = hw_c.Q;
      r.work_extracted = hw_h.Q + hw_c.Q;
      r.cycles = n;
      r.is_engine = r.work_extracted > 0.0 && r.Q_H > 0.0;
      if (r.is_engine) r.eta = 1.0 + r.Q_C / r.Q_H;
      return r;
    }
    qh_prev = hw_h.Q;
  }
  throw NumericalError(
      "simulate_exact_engine: periodic orbit not reached within max_cycles");
}

// First-order analysis of one cycle: heats, optimal durations, maximum
// power, and both efficiency expressions.
struct CarnotResult {
  FirstOrderHeats heats;
  double eta_C = 0.0;
  double tau_H_opt = 0.0;
  double tau_C_opt = 0.0;
  double P_max = 0.0;
  double eta_star = 0.0;
  double eta_star_closed_form = 0.0;
  double eta_star_symmetric = 0.0;  // shape-independent qubit closed form
};

inline CarnotResult carnot_point(const CarnotSpec& spec,
                                 double quad_rel_tol = 1e-8) {
  CarnotResult r;
  r.heats = first_order_heats(spec, quad_rel_tol);
  r.eta_C = 1.0 - spec.ratio();
  const PowerOptimum o = optimize_power(r.heats);
  r.tau_H_opt = o.tau_H;
  r.tau_C_opt = o.tau_C;
  r.P_max = o.P_max;
  r.eta_star = o.eta_star;
  r.eta_star_closed_form = eta_star_from_heats(r.heats);
  r.eta_star_symmetric = eta_star_analytic(r.eta_C, spec.alpha);
  return r;
}

// One row of an efficiency sweep over (T_C/T_H, alpha).
struct SweepRow {
  double ratio = 0.0;
  double alpha = 0.0;
  double eta_analytic = std::numeric_limits<double>::quiet_NaN();
  double eta_exact = std::numeric_limits<double>::quiet_NaN();
  double tau_H_opt = std::numeric_limits<double>::quiet_NaN();
  double tau_C_opt = std::numeric_limits<double>::quiet_NaN();
  double P_max = std::numeric_limits<double>::quiet_NaN();
  int cycles = 0;
  std::string flag;  // engine | not-engine | analytic-only | degenerate |
                     // error: <message>
};

// Sweeps eta* over temperature ratios and spectral exponents. Rows are laid
// out alpha-major (all ratios for the first alpha, then the next). Cells are
// independent and may be evaluated on `jobs` worker threads; results are
// written by index so the row order is deterministic.
inline std::vector<SweepRow> sweep(const CarnotSpec& base,
                                   const std::vector<double>& ratios,
                                   const std::vector<double>& alphas,
                                   bool exact_engine = true, int jobs = 1,
                                   double tol = 1e-9) {
  if (ratios.empty() || alphas.empty())
    throw ConfigError("sweep: ratios and alphas must be non-empty");
  for (double r : ratios)
    if (!(r > 0.0) || r > 1.0)
      throw ConfigError("sweep: each ratio must lie in (0, 1]");
  if (jobs < 1) jobs = 1;

  std::vector<SweepRow> rows(ratios.size() * alphas.size());
  auto run_cell = [&](std::size_t idx) {
    SweepRow& row = rows[idx];
    row.alpha = alphas[idx / ratios.size()];
    row.ratio = ratios[idx % ratios.size()];
    try {
      if (row.ratio == 1.0) {  // eta_C = 0: no engine regime at all
        row.eta_analytic = 0.0;
        row.flag = "degenerate";
        return;
      }
      row.eta_analytic = eta_star_analytic(1.0 - row.ratio, row.alpha);
      CarnotSpec spec = base;
      spec.T_C = row.ratio * spec.T_H;
      spec.alpha = row.alpha;
      const CarnotResult point = carnot_point(spec);
      row.tau_H_opt = point.tau_H_opt;
      row.tau_C_opt = point.tau_C_opt;
      row.P_max = point.P_max;
      if (!exact_engine) {
        row.flag = "analytic-only";
        return;
      }
      const EngineResult er = simulate_exact_engine(
          spec, point.tau_H_opt, point.tau_C_opt, tol);
      row.cycles = er.cycles;
      if (er.is_engine) {
        row.eta_exact = er.eta;
        row.flag = "engine";
      } else {
        row.flag = "not-engine";
      }
    } catch (const std::exception& e) {
      row.flag = std::string("error: ") + e.what();
    }
  };

  if (jobs == 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int n_workers =
        std::min<std::size_t>(jobs, rows.size());
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < rows.size();
             i = next.fetch_add(1))
          run_cell(i);
      });
    for (auto& th : pool) th.join();
  }
  return rows;
}

}  // namespace slowdrive
