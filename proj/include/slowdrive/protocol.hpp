#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "slowdrive/finite_difference.hpp"
#include "slowdrive/superop.hpp"

namespace slowdrive {

// A driving schedule expressed in rescaled time t' = t / tau, t' in [0, 1].
// liouvillian_at and hamiltonian_at are mandatory; the remaining hooks are
// optional closed forms that replace finite differences where available.
struct Protocol {
  int dim = 2;
  double tau = std::numeric_limits<double>::quiet_NaN();  // unset: NaN
  BathSpec bath;

  std::function<Mat(double)> liouvillian_at;   // t' -> d^2 x d^2 generator
  std::function<Mat(double)> hamiltonian_at;   // t' -> d x d
  std::function<Mat(double)> hamiltonian_dot_at;  // dH/dt'
  std::function<Mat(double)> steady_at;           // instantaneous steady state
  std::function<Mat(double)> steady_dot_at;       // d(steady state)/dt'

  // Interior t' where the schedule is only C^0 (e.g. frequency-floor
  // crossings). Quadratures and stencils treat the pieces separately.
  std::vector<double> breakpoints;

  bool has_tau() const { return std::isfinite(tau) && tau > 0.0; }

  void validate() const {
    if (dim < 2) throw ConfigError("Protocol: dim >= 2 required");
    if (!liouvillian_at || !hamiltonian_at)
      throw ConfigError("Protocol: liouvillian_at and hamiltonian_at are required");
    if (!std::isnan(tau) && !(tau > 0.0))
      throw ConfigError("Protocol: tau must be positive when set");
  }
};

// Time-reversed schedule: every schedule function is evaluated at 1 - t' and
// rate-of-change hooks flip sign.
inline Protocol reverse(const Protocol& p) {
  p.validate();
  Protocol r = p;
  r.liouvillian_at = [f = p.liouvillian_at](double t) { return f(1.0 - t); };
  r.hamiltonian_at = [f = p.hamiltonian_at](double t) { return f(1.0 - t); };
  if (p.hamiltonian_dot_at)
    r.hamiltonian_dot_at = [f = p.hamiltonian_dot_at](double t) {
      return Mat(-f(1.0 - t));
    };
  if (p.steady_at)
    r.steady_at = [f = p.steady_at](double t) { return f(1.0 - t); };
  if (p.steady_dot_at)
    r.steady_dot_at = [f = p.steady_dot_at](double t) {
      return Mat(-f(1.0 - t));
    };
  r.breakpoints.clear();
  for (double b : p.breakpoints) r.breakpoints.push_back(1.0 - b);
  std::sort(r.breakpoints.begin(), r.breakpoints.end());
  return r;
}

// Qubit with H(t') = (delta(t') / 2) sigma_x, delta(t') = delta0 cos(pi t'),
// damped by a thermal bath resonant at the fixed splitting omega. The
// dissipative part is time independent; the steady state is known in closed
// form as a function of r = delta / gamma.
inline Protocol driven_qubit_protocol(
    double omega, double delta0, const BathSpec& bath,
    double tau = std::numeric_limits<double>::quiet_NaN()) {
  bath.validate();
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw ConfigError("driven_qubit_protocol: omega must be positive");
  if (!std::isfinite(delta0))
    throw ConfigError("driven_qubit_protocol: delta0 must be finite");

  const double gamma = bath.gamma0 * std::pow(omega, bath.alpha);
  const double N = mean_occupation(bath.beta, omega);
  const Mat D = gamma * ((N + 1.0) * dissipator_super(sigma_minus()) +
                         N * dissipator_super(sigma_plus()));
  constexpr double pi = std::numbers::pi;

  Protocol p;
  p.dim = 2;
  p.tau = tau;
  p.bath = bath;
  p.liouvillian_at = [D, delta0](double t) -> Mat {
    return D + hamiltonian_super(0.5 * delta0 * std::cos(pi * t) * sigma_x());
  };
  p.hamiltonian_at = [delta0](double t) -> Mat {
    return 0.5 * delta0 * std::cos(pi * t) * sigma_x();
  };
  p.hamiltonian_dot_at = [delta0](double t) -> Mat {
    return -0.5 * delta0 * pi * std::sin(pi * t) * sigma_x();
  };
  // Unique fixed point, parametrized by r(t') = delta(t') / gamma and
  // z2 = 1 / ((1 + 2N)^2 + 2 r^2).
  auto fixed_point = [gamma, N](double r, double rdot, bool want_dot) -> Mat {
    const double b = 1.0 + 2.0 * N;
    const double z2 = 1.0 / (b * b + 2.0 * r * r);
    Mat M(2, 2);
    M << N * b + r * r, Complex(0, -r), Complex(0, r), (1.0 + N) * b + r * r;
    if (!want_dot) return z2 * M;
    const double z2dot = -4.0 * r * rdot * z2 * z2;
    Mat Mdot(2, 2);
    Mdot << 2.0 * r * rdot, Complex(0, -rdot), Complex(0, rdot),
        2.0 * r * rdot;
    return z2dot * M + z2 * Mdot;
  };
  p.steady_at = [fixed_point, delta0, gamma](double t) -> Mat {
    return fixed_point(delta0 * std::cos(pi * t) / gamma, 0.0, false);
  };
  p.steady_dot_at = [fixed_point, delta0, gamma](double t) -> Mat {
    return fixed_point(delta0 * std::cos(pi * t) / gamma,
                       -delta0 * pi * std::sin(pi * t) / gamma, true);
  };
  return p;
}

// Qubit isotherm: H(t') = (omega(t') / 2) sigma_z in contact with one bath.
// In the interaction picture the generator is purely dissipative and the
// instantaneous steady state is the Gibbs state (I + z sigma_z) / 2 with
// z = -tanh(beta omega / 2). Frequencies are clamped from below at
// floor_frac times the schedule's supremum so occupations stay finite;
// clamp crossings are recorded as breakpoints.
inline Protocol qubit_isotherm_protocol(
    std::function<double(double)> omega_of, const BathSpec& bath,
    double tau = std::numeric_limits<double>::quiet_NaN(),
    std::function<double(double)> omega_dot_of = {},
    double floor_frac = 1e-6) {
  bath.validate();
  if (!omega_of)
    throw ConfigError("qubit_isotherm_protocol: omega(t') is required");
  if (!(floor_frac > 0.0) || !(floor_frac < 1.0))
    throw ConfigError("qubit_isotherm_protocol: floor_frac must be in (0, 1)");

  constexpr int kScan = 1000;
  double sup = 0.0;
  for (int k = 0; k <= kScan; ++k) {
    const double t = static_cast<double>(k) / kScan;
    const double w = omega_of(t);
    if (!std::isfinite(w) || w < 0.0)
      throw ConfigError(
          "qubit_isotherm_protocol: omega(t') must be finite and >= 0");
    sup = std::max(sup, w);
  }
  if (!(sup > 0.0))
    throw ConfigError("qubit_isotherm_protocol: omega vanishes identically");
  const double floor = floor_frac * sup;

  if (!omega_dot_of) omega_dot_of = chebyshev_derivative(omega_of);

  auto omega_clamped = [omega_of, floor](double t) {
    return std::max(omega_of(t), floor);
  };
  auto omega_dot_clamped = [omega_of, omega_dot_of, floor](double t) {
    return omega_of(t) > floor ? omega_dot_of(t) : 0.0;
  };

  const Mat Dm = dissipator_super(sigma_minus());
  const Mat Dp = dissipator_super(sigma_plus());

  Protocol p;
  p.dim = 2;
  p.tau = tau;
  p.bath = bath;
  p.liouvillian_at = [omega_clamped, bath, Dm, Dp](double t) -> Mat {
    const double w = omega_clamped(t);
    const double g = bath.gamma0 * std::pow(w, bath.alpha);
    const double N = mean_occupation(bath.beta, w);
    return g * ((N + 1.0) * Dm + N * Dp);
  };
  p.hamiltonian_at = [omega_clamped](double t) -> Mat {
    return 0.5 * omega_clamped(t) * sigma_z();
  };
  p.hamiltonian_dot_at = [omega_dot_clamped](double t) -> Mat {
    return 0.5 * omega_dot_clamped(t) * sigma_z();
  };
  p.steady_at = [omega_clamped, bath](double t) -> Mat {
    const double z = -std::tanh(0.5 * bath.beta * omega_clamped(t));
    return 0.5 * (identity(2) + z * sigma_z());
  };
  p.steady_dot_at = [omega_clamped, omega_dot_clamped, bath](double t) -> Mat {
    const double u = 0.5 * bath.beta * omega_clamped(t);
    const double udot = 0.5 * bath.beta * omega_dot_clamped(t);
    const double c = std::cosh(u);
    return 0.5 * (-udot / (c * c)) * sigma_z();
  };

  // Locate clamp crossings by bisection between scan points of opposite sign.
  auto excess = [omega_of, floor](double t) { return omega_of(t) - floor; };
  for (int k = 0; k < kScan; ++k) {
    double a = static_cast<double>(k) / kScan;
    double b = static_cast<double>(k + 1) / kScan;
    double fa = excess(a), fb = excess(b);
    if (fa == 0.0) {
      p.breakpoints.push_back(a);
      continue;
    }
    if (fa * fb >= 0.0) continue;
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      const double m = 0.5 * (a + b);
      const double fm = excess(m);
      if (fm == 0.0) {
        a = b = m;
        break;
      }
      (fa * fm < 0.0 ? b : a) = m;
      (fa * fm < 0.0 ? fb : fa) = fm;
    }
    p.breakpoints.push_back(0.5 * (a + b));
  }
  std::sort(p.breakpoints.begin(), p.breakpoints.end());
  return p;
}

// Checks that L(t') has a simple zero eigenvalue and every other eigenvalue
// in the open left half-plane, on a uniform grid of n_grid points.
inline void validate_relaxing(const Protocol& p, int n_grid = 50) {
  p.validate();
  if (n_grid < 1) throw ConfigError("validate_relaxing: n_grid >= 1");
  for (int k = 0; k < n_grid; ++k) {
    const double t =
        n_grid == 1 ? 0.0 : static_cast<double>(k) / (n_grid - 1);
    const Mat L = p.liouvillian_at(t);
    const double scale = std::max(L.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::ComplexEigenSolver<Mat> es(L, /*computeEigenvectors=*/false);
    Eigen::VectorXcd ev = es.eigenvalues();
    Eigen::Index i0;
    ev.cwiseAbs().minCoeff(&i0);
    if (std::abs(ev(i0)) > 1e-8 * scale)
      throw NumericalError("validate_relaxing: no zero eigenvalue at t' = " +
                           std::to_string(t));
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (i == i0) continue;
      if (!(ev(i).real() < 0.0) || -ev(i).real() <= 1e-8 * scale)
        throw NumericalError(
            "validate_relaxing: zero eigenvalue not simple or spectrum not "
            "strictly decaying at t' = " +
            std::to_string(t));
    }
  }
}

}  // namespace slowdrive
