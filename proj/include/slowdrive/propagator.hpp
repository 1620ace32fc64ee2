#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "slowdrive/perturbation.hpp"
#include "slowdrive/quadrature.hpp"

namespace slowdrive {

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

// Dense-output trajectory of rho(t) on [0, tau] in physical time, produced
// by the embedded Dormand-Prince 5(4) pair below.
class Trajectory {
 public:
  struct DenseStep {
    double t0 = 0.0, h = 0.0;
    std::array<Vec, 5> rcont;  // quartic Hermite-style interpolation data
  };

  Trajectory(double tau, int dim) : tau_(tau), dim_(dim) {}

  double tau() const { return tau_; }
  int dim() const { return dim_; }
  const std::vector<DenseStep>& steps() const { return steps_; }
  IntegratorStats stats;

  // Accepted step boundaries (0, t_1, ..., tau).
  std::vector<double> times() const {
    std::vector<double> ts;
    ts.reserve(steps_.size() + 1);
    for (const auto& s : steps_) ts.push_back(s.t0);
    ts.push_back(tau_);
    return ts;
  }

  Mat state_at(double t) const {
    if (steps_.empty()) throw NumericalError("Trajectory: empty");
    if (!(t >= -1e-12 * tau_ && t <= tau_ * (1.0 + 1e-12)))
      throw ConfigError("Trajectory: t outside [0, tau]");
    t = std::clamp(t, 0.0, tau_);
    std::size_t lo = 0, hi = steps_.size() - 1;
    while (lo < hi) {  // last step with t0 <= t
      const std::size_t mid = (lo + hi + 1) / 2;
      if (steps_[mid].t0 <= t)
        lo = mid;
      else
        hi = mid - 1;
    }
    const DenseStep& s = steps_[lo];
    const double th = std::clamp((t - s.t0) / s.h, 0.0, 1.0);
    const Vec y =
        s.rcont[0] +
        th * (s.rcont[1] +
              (1.0 - th) *
                  (s.rcont[2] + th * (s.rcont[3] + (1.0 - th) * s.rcont[4])));
    return hermitize(unvectorize(y));
  }

  void push_step(DenseStep s) { steps_.push_back(std::move(s)); }

 private:
  double tau_;
  int dim_;
  std::vector<DenseStep> steps_;
};

namespace detail {

// Dormand-Prince 5(4) tableau with the standard dense-output quartic.
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0,
                          d7 = 69997945.0 / 29380423.0;
};

}  // namespace detail

// Integrates d(vec rho)/dt = L(t / tau) vec(rho) from rho_init over [0, tau]
// with adaptive Dormand-Prince 5(4), PI step control, and dense output.
// Accepted states are re-Hermitized; trace and positivity are monitored and
// a breach beyond max(1e-9, 10 tol) / max(1e-8, 10 tol) raises an error.
inline Trajectory integrate(const Protocol& p, const Mat& rho_init,
                            double tol = 1e-10) {
  p.validate();
  if (!p.has_tau()) throw ConfigError("integrate: protocol tau must be set");
  if (!(tol > 0.0) || tol > 1e-2)
    throw ConfigError("integrate: tol must lie in (0, 1e-2]");
  if (rho_init.rows() != p.dim || rho_init.cols() != p.dim)
    throw ConfigError("integrate: rho_init has wrong dimension");
  if (!is_density_matrix(rho_init, 1e-10, 1e-10, -1e-8))
    throw ConfigError("integrate: rho_init is not a density matrix");

  using T = detail::Dopri5;
  const double tau = p.tau;
  const Eigen::Index n = rho_init.size();
  Trajectory traj(tau, p.dim);

  auto rhs = [&](double t, const Vec& y) -> Vec {
    ++traj.stats.rhs_evaluations;
    return p.liouvillian_at(t / tau) * y;
  };
  auto err_norm = [&](const Vec& e, const Vec& y0, const Vec& y1) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const double sc =
          tol * (1.0 + std::max(std::abs(y0(i)), std::abs(y1(i))));
      const double q = std::abs(e(i)) / sc;
      acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(e.size()));
  };

  Vec y = vectorize(hermitize(rho_init));
  double t = 0.0;
  Vec k1 = rhs(t, y);

  // Initial step: the standard curvature probe, capped at tau / 10.
  double h;
  {
    const double dny = y.norm(), dnf = k1.norm();
    double h0 = (dnf < 1e-10 || dny < 1e-10) ? 1e-6 * tau : 0.01 * dny / dnf;
    h0 = std::min(h0, 0.1 * tau);
    const Vec y1 = y + h0 * k1;
    const Vec f1 = rhs(h0, y1);
    const double der2 = (f1 - k1).norm() / h0;
    const double der12 = std::max(der2, dnf);
    const double h1 = der12 <= 1e-15 ? std::max(1e-6 * tau, h0 * 1e-3)
                                     : std::pow(0.01 / der12, 0.2);
    h = std::min({100.0 * h0, h1, 0.1 * tau});
  }

  constexpr double kSafe = 0.9, kFacc1 = 5.0, kFacc2 = 0.1;
  constexpr double kExpo1 = 0.2 - 0.04 * 0.75;  // 1/5 - beta * 0.75
  double facold = 1e-4;
  bool last_rejected = false;
  const double trace_tol = std::max(1e-9, 10.0 * tol);
  const double eig_floor = -std::max(1e-8, 10.0 * tol);

  Vec k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ynew(n);
  while (t < tau) {
    if (h < 1e-14 * tau)
      throw NumericalError(
          "integrate: step size underflow (stiff or singular protocol)");
    h = std::min(h, tau - t);
    const bool last = (t + h >= tau);

    k2 = rhs(t + T::c2 * h, Vec(y + h * (T::a21 * k1)));
    k3 = rhs(t + T::c3 * h, Vec(y + h * (T::a31 * k1 + T::a32 * k2)));
    k4 = rhs(t + T::c4 * h,
             Vec(y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3)));
    k5 = rhs(t + T::c5 * h, Vec(y + h * (T::a51 * k1 + T::a52 * k2 +
                                         T::a53 * k3 + T::a54 * k4)));
    k6 = rhs(t + h, Vec(y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 +
                                 T::a64 * k4 + T::a65 * k5)));
    ynew = y + h * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 +
                    T::b6 * k6);
    k7 = rhs(t + h, ynew);

    const Vec erry = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 +
                          T::e6 * k6 + T::e7 * k7);
    const double err = err_norm(erry, y, ynew);

    const double fac11 = std::pow(err, kExpo1);
    if (err <= 1.0) {
      // Accepted: assemble dense output, then advance.
      Trajectory::DenseStep s;
      s.t0 = t;
      s.h = h;
      const Vec dy = ynew - y;
      s.rcont[0] = y;
      s.rcont[1] = dy;
      s.rcont[2] = h * k1 - dy;
      s.rcont[3] = dy - h * k7 - s.rcont[2];
      s.rcont[4] = h * (T::d1 * k1 + T::d3 * k3 + T::d4 * k4 + T::d5 * k5 +
                        T::d6 * k6 + T::d7 * k7);
      traj.push_step(std::move(s));
      ++traj.stats.accepted;

      t = last ? tau : t + h;
      y = vectorize(hermitize(unvectorize(ynew)));
      k1 = k7;

      const Mat rho = unvectorize(y);
      if (std::abs(rho.trace() - Complex(1, 0)) > trace_tol)
        throw NumericalError("integrate: trace drifted beyond tolerance at t = " +
                             std::to_string(t));
      if (min_eigenvalue(rho) < eig_floor)
        throw NumericalError(
            "integrate: state lost positivity beyond tolerance at t = " +
            std::to_string(t));

      double fac = fac11 / std::pow(facold, 0.04);
      fac = std::clamp(fac / kSafe, kFacc2, kFacc1);
      double hnew = h / fac;
      if (last_rejected) hnew = std::min(hnew, h);
      h = hnew;
      facold = std::max(err, 1e-4);
      last_rejected = false;
    } else {
      ++traj.stats.rejected;
      h = h / std::min(kFacc1, fac11 / kSafe);
      last_rejected = true;
    }
  }
  return traj;
}

// Exact heat and work over one protocol run:
//   Q = int_0^tau tr( L_t[rho(t)] H(t/tau) ) dt,
//   W = (1/tau) int_0^tau tr( rho(t) dH/dt'(t/tau) ) dt.
// Composite Simpson on the dense output, refined by doubling from 2001 to at
// most 16001 points or until both integrals change by < 1e-9 relative.
struct HeatWork {
  double Q = 0.0;
  double W = 0.0;
};

inline HeatWork exact_heat_work(const Trajectory& traj, const Protocol& p) {
  p.validate();
  const double tau = traj.tau();

  auto hdot = [&](double tp) -> Mat {
    if (p.hamiltonian_dot_at) return p.hamiltonian_dot_at(tp);
    return stencil_derivative(
        [&](double s) { return Mat(p.hamiltonian_at(s)); }, tp, 1e-4, 5, 1);
  };
  auto q_integrand = [&](double t) {
    const double tp = t / tau;
    const Mat rho = traj.state_at(t);
    const Mat ldot = unvectorize(Vec(p.liouvillian_at(tp) * vectorize(rho)));
    return std::real((ldot * p.hamiltonian_at(tp)).trace());
  };
  auto w_integrand = [&](double t) {
    const double tp = t / tau;
    return std::real((traj.state_at(t) * hdot(tp)).trace()) / tau;
  };

  double Q = simpson(q_integrand, 0.0, tau, 2001);
  double W = simpson(w_integrand, 0.0, tau, 2001);
  for (int npts = 4001; npts <= 16001; npts = 2 * npts - 1) {
    const double Q2 = simpson(q_integrand, 0.0, tau, npts);
    const double W2 = simpson(w_integrand, 0.0, tau, npts);
    const bool done =
        std::abs(Q2 - Q) <= 1e-9 * std::max(std::abs(Q2), 1e-30) &&
        std::abs(W2 - W) <= 1e-9 * std::max(std::abs(W2), 1e-30);
    Q = Q2;
    W = W2;
    if (done) break;
  }
  return {Q, W};
}

}  // namespace slowdrive
