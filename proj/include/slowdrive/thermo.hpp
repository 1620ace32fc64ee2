#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "slowdrive/perturbation.hpp"
#include "slowdrive/quadrature.hpp"

namespace slowdrive {

// Partition function, mean energy, and entropy of the Gibbs state of H.
struct EquilibriumQuantities {
  double Z = 0.0;
  double U0 = 0.0;
  double S0 = 0.0;
};

inline EquilibriumQuantities equilibrium_quantities(const Mat& H, double beta) {
  if (!(beta > 0.0)) throw ConfigError("equilibrium_quantities: beta > 0");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if (!is_hermitian(H, 1e-12 * scale))
    throw ConfigError("equilibrium_quantities: H must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(H), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd E = es.eigenvalues();
  const double Emin = E.minCoeff();
  double Zs = 0.0, Us = 0.0;
  for (Eigen::Index i = 0; i < E.size(); ++i) {
    const double w = std::exp(-beta * (E(i) - Emin));
    Zs += w;
    Us += E(i) * w;
  }
  EquilibriumQuantities q;
  q.U0 = Us / Zs;
  const double logZ = std::log(Zs) - beta * Emin;
  q.S0 = beta * q.U0 + logZ;
  q.Z = std::exp(logZ);
  return q;
}

namespace detail {

// Panel edges for coefficient quadratures: the protocol's breakpoints plus
// their images shifted by the finite-difference stencil lattice. A j-fold
// derivative chain mixes values up to 2 j stencil steps away from each
// breakpoint, so the integrand is smooth only between those images.
inline std::vector<double> coefficient_cuts(const Protocol& p, int j) {
  std::vector<double> cuts;
  const int reach = 2 * std::max(j, 0);
  for (double b : p.breakpoints)
    for (int k = -reach; k <= reach; ++k)
      cuts.push_back(b + k * kStencilStep);
  return cuts;
}

// d(rho_j)/dt' at fixed t': the steady-state derivative for j = 0, a 5-node
// stencil over the recursion above it otherwise.
inline Mat perturbation_term_dot(const Protocol& p, double t, int j) {
  if (j == 0) return steady_derivative_term(p, t);
  const auto xs = stencil_nodes(t, kStencilStep, 5);
  const auto w = fd_weights(t, xs, 1);
  Mat acc = w[0] * perturbation_term(p, xs[0], j);
  for (int k = 1; k < 5; ++k) acc += w[k] * perturbation_term(p, xs[k], j);
  return acc;
}

// Integrates with panel-doubling refinement: accepted once two consecutive
// resolutions agree within rel_tol. Schedules clamped at the frequency floor
// develop a boundary layer (the steady state steepens like 1/(1 - t') toward
// the clamp), which composite Gauss-Legendre only resolves once panels are
// finer than the layer, so refinement escalates from 64 up to 1024 panels
// before a genuine non-smoothness is reported.
template <typename F>
double refined_coefficient(F&& integrand, const Protocol& p, int j,
                           double rel_tol, const char* what) {
  const auto cuts = coefficient_cuts(p, j);
  double coarse = gauss_legendre_segmented(integrand, cuts, 64);
  double worst = 0.0;
  for (int panels = 128; panels <= 1024; panels *= 2) {
    const double fine = gauss_legendre_segmented(integrand, cuts, panels);
    worst = std::abs(fine - coarse);
    if (worst <= rel_tol * std::max(std::abs(fine), 1e-300)) return fine;
    coarse = fine;
  }
  throw NumericalError(std::string(what) +
                       ": quadrature refinement disagreement " +
                       std::to_string(worst) +
                       " exceeds tolerance (non-smooth schedule?)");
}

}  // namespace detail

// j-th heat coefficient Q_j = int_0^1 tr( H(t') d(rho_j)/dt' ) dt'.
// Composite Gauss-Legendre split at schedule breakpoints; the panel count
// escalates (64..1024) until two consecutive refinements agree to rel_tol,
// which resolves the boundary layers that clamped schedules produce.
inline double heat_coefficient(const Protocol& p, int j,
                               double rel_tol = 1e-8) {
  p.validate();
  if (j < 0) throw ConfigError("heat_coefficient: j >= 0 required");
  auto integrand = [&](double t) {
    return std::real(
        (p.hamiltonian_at(t) * detail::perturbation_term_dot(p, t, j))
            .trace());
  };
  return detail::refined_coefficient(integrand, p, j, rel_tol,
                                     "heat_coefficient");
}

// j-th work coefficient W_j = int_0^1 tr( dH/dt'(t') rho_j(t') ) dt'.
inline double work_coefficient(const Protocol& p, int j,
                               double rel_tol = 1e-8) {
  p.validate();
  if (j < 0) throw ConfigError("work_coefficient: j >= 0 required");
  auto hdot = [&](double t) -> Mat {
    if (p.hamiltonian_dot_at) return p.hamiltonian_dot_at(t);
    return stencil_derivative(
        [&](double s) { return Mat(p.hamiltonian_at(s)); }, t, 1e-4, 5, 1);
  };
  auto integrand = [&](double t) {
    return std::real(
        (hdot(t) * detail::perturbation_term(p, t, j)).trace());
  };
  return detail::refined_coefficient(integrand, p, j, rel_tol,
                                     "work_coefficient");
}

// Orders 0..J of the finite-time expansion of heat, work, and internal
// energy change; energy bookkeeping per order: dU_j = W_j + Q_j.
struct ThermoExpansion {
  std::vector<double> Q;   // Q[j]
  std::vector<double> W;   // W[j]
  std::vector<double> dU;  // tr(H rho_j) difference between the endpoints
};

inline ThermoExpansion thermo_expansion(const Protocol& p, int J,
                                        double rel_tol = 1e-8) {
  p.validate();
  if (J < 0) throw ConfigError("thermo_expansion: J >= 0 required");
  ThermoExpansion e;
  const Mat H0 = p.hamiltonian_at(0.0), H1 = p.hamiltonian_at(1.0);
  for (int j = 0; j <= J; ++j) {
    e.Q.push_back(heat_coefficient(p, j, rel_tol));
    e.W.push_back(work_coefficient(p, j, rel_tol));
    const Mat r0 = detail::perturbation_term(p, 0.0, j);
    const Mat r1 = detail::perturbation_term(p, 1.0, j);
    e.dU.push_back(std::real((H1 * r1).trace()) -
                   std::real((H0 * r0).trace()));
  }
  return e;
}

// Leading entropy production rate contribution -tr( rho_1 log rho_0 ) at
// fixed t'. rho_0 must be strictly positive (log of a singular steady state
// is reported, not regularized away).
inline double first_order_entropy(const Protocol& p, double t_prime) {
  p.validate();
  if (!(t_prime >= 0.0 && t_prime <= 1.0))
    throw ConfigError("first_order_entropy: t' must lie in [0, 1]");
  const Mat rho0 = hermitize(detail::steady_of(p, t_prime));
  const Mat rho1 = detail::perturbation_term(p, t_prime, 1);
  Eigen::SelfAdjointEigenSolver<Mat> es(rho0);
  const Eigen::VectorXd lam = es.eigenvalues();
  if (lam.minCoeff() <= 1e-300)
    throw NumericalError("first_order_entropy: singular steady state");
  Eigen::VectorXd loglam(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) loglam(i) = std::log(lam(i));
  const Mat logrho0 = es.eigenvectors() * loglam.cast<Complex>().asDiagonal() *
                      es.eigenvectors().adjoint();
  return -std::real((rho1 * logrho0).trace());
}

}  // namespace slowdrive
