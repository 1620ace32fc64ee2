#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "slowdrive/protocol.hpp"

namespace slowdrive {

// Projector onto traceless operators: vec(X) -> vec(X - tr(X) I / d).
inline Mat traceless_projector(Eigen::Index d) {
  if (d < 2) throw ConfigError("traceless_projector: d >= 2 required");
  Mat P = Mat::Identity(d * d, d * d);
  const Vec vI = vectorize(Mat(Mat::Identity(d, d)));
  P -= (vI * trace_functional(d)) / static_cast<double>(d);
  return P;
}

// Unique steady state of a relaxing generator: L[rho] = 0, tr(rho) = 1.
// The kernel must be one-dimensional (gap checked against 1e-8 times the
// largest entry of L) and its trace component must not vanish.
inline Mat steady_state(const Mat& L) {
  if (L.rows() != L.cols())
    throw ConfigError("steady_state: L must be square");
  const auto d = static_cast<Eigen::Index>(
      std::llround(std::sqrt(static_cast<double>(L.rows()))));
  if (d * d != L.rows())
    throw ConfigError("steady_state: L is not d^2 x d^2");
  const double scale = std::max(L.cwiseAbs().maxCoeff(), 1e-300);

  Eigen::ComplexEigenSolver<Mat> es(L);
  const Eigen::VectorXcd ev = es.eigenvalues();
  Eigen::Index i0 = 0, i1 = -1;
  for (Eigen::Index i = 1; i < ev.size(); ++i)
    if (std::abs(ev(i)) < std::abs(ev(i0))) i0 = i;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (i == i0) continue;
    if (i1 < 0 || std::abs(ev(i)) < std::abs(ev(i1))) i1 = i;
  }
  if (std::abs(ev(i0)) > 1e-8 * scale || std::abs(ev(i1)) <= 1e-8 * scale)
    throw NumericalError(
        "steady_state: degenerate kernel (zero eigenvalue missing or not "
        "simple)");

  const Vec v = es.eigenvectors().col(i0);
  Complex tr = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) tr += v(i * d + i);
  if (std::abs(tr) < 1e-10)
    throw NumericalError("steady_state: traceless kernel vector");
  const Mat rho = hermitize(unvectorize(Vec(v / tr)));
  if (min_eigenvalue(rho) < -1e-10)
    throw NumericalError("steady_state: kernel state not positive");
  return rho;
}

// Solves L[x] = y on the traceless subspace and returns the traceless
// solution; y must be traceless. Implemented as the bordered system
//   [ L        vec(I) ] [x ]   [vec(y)]
//   [ tr-row   0      ] [mu] = [  0   ],
// whose multiplier mu absorbs any residual trace component of y. One step of
// iterative refinement is applied; the result is accepted on a backward-error
// test so near-singular generators (heavily clamped schedules) still solve.
inline Mat projected_inverse_apply(const Mat& L, const Mat& y) {
  if (L.rows() != L.cols()) throw ConfigError("projected_inverse_apply: L square");
  const Eigen::Index d = y.rows();
  if (y.cols() != d || d * d != L.rows())
    throw ConfigError("projected_inverse_apply: dimension mismatch");
  const double ynorm = y.norm();
  if (std::abs(y.trace()) > 1e-10 * std::max(1.0, ynorm))
    throw NumericalError("projected_inverse_apply: y must be traceless");
  if (ynorm == 0.0) return Mat::Zero(d, d);

  const Eigen::Index n = d * d;
  Mat B = Mat::Zero(n + 1, n + 1);
  B.topLeftCorner(n, n) = L;
  B.topRightCorner(n, 1) = vectorize(Mat(Mat::Identity(d, d)));
  B.bottomLeftCorner(1, n) = trace_functional(d);
  Vec rhs = Vec::Zero(n + 1);
  rhs.head(n) = vectorize(y);

  Eigen::FullPivLU<Mat> lu(B);
  if (!lu.isInvertible())
    throw NumericalError(
        "projected_inverse_apply: degenerate kernel (bordered system "
        "singular)");
  Vec sol = lu.solve(rhs);
  sol += lu.solve(Vec(rhs - B * sol));  // one refinement pass

  const Vec x = sol.head(n);
  const double res = (L * x - rhs.head(n)).norm();
  const double bound = 1e-10 * (ynorm + L.norm() * x.norm());
  if (res > bound + 1e-300)
    throw NumericalError(
        "projected_inverse_apply: residual " + std::to_string(res) +
        " exceeds backward-error bound " + std::to_string(bound));
  return unvectorize(x);
}

namespace detail {

inline Mat steady_of(const Protocol& p, double t) {
  return p.steady_at ? Mat(p.steady_at(t)) : steady_state(p.liouvillian_at(t));
}

// Correction term rho_j at rescaled time t, built by alternating stencil
// derivatives and projected inversions; each derivative expands into a
// 5-node stencil, so the cost is O(5^j) generator solves.
inline Mat perturbation_term(const Protocol& p, double t, int j);

inline Mat steady_derivative_term(const Protocol& p, double t);

inline Mat perturbation_term(const Protocol& p, double t, int j) {
  if (j == 0) return steady_of(p, t);
  Mat dprev;
  if (j == 1) {
    dprev = steady_derivative_term(p, t);
  } else {
    const auto xs = stencil_nodes(t, kStencilStep, 5);
    const auto w = fd_weights(t, xs, 1);
    dprev = w[0] * perturbation_term(p, xs[0], j - 1);
    for (int k = 1; k < 5; ++k)
      dprev += w[k] * perturbation_term(p, xs[k], j - 1);
  }
  return projected_inverse_apply(p.liouvillian_at(t), dprev);
}

// First derivative of the steady state: the analytic hook where present,
// else a 4th-order 5-node stencil (h = 1e-4) refined once by Richardson.
inline Mat steady_derivative_term(const Protocol& p, double t) {
  if (p.steady_dot_at) return p.steady_dot_at(t);
  return richardson_derivative([&](double s) { return steady_of(p, s); }, t,
                               1e-4, 5, 1);
}

}  // namespace detail

// d^order/dt'^order of the instantaneous steady state. Uses the analytic
// hook when available (differentiating it for order > 1), else a 4th-order
// stencil with one Richardson refinement.
inline Mat steady_state_derivative(const Protocol& p, double t_prime,
                                   int order = 1) {
  p.validate();
  if (order < 1) throw ConfigError("steady_state_derivative: order >= 1");
  if (!(t_prime >= 0.0 && t_prime <= 1.0))
    throw ConfigError("steady_state_derivative: t' must lie in [0, 1]");
  if (order == 1)
    return hermitize(detail::steady_derivative_term(p, t_prime));
  if (p.steady_dot_at)
    return hermitize(richardson_derivative(
        [&](double s) { return Mat(p.steady_dot_at(s)); }, t_prime, 1e-4,
        (order - 1) + 4, order - 1));
  return hermitize(richardson_derivative(
      [&](double s) { return detail::steady_of(p, s); }, t_prime, 1e-4,
      order + 4, order));
}

// The terms rho_0, ..., rho_J of the slow-driving expansion at fixed t'.
struct PerturbativeState {
  double t_prime = 0.0;
  std::vector<Mat> terms;
  int order() const { return static_cast<int>(terms.size()) - 1; }
};

inline PerturbativeState perturbation_terms(const Protocol& p, double t_prime,
                                            int J) {
  p.validate();
  if (J < 0) throw ConfigError("perturbation_terms: J >= 0 required");
  if (!(t_prime >= 0.0 && t_prime <= 1.0))
    throw ConfigError("perturbation_terms: t' must lie in [0, 1]");
  PerturbativeState s;
  s.t_prime = t_prime;
  s.terms.reserve(J + 1);
  for (int j = 0; j <= J; ++j)
    s.terms.push_back(hermitize(detail::perturbation_term(p, t_prime, j)));
  return s;
}

// Truncated slow-driving solution sum_j rho_j(t') / tau^j. The zeroth order
// needs no duration; higher orders require p.tau.
inline Mat slow_solution(const Protocol& p, double t_prime, int J) {
  if (J >= 1 && !p.has_tau())
    throw ConfigError("slow_solution: protocol tau required for J >= 1");
  const PerturbativeState s = perturbation_terms(p, t_prime, J);
  Mat acc = s.terms[0];
  double tp = 1.0;
  for (int j = 1; j <= J; ++j) {
    tp *= p.tau;
    acc += s.terms[j] / tp;
  }
  return acc;
}

}  // namespace slowdrive
