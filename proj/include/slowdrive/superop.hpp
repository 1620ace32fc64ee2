#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "slowdrive/operators.hpp"
#include "slowdrive/types.hpp"

namespace slowdrive {

// Row-major vectorization: vec(X)[i*d + j] = X(i, j). For d = 2 a density
// matrix stacks as [rho_00, rho_01, rho_10, rho_11], and
// vec(A X B) = (A kron B^T) vec(X).

inline Vec vectorize(const Mat& X) {
  if (X.rows() != X.cols())
    throw ConfigError("vectorize: operator must be square");
  const Eigen::Index d = X.rows();
  Vec v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    v.segment(i * d, d) = X.row(i).transpose();
  return v;
}

inline Mat unvectorize(const Vec& v) {
  const auto d = static_cast<Eigen::Index>(
      std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size())
    throw ConfigError("unvectorize: length is not a perfect square");
  Mat X(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    X.row(i) = v.segment(i * d, d).transpose();
  return X;
}

// Superoperator of X -> A X.
inline Mat left_mul(const Mat& A) {
  if (A.rows() != A.cols()) throw ConfigError("left_mul: A must be square");
  return Eigen::kroneckerProduct(A, Mat::Identity(A.rows(), A.rows())).eval();
}

// Superoperator of X -> X B.
inline Mat right_mul(const Mat& B) {
  if (B.rows() != B.cols()) throw ConfigError("right_mul: B must be square");
  return Eigen::kroneckerProduct(Mat::Identity(B.rows(), B.rows()),
                                 B.transpose())
      .eval();
}

// Superoperator of rho -> -i [V, rho].
inline Mat hamiltonian_super(const Mat& V) {
  if (V.rows() != V.cols())
    throw ConfigError("hamiltonian_super: V must be square");
  const double scale = std::max(1.0, V.cwiseAbs().maxCoeff());
  if (hermiticity_defect(V) > 1e-12 * scale)
    throw ConfigError("hamiltonian_super: V must be Hermitian");
  return Complex(0, -1) * (left_mul(V) - right_mul(V));
}

// Superoperator of rho -> X rho X^dag - (1/2){X^dag X, rho}.
inline Mat dissipator_super(const Mat& X) {
  if (X.rows() != X.cols())
    throw ConfigError("dissipator_super: X must be square");
  const Mat XdX = X.adjoint() * X;
  return Eigen::kroneckerProduct(X, X.conjugate()).eval() -
         0.5 * (left_mul(XdX) + right_mul(XdX));
}

// Row functional with tr(X) = trace_functional(d) * vec(X).
inline Eigen::RowVectorXcd trace_functional(Eigen::Index d) {
  Eigen::RowVectorXcd t = Eigen::RowVectorXcd::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) t(i * d + i) = 1.0;
  return t;
}

// Thermal bath attached through a spectral density gamma(omega) =
// gamma0 * omega^alpha at inverse temperature beta.
struct BathSpec {
  double beta = 1.0;
  double gamma0 = 1.0;
  double alpha = 0.0;

  void validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta))
      throw ConfigError("BathSpec: beta must be positive and finite");
    if (!(gamma0 > 0.0) || !std::isfinite(gamma0))
      throw ConfigError("BathSpec: gamma0 must be positive and finite");
    if (!std::isfinite(alpha))
      throw ConfigError("BathSpec: alpha must be finite");
  }
};

// Bose-Einstein occupation 1/(exp(beta*omega) - 1) with guard rails: the
// occupation underflows to 0 for beta*omega > 700 and the classical
// divergence for beta*omega < 1e-12 is reported instead of returned.
inline double mean_occupation(double beta, double omega) {
  const double x = beta * omega;
  if (!(x > 0.0) || x < 1e-12)
    throw NumericalError(
        "mean_occupation: beta*omega < 1e-12 (occupation diverges)");
  if (x > 700.0) return 0.0;
  return 1.0 / std::expm1(x);
}

struct Eigenoperator {
  double omega = 0.0;  // Bohr frequency E_m - E_n
  Mat op;              // sum over |n><n| A |m><m| with E_m - E_n = omega
};

// Decomposition of a Hermitian coupling operator A into eigenoperators of H:
// A = sum_omega A(omega), [H, A(omega)] = -omega A(omega), A(-omega) =
// A(omega)^dag. Bohr frequencies closer than gap_tol (default 1e-9 times the
// spectral range of H) are merged. Components with vanishing operator content
// are dropped, except that the omega = 0 component is always reported, so a
// commuting coupling yields exactly one entry.
inline std::vector<Eigenoperator> eigenoperator_decomposition(
    const Mat& H, const Mat& A, double gap_tol = -1.0) {
  const double hscale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if (!is_hermitian(H, 1e-12 * hscale))
    throw ConfigError("eigenoperator_decomposition: H must be Hermitian");
  const double ascale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if (!is_hermitian(A, 1e-12 * ascale))
    throw ConfigError("eigenoperator_decomposition: A must be Hermitian");
  if (H.rows() != A.rows())
    throw ConfigError("eigenoperator_decomposition: dimension mismatch");

  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(H));
  const Eigen::VectorXd E = es.eigenvalues();
  const Mat U = es.eigenvectors();
  const Eigen::Index d = H.rows();
  if (gap_tol < 0.0) gap_tol = 1e-9 * (E.maxCoeff() - E.minCoeff());

  const Mat At = U.adjoint() * A * U;

  // Sort transition pairs by gap so merging is deterministic, then cluster
  // gaps onto the first member (the leader) of each group.
  std::vector<std::tuple<double, Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(d * d);
  for (Eigen::Index n = 0; n < d; ++n)
    for (Eigen::Index m = 0; m < d; ++m)
      pairs.emplace_back(E(m) - E(n), n, m);
  std::sort(pairs.begin(), pairs.end());

  std::vector<double> leaders;
  std::vector<Mat> blocks;  // accumulated in the eigenbasis
  for (const auto& [w, n, m] : pairs) {
    if (leaders.empty() || w - leaders.back() > gap_tol) {
      leaders.push_back(w);
      blocks.push_back(Mat::Zero(d, d));
    }
    blocks.back()(n, m) = At(n, m);
  }

  std::vector<Eigenoperator> out;
  const double drop_tol = 1e-14 * ascale;
  for (std::size_t g = 0; g < leaders.size(); ++g) {
    const bool is_zero_freq = std::abs(leaders[g]) <= gap_tol;
    if (!is_zero_freq && blocks[g].cwiseAbs().maxCoeff() <= drop_tol) continue;
    out.push_back({is_zero_freq ? 0.0 : leaders[g],
                   (U * blocks[g] * U.adjoint()).eval()});
  }
  if (out.empty())  // A = 0: keep the structural zero-frequency component
    out.push_back({0.0, Mat::Zero(d, d)});
  return out;
}

// Lindblad generator of a system H coupled to a thermal bath through A:
//   L = sum_{omega > 0} gamma(omega) [ (N+1) D[A(omega)] + N D[A(omega)^dag] ]
// with gamma(omega) = gamma0 * omega^alpha and N the mean occupation. The
// Gibbs state of H at the bath temperature is a fixed point by construction.
inline Mat thermal_liouvillian(const Mat& H, const Mat& A, const BathSpec& bath,
                               double gap_tol = -1.0) {
  bath.validate();
  const auto ops = eigenoperator_decomposition(H, A, gap_tol);
  const Eigen::Index d = H.rows();
  const double ascale = std::max(1.0, A.cwiseAbs().maxCoeff());
  Mat L = Mat::Zero(d * d, d * d);
  bool coupled = false;
  for (const auto& e : ops) {
    if (!(e.omega > 0.0)) continue;
    if (e.op.cwiseAbs().maxCoeff() <= 1e-14 * ascale) continue;
    coupled = true;
    const double rate = bath.gamma0 * std::pow(e.omega, bath.alpha);
    const double N = mean_occupation(bath.beta, e.omega);
    L += rate * ((N + 1.0) * dissipator_super(e.op) +
                 N * dissipator_super(e.op.adjoint()));
  }
  if (!coupled)
    throw ConfigError(
        "thermal_liouvillian: dissipationless coupling (A has no component at "
        "a nonzero Bohr frequency)");
  return L;
}

}  // namespace slowdrive
