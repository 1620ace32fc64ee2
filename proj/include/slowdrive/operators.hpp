#pragma once

#include <cmath>

#include <Eigen/Eigenvalues>

#include "slowdrive/types.hpp"

namespace slowdrive {

// Basis convention: index 0 is the excited level, so H = (omega/2) sigma_z
// puts the excited state at +omega/2 and sigma_minus = |g><e| lowers energy.
// Units: hbar = k_B = 1 throughout.

inline const Mat& sigma_x() {
  static const Mat m = (Mat(2, 2) << 0, 1, 1, 0).finished();
  return m;
}

inline const Mat& sigma_y() {
  static const Mat m =
      (Mat(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  return m;
}

inline const Mat& sigma_z() {
  static const Mat m = (Mat(2, 2) << 1, 0, 0, -1).finished();
  return m;
}

inline const Mat& sigma_plus() {  // |e><g|
  static const Mat m = (Mat(2, 2) << 0, 1, 0, 0).finished();
  return m;
}

inline const Mat& sigma_minus() {  // |g><e|
  static const Mat m = (Mat(2, 2) << 0, 0, 1, 0).finished();
  return m;
}

inline Mat identity(Eigen::Index d) { return Mat::Identity(d, d); }

inline Mat hermitize(const Mat& X) { return 0.5 * (X + X.adjoint()); }

inline double hermiticity_defect(const Mat& X) {
  return (X - X.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Mat& X, double tol = 1e-12) {
  return X.rows() == X.cols() && hermiticity_defect(X) <= tol;
}

// Smallest eigenvalue of the Hermitian part of X.
inline double min_eigenvalue(const Mat& X) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(X), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline bool is_density_matrix(const Mat& X, double herm_tol = 1e-10,
                              double trace_tol = 1e-10,
                              double eig_floor = -1e-8) {
  if (X.rows() != X.cols()) return false;
  if (hermiticity_defect(X) > herm_tol) return false;
  if (std::abs(X.trace() - Complex(1, 0)) > trace_tol) return false;
  return min_eigenvalue(X) >= eig_floor;
}

// exp(-beta H) / Z, computed in the eigenbasis with the spectrum shifted so
// the largest Boltzmann weight is exactly 1 (no overflow for any beta > 0).
inline Mat gibbs_state(const Mat& H, double beta) {
  if (!(beta > 0.0)) throw ConfigError("gibbs_state: beta must be positive");
  if (!is_hermitian(H, 1e-12 * std::max(1.0, H.cwiseAbs().maxCoeff())))
    throw ConfigError("gibbs_state: H must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(H));
  const Eigen::VectorXd E = es.eigenvalues();
  Eigen::VectorXd w = (-beta * (E.array() - E.minCoeff())).exp();
  w /= w.sum();
  return es.eigenvectors() * w.cast<Complex>().asDiagonal() *
         es.eigenvectors().adjoint();
}

inline double expectation(const Mat& observable, const Mat& rho) {
  return std::real((observable * rho).trace());
}

}  // namespace slowdrive
