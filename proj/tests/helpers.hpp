#pragma once

#include <random>

#include <slowdrive/types.hpp>
#include <slowdrive/operators.hpp>

namespace testutil {

inline double max_abs_diff(const slowdrive::Mat& A, const slowdrive::Mat& B) {
  return (A - B).cwiseAbs().maxCoeff();
}

inline slowdrive::Mat random_matrix(std::mt19937& rng, int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  slowdrive::Mat M(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      M(i, k) = slowdrive::Complex(u(rng), u(rng));
  return M;
}

inline slowdrive::Mat random_hermitian(std::mt19937& rng, int d) {
  return slowdrive::hermitize(random_matrix(rng, d));
}

inline slowdrive::Mat random_density(std::mt19937& rng, int d) {
  const slowdrive::Mat M = random_matrix(rng, d);
  slowdrive::Mat rho = M * M.adjoint() +
                       0.1 * slowdrive::Mat::Identity(d, d);
  rho /= rho.trace().real();
  return rho;
}

}  // namespace testutil
