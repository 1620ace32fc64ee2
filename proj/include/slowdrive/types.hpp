#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace slowdrive {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;  // d x d operators and d^2 x d^2 superoperators
using Vec = Eigen::VectorXcd;  // vectorized operators

// Invalid parameters or malformed configuration. CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated numerical precondition, convergence failure, or invariant breach.
// CLI maps this to exit code 2.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace slowdrive
