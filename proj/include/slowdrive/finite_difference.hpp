#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "slowdrive/types.hpp"

namespace slowdrive {

// Default step for the interior stencils used by the perturbation recursion.
inline constexpr double kStencilStep = 1e-3;

// Fornberg weights for the m-th derivative at x0 from arbitrary nodes xs.
inline std::vector<double> fd_weights(double x0, const std::vector<double>& xs,
                                      int m) {
  const int n = static_cast<int>(xs.size());
  if (m < 0 || n < m + 1)
    throw ConfigError("fd_weights: need at least m + 1 nodes");
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

// n nodes with step h centered on t, shifted to stay inside [0, 1].
inline std::vector<double> stencil_nodes(double t, double h, int n) {
  const int half = (n - 1) / 2;
  double lo = t - half * h;
  if (lo < 0.0)
    lo = 0.0;
  else if (t + half * h > 1.0)
    lo = 1.0 - (n - 1) * h;
  std::vector<double> xs(n);
  for (int k = 0; k < n; ++k) xs[k] = lo + h * k;
  return xs;
}

// order-th derivative of a matrix-valued function on [0, 1] from an n-node
// stencil of step h (one-sided automatically near the edges).
template <typename F>
Mat stencil_derivative(F&& f, double t, double h, int n, int order = 1) {
  const auto xs = stencil_nodes(t, h, n);
  const auto w = fd_weights(t, xs, order);
  Mat acc = w[0] * f(xs[0]);
  for (int k = 1; k < n; ++k) acc += w[k] * f(xs[k]);
  return acc;
}

// Same, refined once by Richardson extrapolation. With n = order + 4 nodes
// the raw stencil error is O(h^4), so (16 D(h/2) - D(h)) / 15 is O(h^6).
template <typename F>
Mat richardson_derivative(F&& f, double t, double h, int n, int order = 1) {
  const Mat coarse = stencil_derivative(f, t, h, n, order);
  const Mat fine = stencil_derivative(f, t, 0.5 * h, n, order);
  return (16.0 * fine - coarse) / 15.0;
}

// Scalar counterparts used for schedule derivatives.
template <typename F>
double scalar_stencil_derivative(F&& f, double t, double h, int n,
                                 int order = 1) {
  const auto xs = stencil_nodes(t, h, n);
  const auto w = fd_weights(t, xs, order);
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += w[k] * f(xs[k]);
  return acc;
}

template <typename F>
double scalar_richardson_derivative(F&& f, double t, double h, int n,
                                    int order = 1) {
  const double coarse = scalar_stencil_derivative(f, t, h, n, order);
  const double fine = scalar_stencil_derivative(f, t, 0.5 * h, n, order);
  return (16.0 * fine - coarse) / 15.0;
}

// Derivative of a smooth scalar function on [0, 1], returned as a callable.
// The function is interpolated once at Chebyshev-Lobatto nodes and the
// interpolant is differentiated exactly, so the result is itself smooth --
// unlike pointwise difference quotients, whose rounding noise gets amplified
// when higher-order stencils are stacked on top of them.
inline std::function<double(double)> chebyshev_derivative(
    const std::function<double(double)>& f, int degree = 128) {
  const int n = degree;
  if (n < 2) throw ConfigError("chebyshev_derivative: degree >= 2 required");
  // Interpolate f((x + 1) / 2) = sum_k a[k] T_k(x) through x_j = cos(pi j/n).
  std::vector<double> fx(n + 1);
  for (int j = 0; j <= n; ++j)
    fx[j] = f(0.5 * (std::cos(M_PI * j / n) + 1.0));
  std::vector<double> a(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    double s = 0.5 * (fx[0] + (k % 2 == 0 ? fx[n] : -fx[n]));
    for (int j = 1; j < n; ++j) s += fx[j] * std::cos(M_PI * k * j / n);
    a[k] = 2.0 * s / n;
  }
  a[0] *= 0.5;
  a[n] *= 0.5;
  // Coefficients of the derivative series, b[k-1] = b[k+1] + 2k a[k].
  std::vector<double> b(n + 1, 0.0);
  for (int k = n; k >= 1; --k)
    b[k - 1] = (k + 1 <= n - 1 ? b[k + 1] : 0.0) + 2.0 * k * a[k];
  b[0] *= 0.5;
  b.resize(n);
  // d/dt = 2 d/dx on [0, 1]; evaluate with Clenshaw recurrence.
  return [b](double t) {
    const double x = 2.0 * t - 1.0;
    double u1 = 0.0, u2 = 0.0;
    for (int k = static_cast<int>(b.size()) - 1; k >= 1; --k) {
      const double u = 2.0 * x * u1 - u2 + b[k];
      u2 = u1;
      u1 = u;
    }
    return 2.0 * (x * u1 - u2 + b[0]);
  };
}

}  // namespace slowdrive
