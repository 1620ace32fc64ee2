#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "slowdrive/types.hpp"

namespace slowdrive {

// 8-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 8> kGl8Nodes = {
    -0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975362};
inline constexpr std::array<double, 8> kGl8Weights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

// Composite 8-node Gauss-Legendre over [a, b] with uniform panels.
template <typename F>
double gauss_legendre(F&& f, double a, double b, int panels) {
  if (panels < 1) throw ConfigError("gauss_legendre: panels >= 1 required");
  double acc = 0.0;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    const double mid = lo + 0.5 * w;
    for (int k = 0; k < 8; ++k)
      acc += kGl8Weights[k] * f(mid + 0.5 * w * kGl8Nodes[k]);
  }
  return acc * 0.5 * w;
}

// Composite rule over [0, 1] with mandatory panel edges at `cuts` (interior
// points where the integrand is only piecewise smooth); `panels` sets the
// density of the uniform subdivision applied to each smooth segment.
template <typename F>
double gauss_legendre_segmented(F&& f, const std::vector<double>& cuts,
                                int panels) {
  std::vector<double> edges{0.0};
  for (double c : cuts)
    if (c > 1e-12 && c < 1.0 - 1e-12) edges.push_back(c);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return b - a < 1e-12; }),
              edges.end());
  edges.push_back(1.0);

  double acc = 0.0;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double len = edges[s + 1] - edges[s];
    const int n = std::max(1, static_cast<int>(std::lround(panels * len)));
    acc += gauss_legendre(f, edges[s], edges[s + 1], n);
  }
  return acc;
}

// Composite Simpson rule with n points (n odd, >= 3) on [a, b].
template <typename F>
double simpson(F&& f, double a, double b, int n) {
  if (n < 3 || n % 2 == 0)
    throw ConfigError("simpson: point count must be odd and >= 3");
  const double h = (b - a) / (n - 1);
  double acc = f(a) + f(b);
  for (int i = 1; i < n - 1; ++i)
    acc += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

}  // namespace slowdrive
