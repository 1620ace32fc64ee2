#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include <slowdrive/protocol.hpp>
#include <slowdrive/perturbation.hpp>

#include "helpers.hpp"

using namespace slowdrive;
using Catch::Matchers::ContainsSubstring;
using testutil::max_abs_diff;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("driven qubit: fixed point closed form", "[protocol]") {
  const double omega = 1.0, delta0 = 1.0;
  const BathSpec bath{1.0, 1.0, 0.0};
  const Protocol p = driven_qubit_protocol(omega, delta0, bath);
  REQUIRE(p.dim == 2);
  REQUIRE_FALSE(p.has_tau());

  const double N = mean_occupation(bath.beta, omega);
  const double b = 1.0 + 2.0 * N;

  // Undriven instant t' = 1/2: thermal populations, no coherence.
  Mat therm(2, 2);
  therm << N / b, 0, 0, (1.0 + N) / b;
  REQUIRE(max_abs_diff(p.steady_at(0.5), therm) < 1e-14);
  REQUIRE(p.hamiltonian_at(0.5).cwiseAbs().maxCoeff() < 1e-15);
  REQUIRE(max_abs_diff(p.hamiltonian_dot_at(0.5),
                       Mat(-0.5 * delta0 * pi * sigma_x())) < 1e-13);

  // Across the ramp the hook must agree with the kernel of L(t').
  for (double t : {0.0, 0.15, 0.4, 0.77, 1.0}) {
    const double r = delta0 * std::cos(pi * t);  // drive over damping rate
    const double z2 = 1.0 / (b * b + 2.0 * r * r);
    Mat ss(2, 2);
    ss << z2 * (N * b + r * r), Complex(0, -r * z2), Complex(0, r * z2),
        z2 * ((1.0 + N) * b + r * r);
    REQUIRE(max_abs_diff(p.steady_at(t), ss) < 1e-13);
    REQUIRE(max_abs_diff(steady_state(p.liouvillian_at(t)), ss) < 1e-12);
  }

  REQUIRE_NOTHROW(validate_relaxing(p));
  REQUIRE_THROWS_AS(driven_qubit_protocol(-1.0, 1.0, bath), ConfigError);
  REQUIRE_THROWS_AS(
      driven_qubit_protocol(1.0, std::nan(""), bath), ConfigError);
}

TEST_CASE("isotherm: steady hooks are Gibbs states", "[protocol]") {
  const BathSpec bath{1.3, 0.7, 1.0};
  const Protocol p = qubit_isotherm_protocol(
      [](double t) { return 1.5 + 0.9 * std::cos(pi * t); }, bath, 50.0,
      [](double t) { return -0.9 * pi * std::sin(pi * t); });
  REQUIRE(p.has_tau());
  REQUIRE(p.tau == 50.0);
  REQUIRE(p.breakpoints.empty());  // schedule stays well above the floor

  for (double t : {0.0, 0.21, 0.5, 0.83, 1.0}) {
    REQUIRE(max_abs_diff(p.steady_at(t),
                         gibbs_state(p.hamiltonian_at(t), bath.beta)) <
            1e-14);
    const double z = -std::tanh(0.5 * bath.beta * (1.5 + 0.9 * std::cos(pi * t)));
    REQUIRE(p.steady_at(t)(0, 0).real() ==
            Catch::Approx(0.5 * (1.0 + z)).epsilon(1e-13));
  }
  REQUIRE_NOTHROW(validate_relaxing(p));
}

TEST_CASE("isotherm: frequency floor and breakpoint detection", "[protocol]") {
  const BathSpec bath{2.0, 1.0, 0.0};
  const Protocol p = qubit_isotherm_protocol(
      [](double t) { return 1.0 + std::cos(pi * t); }, bath,
      std::numeric_limits<double>::quiet_NaN(),
      [](double t) { return -pi * std::sin(pi * t); });

  // sup omega = 2, so the floor sits at 2e-6 and is crossed once.
  const double t_star = std::acos(2e-6 - 1.0) / pi;
  REQUIRE(p.breakpoints.size() == 1);
  REQUIRE(std::abs(p.breakpoints[0] - t_star) < 1e-10);

  // At t' = 1 the bare schedule would vanish; the clamp keeps H finite and
  // freezes its derivative.
  REQUIRE(p.hamiltonian_at(1.0)(0, 0).real() == Catch::Approx(1e-6));
  REQUIRE(p.hamiltonian_dot_at(1.0).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE_NOTHROW(validate_relaxing(p));
}

TEST_CASE("isotherm: schedule derivative is inferred when not supplied",
          "[protocol]") {
  const BathSpec bath{1.3, 0.7, 1.0};
  const Protocol p = qubit_isotherm_protocol(
      [](double t) { return 1.5 + 0.9 * std::cos(pi * t); }, bath);
  double worst = 0.0;
  for (int k = 0; k <= 40; ++k) {
    const double t = k / 40.0;
    const Mat expected = Mat(-0.45 * pi * std::sin(pi * t) * sigma_z());
    worst = std::max(worst, max_abs_diff(p.hamiltonian_dot_at(t), expected));
  }
  REQUIRE(worst < 1e-9);
}

TEST_CASE("isotherm: invalid schedules are rejected", "[protocol]") {
  const BathSpec bath{1.0, 1.0, 0.0};
  REQUIRE_THROWS_WITH(
      qubit_isotherm_protocol([](double t) { return std::cos(pi * t); },
                              bath),
      ContainsSubstring("finite and >= 0"));
  REQUIRE_THROWS_WITH(
      qubit_isotherm_protocol([](double) { return 0.0; }, bath),
      ContainsSubstring("vanishes identically"));
  REQUIRE_THROWS_AS(qubit_isotherm_protocol({}, bath), ConfigError);
  REQUIRE_THROWS_AS(
      qubit_isotherm_protocol([](double) { return 1.0; }, bath,
                              std::numeric_limits<double>::quiet_NaN(), {},
                              1.5),
      ConfigError);
}

TEST_CASE("reverse mirrors hooks, negates rates, flips breakpoints",
          "[protocol]") {
  const BathSpec bath{1.3, 0.7, 1.0};
  const Protocol p = qubit_isotherm_protocol(
      [](double t) { return 1.0 + std::cos(pi * t); }, bath, 40.0,
      [](double t) { return -pi * std::sin(pi * t); });
  const Protocol r = reverse(p);
  REQUIRE(r.tau == p.tau);
  REQUIRE(r.breakpoints.size() == p.breakpoints.size());
  REQUIRE(std::abs(r.breakpoints[0] - (1.0 - p.breakpoints[0])) < 1e-14);

  for (double t : {0.0, 0.3, 0.64, 1.0}) {
    REQUIRE(max_abs_diff(r.liouvillian_at(t), p.liouvillian_at(1.0 - t)) == 0.0);
    REQUIRE(max_abs_diff(r.hamiltonian_at(t), p.hamiltonian_at(1.0 - t)) == 0.0);
    REQUIRE(max_abs_diff(r.steady_at(t), p.steady_at(1.0 - t)) == 0.0);
    REQUIRE(max_abs_diff(r.hamiltonian_dot_at(t),
                         Mat(-p.hamiltonian_dot_at(1.0 - t))) == 0.0);
    REQUIRE(max_abs_diff(r.steady_dot_at(t),
                         Mat(-p.steady_dot_at(1.0 - t))) == 0.0);
  }

  // Double reversal evaluates hooks at 1 - (1 - t), equal to t only up to
  // rounding, so compare with a tight tolerance rather than bitwise.
  const Protocol rr = reverse(r);
  for (double t : {0.1, 0.5, 0.9}) {
    REQUIRE(max_abs_diff(rr.steady_at(t), p.steady_at(t)) < 1e-14);
    REQUIRE(max_abs_diff(rr.steady_dot_at(t), p.steady_dot_at(t)) < 1e-13);
  }
}

TEST_CASE("protocol validation catches malformed setups", "[protocol]") {
  Protocol p;
  REQUIRE_THROWS_WITH(p.validate(),
                      ContainsSubstring("liouvillian_at and hamiltonian_at"));
  p.liouvillian_at = [](double) { return Mat(Mat::Zero(4, 4)); };
  p.hamiltonian_at = [](double) { return Mat(Mat::Zero(2, 2)); };
  REQUIRE_NOTHROW(p.validate());
  p.dim = 1;
  REQUIRE_THROWS_WITH(p.validate(), ContainsSubstring("dim >= 2"));
  p.dim = 2;
  p.tau = -3.0;
  REQUIRE_THROWS_WITH(p.validate(), ContainsSubstring("tau must be positive"));
}

TEST_CASE("validate_relaxing rejects non-decaying generators", "[protocol]") {
  const BathSpec bath{1.0, 1.0, 0.0};
  Protocol p = driven_qubit_protocol(1.0, 0.5, bath);

  Protocol flipped = p;
  const auto base = p.liouvillian_at;
  flipped.liouvillian_at = [base](double t) { return Mat(-base(t)); };
  REQUIRE_THROWS_AS(validate_relaxing(flipped), NumericalError);

  Protocol unitary = p;
  unitary.liouvillian_at = [](double) {
    return hamiltonian_super(Mat(0.5 * sigma_x()));
  };
  REQUIRE_THROWS_WITH(validate_relaxing(unitary),
                      ContainsSubstring("not simple"));

  REQUIRE_THROWS_AS(validate_relaxing(p, 0), ConfigError);
}
