#include <catch2/catch_amalgamated.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <slowdrive/superop.hpp>

#include "helpers.hpp"

using namespace slowdrive;
using Catch::Matchers::ContainsSubstring;
using testutil::max_abs_diff;

TEST_CASE("vectorize uses row-major layout and round-trips", "[superop]") {
  Mat X(2, 2);
  X << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0);
  const Vec v = vectorize(X);
  REQUIRE(v(0) == Complex(1, 0));
  REQUIRE(v(1) == Complex(2, 0));  // row 0, column 1
  REQUIRE(v(2) == Complex(3, 0));
  REQUIRE(v(3) == Complex(4, 0));
  REQUIRE(max_abs_diff(unvectorize(v), X) == 0.0);

  std::mt19937 rng(11);
  const Mat Y = testutil::random_matrix(rng, 3);
  REQUIRE(max_abs_diff(unvectorize(vectorize(Y)), Y) == 0.0);

  REQUIRE_THROWS_AS(vectorize(Mat(Mat::Zero(2, 3))), ConfigError);
  REQUIRE_THROWS_AS(unvectorize(Vec(Vec::Zero(5))), ConfigError);
}

TEST_CASE("left/right multiplication superoperators realize sandwiches",
          "[superop]") {
  std::mt19937 rng(12);
  const Mat A = testutil::random_matrix(rng, 3);
  const Mat B = testutil::random_matrix(rng, 3);
  const Mat X = testutil::random_matrix(rng, 3);
  const Vec lhs = Vec(left_mul(A) * right_mul(B) * vectorize(X));
  REQUIRE((lhs - vectorize(Mat(A * X * B))).cwiseAbs().maxCoeff() < 1e-13);
  // Left and right factors act on different tensor slots, so they commute.
  REQUIRE(max_abs_diff(Mat(left_mul(A) * right_mul(B)),
                       Mat(right_mul(B) * left_mul(A))) < 1e-13);
}

TEST_CASE("hamiltonian_super generates -i[V, .]", "[superop]") {
  const Vec out = Vec(hamiltonian_super(sigma_z()) * vectorize(sigma_x()));
  // [sz, sx] = 2i sy, so the generator sends sx to 2 sy.
  REQUIRE((out - vectorize(Mat(2.0 * sigma_y()))).cwiseAbs().maxCoeff() <
          1e-14);

  Mat V(2, 2);
  V << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
  REQUIRE_THROWS_WITH(hamiltonian_super(V),
                      ContainsSubstring("must be Hermitian"));
}

TEST_CASE("dissipator_super matches its defining sandwich form", "[superop]") {
  // Decay channel acting on the excited population: D[s-](|e><e|) = -sz.
  Mat exc = Mat::Zero(2, 2);
  exc(0, 0) = 1.0;
  const Vec out = Vec(dissipator_super(sigma_minus()) * vectorize(exc));
  REQUIRE((out - vectorize(Mat(-sigma_z()))).cwiseAbs().maxCoeff() < 1e-14);

  std::mt19937 rng(13);
  const Mat X = testutil::random_matrix(rng, 3);
  const Mat rho = testutil::random_density(rng, 3);
  const Mat direct = X * rho * X.adjoint() -
                     0.5 * (X.adjoint() * X * rho + rho * X.adjoint() * X);
  const Vec via_super = Vec(dissipator_super(X) * vectorize(rho));
  REQUIRE((via_super - vectorize(direct)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("generators annihilate the trace functional", "[superop]") {
  std::mt19937 rng(14);
  const Mat H = testutil::random_hermitian(rng, 3);
  const Mat X = testutil::random_matrix(rng, 3);
  const Eigen::RowVectorXcd tr = trace_functional(3);
  REQUIRE((tr * hamiltonian_super(H)).cwiseAbs().maxCoeff() < 1e-13);
  REQUIRE((tr * dissipator_super(X)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("eigenoperator decomposition on a qubit", "[superop]") {
  const double w0 = 1.7;
  const Mat H = 0.5 * w0 * sigma_z();

  const auto ops = eigenoperator_decomposition(H, sigma_x());
  REQUIRE(ops.size() == 3);
  REQUIRE(ops[0].omega == Catch::Approx(-w0));
  REQUIRE(ops[1].omega == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(ops[2].omega == Catch::Approx(w0));
  // sx = s+ + s-; lowering the energy by w0 is the s+ sandwich <g|sx|e>.
  REQUIRE(max_abs_diff(ops[0].op, sigma_plus()) < 1e-14);
  REQUIRE(ops[1].op.cwiseAbs().maxCoeff() < 1e-14);
  REQUIRE(max_abs_diff(ops[2].op, sigma_minus()) < 1e-14);

  const auto id_ops = eigenoperator_decomposition(H, identity(2));
  REQUIRE(id_ops.size() == 1);
  REQUIRE(id_ops[0].omega == 0.0);
  REQUIRE(max_abs_diff(id_ops[0].op, identity(2)) < 1e-14);

  const auto free_ops =
      eigenoperator_decomposition(Mat(Mat::Zero(2, 2)), sigma_x());
  REQUIRE(free_ops.size() == 1);
  REQUIRE(free_ops[0].omega == 0.0);
  REQUIRE(max_abs_diff(free_ops[0].op, sigma_x()) < 1e-14);
}

TEST_CASE("eigenoperators are complete and pair under conjugation",
          "[superop]") {
  std::mt19937 rng(15);
  for (int d : {3, 4}) {
    const Mat H = testutil::random_hermitian(rng, d);
    const Mat A = testutil::random_hermitian(rng, d);
    const auto ops = eigenoperator_decomposition(H, A);

    Mat sum = Mat::Zero(d, d);
    for (const auto& e : ops) sum += e.op;
    REQUIRE(max_abs_diff(sum, A) < 1e-12);

    for (const auto& e : ops) {
      bool found = false;
      for (const auto& f : ops) {
        if (std::abs(f.omega + e.omega) < 1e-10 &&
            max_abs_diff(f.op, e.op.adjoint()) < 1e-12) {
          found = true;
          break;
        }
      }
      REQUIRE(found);
    }
  }

  REQUIRE_THROWS_AS(eigenoperator_decomposition(sigma_plus(), sigma_x()),
                    ConfigError);
  REQUIRE_THROWS_AS(eigenoperator_decomposition(sigma_z(), sigma_plus()),
                    ConfigError);
}

TEST_CASE("thermal qubit generator matches the two-channel form", "[superop]") {
  const double w0 = 1.3, beta = 0.9, g0 = 0.7, alpha = 1.4;
  const Mat L = thermal_liouvillian(Mat(0.5 * w0 * sigma_z()), sigma_x(),
                                    BathSpec{beta, g0, alpha});
  const double rate = g0 * std::pow(w0, alpha);
  const double N = mean_occupation(beta, w0);
  const Mat manual = rate * ((N + 1.0) * dissipator_super(sigma_minus()) +
                             N * dissipator_super(sigma_plus()));
  REQUIRE(max_abs_diff(L, manual) < 1e-13);
}

TEST_CASE("thermal generator fixes the Gibbs state", "[superop]") {
  std::mt19937 rng(16);
  const BathSpec bath{1.1, 0.8, 1.3};
  for (int d : {3, 4}) {
    for (int rep = 0; rep < 3; ++rep) {
      const Mat H = testutil::random_hermitian(rng, d);
      const Mat A = testutil::random_hermitian(rng, d);
      const Mat L = thermal_liouvillian(H, A, bath);
      const double scale = L.cwiseAbs().maxCoeff();
      const Vec resid = Vec(L * vectorize(gibbs_state(H, bath.beta)));
      REQUIRE(resid.cwiseAbs().maxCoeff() < 1e-9 * scale);
    }
  }
}

TEST_CASE("thermal generator produces a trace/positivity preserving semigroup",
          "[superop]") {
  const double w0 = 1.3, beta = 0.9;
  const Mat H = 0.5 * w0 * sigma_z();
  const Mat L = thermal_liouvillian(H, sigma_x(), BathSpec{beta, 0.7, 1.4});
  const Mat E = Mat(0.7 * L).exp();

  REQUIRE((Eigen::RowVectorXcd(trace_functional(2) * E) - trace_functional(2))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  const Mat g = gibbs_state(H, beta);
  REQUIRE(max_abs_diff(unvectorize(Vec(E * vectorize(g))), g) < 1e-12);

  std::mt19937 rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    const Mat rho = testutil::random_density(rng, 2);
    const Mat out = unvectorize(Vec(E * vectorize(rho)));
    REQUIRE(min_eigenvalue(out) > -1e-12);
  }
}

TEST_CASE("spectral-density exponent turns uniform rescaling into a prefactor",
          "[superop]") {
  // With rates gamma0 * |omega|^alpha, scaling H -> lam H at temperature
  // lam / beta multiplies the whole generator by lam^alpha.
  std::mt19937 rng(18);
  const BathSpec bath{1.1, 0.8, 1.3};
  for (int d : {2, 3, 4}) {
    const Mat H = (d == 2) ? Mat(0.5 * sigma_z())
                           : testutil::random_hermitian(rng, d);
    const Mat A = (d == 2) ? sigma_x() : testutil::random_hermitian(rng, d);
    const Mat L = thermal_liouvillian(H, A, bath);
    const double scale = L.cwiseAbs().maxCoeff();
    for (double lam : {0.5, 2.0}) {
      const Mat Ls = thermal_liouvillian(
          Mat(lam * H), A, BathSpec{bath.beta / lam, bath.gamma0, bath.alpha});
      REQUIRE(max_abs_diff(Ls, Mat(std::pow(lam, bath.alpha) * L)) <
              1e-10 * scale);
    }
  }
}

TEST_CASE("coupling that commutes with H is rejected", "[superop]") {
  REQUIRE_THROWS_WITH(
      thermal_liouvillian(Mat(0.5 * sigma_z()), sigma_z(),
                          BathSpec{1.0, 1.0, 0.0}),
      ContainsSubstring("dissipationless"));
}

TEST_CASE("mean occupation handles extreme arguments", "[superop]") {
  REQUIRE(mean_occupation(1.0, 1.0) ==
          Catch::Approx(1.0 / std::expm1(1.0)).epsilon(1e-14));
  REQUIRE(mean_occupation(1.0, 800.0) == 0.0);
  REQUIRE_THROWS_AS(mean_occupation(1.0, 0.0), NumericalError);
  REQUIRE_THROWS_AS(mean_occupation(1.0, 1e-14), NumericalError);
}

TEST_CASE("bath specification validates its fields", "[superop]") {
  REQUIRE_NOTHROW((BathSpec{1.0, 1.0, 0.0}.validate()));
  REQUIRE_THROWS_AS((BathSpec{-1.0, 1.0, 0.0}.validate()), ConfigError);
  REQUIRE_THROWS_AS((BathSpec{0.0, 1.0, 0.0}.validate()), ConfigError);
  REQUIRE_THROWS_AS((BathSpec{1.0, 0.0, 0.0}.validate()), ConfigError);
  REQUIRE_THROWS_AS(
      (BathSpec{1.0, 1.0, std::numeric_limits<double>::infinity()}.validate()),
      ConfigError);
}
