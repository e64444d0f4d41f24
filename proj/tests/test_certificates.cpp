#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "sparsebp/certificates.hpp"
#include "sparsebp/errors.hpp"
#include "sparsebp/rng.hpp"

using namespace sparsebp;

namespace {

Dictionary three_column_dictionary() {
  Eigen::MatrixXd A(2, 3);
  const double s = 1.0 / std::sqrt(2.0);
  A << 1.0, 0.0, s, 0.0, 1.0, s;
  return Dictionary(std::move(A));
}

SparseSignal make_signal(int m, std::vector<int> support,
                         std::vector<double> signs) {
  SparseSignal x;
  x.m = m;
  x.support = std::move(support);
  x.signs = Eigen::Map<const Eigen::VectorXd>(signs.data(), signs.size());
  x.magnitudes = Eigen::VectorXd::Ones(signs.size());
  return x;
}

Eigen::MatrixXd random_matrix(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd M(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) M(i, j) = rng.normal();
  }
  return M;
}

// determinant by recursive cofactor expansion (test oracle)
double det_cofactor(const Eigen::MatrixXd& M) {
  const int n = static_cast<int>(M.rows());
  if (n == 1) return M(0, 0);
  double det = 0.0;
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXd minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = M(r, c);
      }
    }
    det += (j % 2 == 0 ? 1.0 : -1.0) * M(0, j) * det_cofactor(minor);
  }
  return det;
}

// inverse via adjugate / determinant (test oracle)
Eigen::MatrixXd inverse_cofactor(const Eigen::MatrixXd& M) {
  const int n = static_cast<int>(M.rows());
  const double det = det_cofactor(M);
  Eigen::MatrixXd adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1.0;
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Eigen::MatrixXd minor(n - 1, n - 1);
        int rr = 0;
        for (int r = 0; r < n; ++r) {
          if (r == i) continue;
          int cc = 0;
          for (int c = 0; c < n; ++c) {
            if (c == j) continue;
            minor(rr, cc++) = M(r, c);
          }
          ++rr;
        }
        adj(j, i) = ((i + j) % 2 == 0 ? 1.0 : -1.0) * det_cofactor(minor);
      }
    }
  }
  return adj / det;
}

}  // namespace

TEST_CASE("certificate with opposite signs cancels on the third column") {
  const Dictionary A = three_column_dictionary();
  const Certificate cert =
      compute_certificate(A, make_signal(3, {0, 1}, {1.0, -1.0}));
  REQUIRE(cert.invertible);
  CHECK(cert.d(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cert.d(1) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(cert.ic == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fuchs_condition(cert));
}

TEST_CASE("certificate with equal signs exceeds 1 on the third column") {
  const Dictionary A = three_column_dictionary();
  const Certificate cert =
      compute_certificate(A, make_signal(3, {0, 1}, {1.0, 1.0}));
  REQUIRE(cert.invertible);
  CHECK(cert.ic == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_FALSE(fuchs_condition(cert));
}

TEST_CASE("square orthonormal dictionary: IC = 0, d_norm = sqrt(p)") {
  const Dictionary A(Eigen::MatrixXd::Identity(6, 6));
  const Certificate cert =
      compute_certificate(A, make_signal(6, {1, 3, 4}, {1.0, -1.0, 1.0}));
  REQUIRE(cert.invertible);
  CHECK(cert.ic == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cert.d_norm == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(cert.gram_inv_spectral == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("certificate invariants on random sign dictionaries") {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd raw(16, 32);
    for (int j = 0; j < 32; ++j) {
      for (int i = 0; i < 16; ++i) raw(i, j) = rng.sign();
    }
    const Dictionary A = Dictionary::normalized(std::move(raw));
    const int p = 1 + static_cast<int>(rng.uniform_below(6));
    const SparseSignal x =
        sample_generic_p_sparse(32, p, MagnitudeRule::ConstantOne, rng);
    const Certificate cert = compute_certificate(A, x);
    if (!cert.invertible) continue;

    const SubMatrix S(A, x.support);
    const Eigen::MatrixXd AI = S.materialize();

    // defining linear system A_I^t d = sign(x0_I)
    CHECK((AI.transpose() * cert.d - x.signs).lpNorm<Eigen::Infinity>() <=
          1e-10);

    // d lies in the column span of A_I (projector via QR, an independent route)
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(AI);
    const Eigen::MatrixXd Q =
        Eigen::MatrixXd(qr.householderQ()).leftCols(x.sparsity());
    CHECK((cert.d - Q * (Q.transpose() * cert.d)).norm() <= 1e-9);

    // d_norm^2 = <sign, G^{-1} sign> <= ||G^{-1}||_2 p
    CHECK(cert.d_norm * cert.d_norm <=
          cert.gram_inv_spectral * x.sparsity() * (1.0 + 1e-9));

    // s is a subgradient at x0 whenever the Fuchs condition holds
    CHECK(cert.s(x.support[0]) == doctest::Approx(x.signs(0)).epsilon(1e-9));
    if (cert.ic < 1.0) {
      CHECK(is_subgradient(cert.s, x.dense()));
    }
  }
}

TEST_CASE("certificate d against explicit cofactor-expansion inversion") {
  Rng rng(606);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_below(3));  // 3..5
    const int m = n + 1 + static_cast<int>(rng.uniform_below(8 - n));  // <= 8
    const Dictionary A = Dictionary::normalized(random_matrix(n, m, rng));
    const int p = 1 + static_cast<int>(rng.uniform_below(n));
    const SparseSignal x =
        sample_generic_p_sparse(m, p, MagnitudeRule::ConstantOne, rng);
    const Certificate cert = compute_certificate(A, x);
    if (!cert.invertible) continue;
    const Eigen::MatrixXd AI = SubMatrix(A, x.support).materialize();
    const Eigen::MatrixXd G = AI.transpose() * AI;
    const Eigen::VectorXd d_oracle = AI * (inverse_cofactor(G) * x.signs);
    CHECK((cert.d - d_oracle).norm() <= 1e-9);
  }
}

TEST_CASE("singular Gram yields invertible=false") {
  Eigen::MatrixXd raw(2, 3);
  raw << 1.0, 1.0, 0.0, 0.0, 0.0, 1.0;  // duplicate first column
  const Dictionary A(std::move(raw));
  const Certificate cert =
      compute_certificate(A, make_signal(3, {0, 1}, {1.0, 1.0}));
  CHECK_FALSE(cert.invertible);
  CHECK_THROWS_AS(fuchs_condition(cert), NotInvertible);
}

TEST_CASE("compute_certificate preconditions") {
  Eigen::MatrixXd raw(2, 3);
  raw << 2.0, 0.0, 1.0, 0.0, 3.0, 1.0;
  const Dictionary unnormalized(raw);
  CHECK_THROWS_AS(
      compute_certificate(unnormalized, make_signal(3, {0}, {1.0})),
      NotNormalized);
  const Dictionary A = three_column_dictionary();
  CHECK_THROWS_AS(compute_certificate(A, make_signal(3, {}, {})),
                  InvalidSparsity);
}

TEST_CASE("is_subgradient") {
  Eigen::VectorXd x(2), xi(2);
  x << 1.0, 0.0;

  xi << 1.0, 0.5;
  CHECK(is_subgradient(xi, x));

  xi << 0.9, 0.0;
  CHECK_FALSE(is_subgradient(xi, x));

  xi << 1.0, 1.5;
  CHECK_FALSE(is_subgradient(xi, x));

  Eigen::VectorXd y(3);
  y << 2.0, -3.0, 0.0;
  CHECK(is_subgradient(sign_vector(y), y));

  Eigen::VectorXd wrong_size(3);
  CHECK_THROWS_AS(is_subgradient(wrong_size, x), DimensionMismatch);
}

TEST_CASE("bregman_distance") {
  Eigen::VectorXd x1(2), xi(2), x(2);
  x1 << 1.0, 0.0;
  xi << 1.0, 0.5;
  x << 2.0, 2.0;
  CHECK(bregman_distance(xi, x, x1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bregman_distance(xi, x1, x1) == doctest::Approx(0.0));

  Eigen::VectorXd bad(2);
  bad << 0.5, 0.0;
  CHECK_THROWS_AS(bregman_distance(bad, x, x1), NotASubgradient);
}

TEST_CASE("bregman distance is nonnegative on random triples") {
  Rng rng(321);
  for (int trial = 0; trial < 1000; ++trial) {
    const int mdim = 2 + static_cast<int>(rng.uniform_below(6));
    Eigen::VectorXd x1(mdim), x(mdim), xi(mdim);
    for (int i = 0; i < mdim; ++i) {
      x1(i) = rng.uniform01() < 0.4 ? 0.0 : rng.normal();
      x(i) = rng.normal();
      // valid subgradient: sign on the support, uniform in [-1,1] off it
      xi(i) = x1(i) != 0.0 ? (x1(i) > 0 ? 1.0 : -1.0)
                           : 2.0 * rng.uniform01() - 1.0;
    }
    CHECK(bregman_distance(xi, x, x1) >= -1e-12);
  }
}

TEST_CASE("fuchs_condition is strict at IC = 1") {
  Certificate cert;
  cert.invertible = true;
  cert.ic = 1.0;
  CHECK_FALSE(fuchs_condition(cert));
  cert.ic = 0.0;
  CHECK(fuchs_condition(cert));
}
