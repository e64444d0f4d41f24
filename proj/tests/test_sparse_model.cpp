#include <doctest.h>

#include <cmath>
#include <vector>

#include "sparsebp/errors.hpp"
#include "sparsebp/rng.hpp"
#include "sparsebp/sparse_model.hpp"

using namespace sparsebp;

TEST_CASE("Rng determinism and trial seeding") {
  Rng a(42), b(42);
  for (int k = 0; k < 100; ++k) {
    CHECK(a.uniform01() == b.uniform01());
  }
  Rng t = Rng::for_trial(100, 7);
  CHECK(t.seed() == (100ULL ^ 7ULL));
  Rng u(100ULL ^ 7ULL);
  CHECK(t.uniform01() == u.uniform01());
}

TEST_CASE("Rng uniform_below stays in range and covers values") {
  Rng rng(1);
  std::vector<int> hits(5, 0);
  for (int k = 0; k < 5000; ++k) {
    const auto v = rng.uniform_below(5);
    REQUIRE(v < 5);
    ++hits[static_cast<int>(v)];
  }
  for (int c : hits) CHECK(c > 800);
}

TEST_CASE("sample_generic_p_sparse basics") {
  Rng rng(3);
  CHECK_THROWS_AS(sample_generic_p_sparse(4, 0, MagnitudeRule::ConstantOne, rng),
                  InvalidSparsity);
  CHECK_THROWS_AS(sample_generic_p_sparse(4, 5, MagnitudeRule::ConstantOne, rng),
                  InvalidSparsity);

  // p = m forces the full support
  for (int t = 0; t < 10; ++t) {
    const SparseSignal x =
        sample_generic_p_sparse(6, 6, MagnitudeRule::ConstantOne, rng);
    CHECK(x.support == std::vector<int>{0, 1, 2, 3, 4, 5});
  }
}

TEST_CASE("dense view has exactly p nonzeros and matches signs") {
  Rng rng(4);
  const SparseSignal x =
      sample_generic_p_sparse(32, 5, MagnitudeRule::ConstantOne, rng);
  const Eigen::VectorXd dense = x.dense();
  int nnz = 0;
  for (int i = 0; i < 32; ++i) {
    if (dense(i) != 0.0) ++nnz;
  }
  CHECK(nnz == 5);
  const Eigen::VectorXd s = x.sign_dense();
  CHECK(sign_vector(dense) == s);
}

TEST_CASE("same seed gives bitwise-identical signals") {
  Rng a(99), b(99);
  const SparseSignal xa =
      sample_generic_p_sparse(64, 8, MagnitudeRule::LogUniform, a);
  const SparseSignal xb =
      sample_generic_p_sparse(64, 8, MagnitudeRule::LogUniform, b);
  CHECK(xa.support == xb.support);
  CHECK(xa.signs == xb.signs);
  CHECK(xa.magnitudes == xb.magnitudes);
}

TEST_CASE("index inclusion frequency p=1 m=2") {
  Rng rng(2024);
  int zero_count = 0;
  const int draws = 10000;
  for (int t = 0; t < draws; ++t) {
    const SparseSignal x =
        sample_generic_p_sparse(2, 1, MagnitudeRule::ConstantOne, rng);
    if (x.support[0] == 0) ++zero_count;
  }
  const double freq = double(zero_count) / draws;
  CHECK(freq >= 0.48);
  CHECK(freq <= 0.52);
}

TEST_CASE("index inclusion frequency p=3 m=8") {
  Rng rng(515);
  const int draws = 10000;
  std::vector<int> counts(8, 0);
  for (int t = 0; t < draws; ++t) {
    const SparseSignal x =
        sample_generic_p_sparse(8, 3, MagnitudeRule::ConstantOne, rng);
    for (int idx : x.support) ++counts[idx];
  }
  for (int i = 0; i < 8; ++i) {
    CHECK(std::abs(double(counts[i]) / draws - 3.0 / 8.0) <= 0.02);
  }
}

TEST_CASE("support uniformity chi-square and sign balance at 0.001") {
  Rng rng(7070);
  const int m = 16, p = 4, draws = 10000;
  std::vector<int> incl(m, 0), plus(m, 0);
  for (int t = 0; t < draws; ++t) {
    const SparseSignal x =
        sample_generic_p_sparse(m, p, MagnitudeRule::ConstantOne, rng);
    for (int k = 0; k < p; ++k) {
      ++incl[x.support[k]];
      if (x.signs(k) > 0) ++plus[x.support[k]];
    }
  }
  // goodness of fit of the inclusion counts against the uniform p/m rate;
  // chi2(df=15) 0.999 quantile
  const double expected = double(draws) * p / m;
  double chi2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double d = incl[i] - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 <= 37.69729821835383);
  // per-coordinate two-sided binomial test, normal approximation, z(0.9995)
  for (int i = 0; i < m; ++i) {
    const double n_i = incl[i];
    CHECK(std::abs(plus[i] - n_i / 2.0) <=
          3.2905267314919255 * std::sqrt(n_i) / 2.0);
  }
}

TEST_CASE("log-uniform magnitudes stay in [0.1, 10]") {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const SparseSignal x =
        sample_generic_p_sparse(16, 6, MagnitudeRule::LogUniform, rng);
    for (double mag : x.magnitudes) {
      CHECK(mag >= 0.1);
      CHECK(mag <= 10.0);
    }
  }
}

TEST_CASE("make_compressible") {
  Rng rng(21);
  const SparseSignal xs =
      sample_generic_p_sparse(32, 4, MagnitudeRule::ConstantOne, rng);

  Rng r0(5);
  const CompressibleSignal zero_tail = make_compressible(xs, 0.0, r0);
  CHECK(zero_tail.dense() == xs.dense());

  Rng r1(5);
  const CompressibleSignal c = make_compressible(xs, 0.5, r1);
  CHECK(c.tail.norm() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c.tail_bound == 0.5);

  Rng r2(5);
  const CompressibleSignal c2 = make_compressible(xs, 0.5, r2);
  CHECK(c.tail == c2.tail);

  CHECK_THROWS_AS(make_compressible(xs, -1.0, r2), BadShape);
}

TEST_CASE("sign_vector") {
  Eigen::VectorXd x(3);
  x << 2.0, -3.0, 0.0;
  Eigen::VectorXd s = sign_vector(x);
  CHECK(s(0) == 1.0);
  CHECK(s(1) == -1.0);
  CHECK(s(2) == 0.0);

  CHECK(sign_vector(Eigen::VectorXd::Zero(4)) == Eigen::VectorXd::Zero(4));

  Eigen::VectorXd tiny(2);
  tiny << -1e-300, 1e-300;
  const Eigen::VectorXd st = sign_vector(tiny);
  CHECK(st(0) == -1.0);
  CHECK(st(1) == 1.0);
}
