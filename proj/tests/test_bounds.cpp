#include <doctest.h>

#include <cmath>

#include "sparsebp/bounds.hpp"
#include "sparsebp/errors.hpp"

using namespace sparsebp;

namespace {
const double kSqrt2 = std::sqrt(2.0);

Certificate synthetic_cert(double g, double ic, double d_norm) {
  Certificate c;
  c.invertible = true;
  c.gram_inv_spectral = g;
  c.ic = ic;
  c.d_norm = d_norm;
  return c;
}
}  // namespace

TEST_CASE("theorem1_constant values") {
  CHECK(theorem1_constant(0) == doctest::Approx(2.0 * kSqrt2).epsilon(1e-12));
  CHECK(theorem1_constant(1) ==
        doctest::Approx(2.0 * kSqrt2 + 8.0 * (2.0 + kSqrt2) / 3.0).epsilon(1e-12));
  CHECK(theorem1_constant(1) == doctest::Approx(11.9331).epsilon(1e-4));
  CHECK(theorem1_constant(2) == doctest::Approx(15.7042).epsilon(1e-4));
  for (int p = 1; p <= 100; ++p) {
    CHECK(theorem1_constant(p) > theorem1_constant(p - 1));
  }
}

TEST_CASE("l1_error_bound values") {
  CHECK(l1_error_bound(3, 0.0) == 0.0);
  CHECK(l1_error_bound(2, 3.0) == doctest::Approx(60.0).epsilon(1e-12));
  CHECK(l1_error_bound(8, 1.0) == doctest::Approx(184.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("prop1_bound values and errors") {
  CHECK(prop1_bound(synthetic_cert(1.0, 0.0, 2.0), 0.0, 1.0) == 0.0);

  // orthonormal case g=1, ic=0, d_norm=sqrt(p), nu=1: 2 eps (1 + 2 sqrt(p))
  for (int p : {1, 4, 9}) {
    const double eps = 0.3;
    CHECK(prop1_bound(synthetic_cert(1.0, 0.0, std::sqrt(double(p))), eps, 1.0) ==
          doctest::Approx(2.0 * eps * (1.0 + 2.0 * std::sqrt(double(p))))
              .epsilon(1e-12));
  }

  CHECK_THROWS_AS(prop1_bound(synthetic_cert(2.0, 1.0, 1.0), 0.1, 1.0),
                  FuchsViolated);
  Certificate singular;
  CHECK_THROWS_AS(prop1_bound(singular, 0.1, 1.0), NotInvertible);
}

TEST_CASE("prop1_bound reproduces the theorem constant for p = 1..100") {
  // g=2, ic=1/4, nu=1, d_norm=sqrt(2p) collapses to eps * C(p)
  for (int p = 1; p <= 100; ++p) {
    for (double eps : {1.0, 0.37}) {
      const double lhs =
          prop1_bound(synthetic_cert(2.0, 0.25, std::sqrt(2.0 * p)), eps, 1.0);
      const double rhs = eps * theorem1_constant(p);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs));
    }
  }
}

TEST_CASE("sparsity_threshold") {
  CHECK(sparsity_threshold(256, kSqrt2, 0.5) ==
        doctest::Approx(0.5 * 256.0 / (2.0 * std::log(256.0))).epsilon(1e-12));
  CHECK(sparsity_threshold(256, kSqrt2, 0.5) == doctest::Approx(11.54).epsilon(1e-3));
  CHECK(sparsity_threshold(100, 1.0, 0.0) == 0.0);
}

TEST_CASE("probability_floor") {
  CHECK(probability_floor(1) == 0.0);  // 1 - 4 = -3, clamped
  const double expected256 = 1.0 - 4.0 * std::pow(256.0, -2.0 * std::log(2.0));
  CHECK(probability_floor(256) == doctest::Approx(expected256).epsilon(1e-15));
  CHECK(probability_floor(256) == doctest::Approx(0.998165).epsilon(1e-5));
  CHECK(probability_floor(1024) == doctest::Approx(0.9997315).epsilon(1e-6));
}

TEST_CASE("prop2_floor") {
  // t huge: the exponential term vanishes
  const double limit = 1.0 - 2.0 * std::pow(256.0, -2.0 * std::log(2.0));
  CHECK(prop2_floor(256, 1e6, 0.02) == doctest::Approx(limit).epsilon(1e-12));

  const double lnm = std::log(256.0);
  const double expected = 1.0 - 2.0 * 256.0 * std::exp(-0.25 * 0.25 * lnm / (8.0 * 0.02 * 0.02)) -
                          2.0 * std::pow(256.0, -2.0 * std::log(2.0));
  CHECK(prop2_floor(256, 0.25, 0.02) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(prop2_floor(256, 0.25, 0.02) == doctest::Approx(0.99909).epsilon(1e-4));

  CHECK(prop2_floor(256, 0.25, 10.0) == 0.0);  // clamped
}

TEST_CASE("floors are nondecreasing in m and inside [0, 1)") {
  double prev_pf = 0.0, prev_p2 = 0.0;
  for (int m = 3; m <= 2048; m += 7) {
    const double pf = probability_floor(m);
    const double p2 = prop2_floor(m, 0.25, 0.02);
    CHECK(pf >= prev_pf);
    CHECK(p2 >= prev_p2 - 1e-15);
    CHECK(pf >= 0.0);
    CHECK(pf < 1.0);
    CHECK(p2 >= 0.0);
    CHECK(p2 < 1.0);
    prev_pf = pf;
    prev_p2 = p2;
  }
}

TEST_CASE("tropp_rhs") {
  const auto zero = tropp_rhs(256, 1, 0.0, 0.0);
  CHECK(zero.first == 0.0);
  CHECK(zero.second == 0.0);

  const auto [g, c] = tropp_rhs(256, 8, kSqrt2, 0.125);
  const double lnm = std::log(256.0);
  CHECK(g == doctest::Approx(30.0 * 0.125 * lnm +
                             13.0 * std::sqrt(2.0 * 8 * 2.0 * lnm / 256.0))
                 .epsilon(1e-12));
  CHECK(g == doctest::Approx(31.62).epsilon(1e-3));
  CHECK(c == doctest::Approx(4.0 * 0.125 * std::sqrt(lnm) +
                             std::sqrt(8 * 2.0 / 256.0))
                 .epsilon(1e-12));
  CHECK(c == doctest::Approx(1.427).epsilon(1e-3));
}

TEST_CASE("lemma_lw_tail") {
  CHECK(lemma_lw_tail(0.0, 0.5, 10) == 1.0);

  // t = kappa sqrt(2 ln(2|J|)) makes the bound exactly 1 before clamping
  const int J = 37;
  const double kappa = 0.3;
  const double t = kappa * std::sqrt(2.0 * std::log(2.0 * J));
  CHECK(lemma_lw_tail(t, kappa, J) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(lemma_lw_tail(0.5, 0.1, 100) ==
        doctest::Approx(200.0 * std::exp(-12.5)).epsilon(1e-12));
  CHECK(lemma_lw_tail(0.5, 0.1, 100) == doctest::Approx(7.45e-4).epsilon(1e-3));

  double prev = 2.0;
  for (double tt = 0.0; tt <= 1.0; tt += 0.01) {
    const double v = lemma_lw_tail(tt, 0.2, 50);
    CHECK(v <= prev + 1e-15);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("cortropp_condition") {
  CHECK(cortropp_condition(0.0, 0.0));
  CHECK(cortropp_condition(1.0 / 120.0, 0.0));  // exactly 1/4, non-strict
  CHECK_FALSE(cortropp_condition(0.01, 0.001));
  CHECK(cortropp_condition(kDefaultA0, kDefaultC0));
}

TEST_CASE("corollary1_epsilon") {
  CHECK(corollary1_epsilon(0.3, 0.0, kSqrt2) == doctest::Approx(0.3));
  CHECK(corollary1_epsilon(0.1, 2.0, kSqrt2) ==
        doctest::Approx(0.1 * (1.0 + 2.0 * kSqrt2)).epsilon(1e-12));
  CHECK(corollary1_epsilon(0.1, 2.0, kSqrt2) == doctest::Approx(0.3828).epsilon(1e-3));
  CHECK(corollary1_epsilon(0.0, 2.0, kSqrt2) == 0.0);
}

TEST_CASE("build_report populates all fields") {
  BoundParams params;
  params.m = 256;
  params.n = 128;
  params.p = 5;
  params.epsilon = 0.1;
  params.kappa = 0.3;
  params.C1 = 1.0;
  params.epsilon1 = 0.05;
  const Certificate cert = synthetic_cert(1.5, 0.4, 2.0);
  const BoundReport r = build_report(params, kSqrt2, 0.125, &cert);
  CHECK(r.theorem1_C == doctest::Approx(theorem1_constant(5)));
  CHECK(r.theorem1_l2_bound == doctest::Approx(0.1 * theorem1_constant(5)));
  CHECK(r.l1_bound == doctest::Approx(l1_error_bound(5, 0.1)));
  CHECK(r.prop1_rhs == doctest::Approx(prop1_bound(cert, 0.1, 1.0)));
  CHECK(r.probability_floor == doctest::Approx(probability_floor(256)));
  CHECK(r.prop2_floor == doctest::Approx(prop2_floor(256, 0.25, kDefaultC0)));
  CHECK(r.lw_tail == doctest::Approx(lemma_lw_tail(0.25, 0.3, 251)));
  CHECK(r.cortropp_ok);
  CHECK(r.corollary1_epsilon ==
        doctest::Approx(corollary1_epsilon(0.05, 1.0, kSqrt2)));
  CHECK_FALSE(r.small_m_warning);

  BoundParams tiny = params;
  tiny.m = 8;
  tiny.p = 2;
  const BoundReport rt = build_report(tiny, 1.0, 0.3, nullptr);
  CHECK(rt.small_m_warning);
  CHECK(std::isnan(rt.prop1_rhs));
}
