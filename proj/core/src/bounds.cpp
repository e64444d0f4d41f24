#include "sparsebp/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "sparsebp/errors.hpp"

namespace sparsebp {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

double theorem1_constant(int p) {
  if (p < 0) throw BadShape("theorem1_constant: p < 0");
  return 2.0 * kSqrt2 + 8.0 * (2.0 + kSqrt2) * std::sqrt(double(p)) / 3.0;
}

double l1_error_bound(int p, double epsilon) {
  if (p < 1) throw BadShape("l1_error_bound: p < 1");
  if (epsilon < 0.0) throw BadShape("l1_error_bound: epsilon < 0");
  return epsilon / 3.0 * (14.0 * std::sqrt(2.0 * p) + 16.0 * p);
}

double prop1_bound(const Certificate& cert, double epsilon,
                   double norm_1to2_offsupport) {
  if (!cert.invertible) {
    throw NotInvertible("prop1_bound: Gram matrix is singular");
  }
  if (cert.ic >= 1.0) {
    throw FuchsViolated("prop1_bound: IC >= 1");
  }
  const double root_g = std::sqrt(cert.gram_inv_spectral);
  return 2.0 * epsilon *
         (root_g + cert.d_norm / (1.0 - cert.ic) *
                       (root_g * norm_1to2_offsupport + 1.0));
}

double sparsity_threshold(int m, double spectral_norm_A, double c0) {
  if (m < 2) throw BadShape("sparsity_threshold: m < 2");
  return c0 * m / (spectral_norm_A * spectral_norm_A * std::log(double(m)));
}

double probability_floor(int m) {
  if (m < 1) throw BadShape("probability_floor: m < 1");
  const double floor = 1.0 - 4.0 * std::pow(double(m), -2.0 * std::log(2.0));
  return std::max(0.0, floor);
}

double prop2_floor(int m, double t, double c0) {
  if (m < 2) throw BadShape("prop2_floor: m < 2");
  if (t <= 0.0 || c0 <= 0.0) throw BadShape("prop2_floor: need t > 0, c0 > 0");
  const double lnm = std::log(double(m));
  const double floor = 1.0 - 2.0 * m * std::exp(-t * t * lnm / (8.0 * c0 * c0)) -
                       2.0 * std::pow(double(m), -2.0 * std::log(2.0));
  return std::clamp(floor, 0.0, 1.0);
}

std::pair<double, double> tropp_rhs(int m, int p, double spectral_norm_A,
                                    double mu) {
  if (m < 2 || p < 1 || p > m) throw BadShape("tropp_rhs: bad m/p");
  const double lnm = std::log(double(m));
  const double a2 = spectral_norm_A * spectral_norm_A;
  const double gram = 30.0 * mu * lnm + 13.0 * std::sqrt(2.0 * p * a2 * lnm / m);
  const double cross = 4.0 * mu * std::sqrt(lnm) + std::sqrt(p * a2 / m);
  return {gram, cross};
}

double lemma_lw_tail(double t, double kappa, int J_size) {
  if (t < 0.0 || kappa <= 0.0 || J_size < 1) {
    throw BadShape("lemma_lw_tail: need t >= 0, kappa > 0, |J| >= 1");
  }
  const double tail = 2.0 * J_size * std::exp(-t * t / (2.0 * kappa * kappa));
  return std::min(1.0, tail);
}

bool cortropp_condition(double A0, double c0) {
  if (A0 < 0.0 || c0 < 0.0) throw BadShape("cortropp_condition: negative input");
  return 30.0 * A0 + 13.0 * std::sqrt(2.0 * c0) <= 0.25;
}

double corollary1_epsilon(double epsilon1, double C1, double spectral_norm_A) {
  if (epsilon1 < 0.0 || C1 < 0.0 || spectral_norm_A < 0.0) {
    throw BadShape("corollary1_epsilon: negative input");
  }
  return epsilon1 * (1.0 + C1 * spectral_norm_A);
}

BoundReport build_report(const BoundParams& params, double spectral_norm_A,
                         double mu, const Certificate* cert) {
  BoundReport r;
  r.theorem1_C = theorem1_constant(params.p);
  r.theorem1_l2_bound = r.theorem1_C * params.epsilon;
  if (params.p >= 1) {
    r.l1_bound = l1_error_bound(params.p, params.epsilon);
  }
  if (cert != nullptr && cert->invertible && cert->ic < 1.0) {
    r.prop1_rhs = prop1_bound(*cert, params.epsilon, 1.0);
  }
  if (params.m >= 2) {
    r.probability_floor = sparsebp::probability_floor(params.m);
    r.sparsity_threshold =
        sparsebp::sparsity_threshold(params.m, spectral_norm_A, params.c0);
    if (params.t > 0.0 && params.c0 > 0.0) {
      r.prop2_floor = sparsebp::prop2_floor(params.m, params.t, params.c0);
    }
    if (params.p >= 1 && params.p <= params.m) {
      std::tie(r.tropp_gram_rhs, r.tropp_cross_rhs) =
          tropp_rhs(params.m, params.p, spectral_norm_A, mu);
    }
    if (params.kappa > 0.0 && params.m > params.p) {
      r.lw_tail = lemma_lw_tail(params.t, params.kappa, params.m - params.p);
    }
  }
  r.cortropp_ok = cortropp_condition(params.A0, params.c0);
  r.corollary1_epsilon =
      corollary1_epsilon(params.epsilon1, params.C1, spectral_norm_A);
  r.small_m_warning = params.m < 16;
  return r;
}

}  // namespace sparsebp
