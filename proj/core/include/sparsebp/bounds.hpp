#pragma once

#include <limits>
#include <utility>

#include "sparsebp/certificates.hpp"

namespace sparsebp {

// Default admissible pair for 30*A0 + 13*sqrt(2*c0) <= 1/4, split evenly:
// 30*A0 = 1/8 and 13*sqrt(2*c0) = 1/8.
inline constexpr double kDefaultA0 = 1.0 / 240.0;
inline constexpr double kDefaultC0 = (1.0 / 104.0) * (1.0 / 104.0) / 2.0;

struct BoundParams {
  int m = 0;
  int n = 0;
  int p = 0;
  double epsilon = 0.0;
  double A0 = kDefaultA0;
  double c0 = kDefaultC0;
  double t = 0.25;        // tail threshold
  double kappa = 0.0;     // Hoeffding scale
  double q = 0.0;         // moment order; 0 means the default 2 ln m
  double C1 = 0.0;        // compressibility multiplier
  double epsilon1 = 0.0;  // compressibility noise level
  double lambda = 0.0;    // penalized-form multiplier (filled by the solver)
};

struct BoundReport {
  double theorem1_C = std::numeric_limits<double>::quiet_NaN();
  double theorem1_l2_bound = std::numeric_limits<double>::quiet_NaN();
  double l1_bound = std::numeric_limits<double>::quiet_NaN();
  double prop1_rhs = std::numeric_limits<double>::quiet_NaN();
  double probability_floor = std::numeric_limits<double>::quiet_NaN();
  double sparsity_threshold = std::numeric_limits<double>::quiet_NaN();
  double prop2_floor = std::numeric_limits<double>::quiet_NaN();
  double tropp_gram_rhs = std::numeric_limits<double>::quiet_NaN();
  double tropp_cross_rhs = std::numeric_limits<double>::quiet_NaN();
  double lw_tail = std::numeric_limits<double>::quiet_NaN();
  bool cortropp_ok = false;
  double corollary1_epsilon = std::numeric_limits<double>::quiet_NaN();
  // m below any plausible asymptotic regime; floors reported anyway
  bool small_m_warning = false;
};

// C = 2*sqrt(2) + 8*(2+sqrt(2))*sqrt(p)/3; p = 0 gives the formal 2*sqrt(2).
double theorem1_constant(int p);

// (epsilon/3) * (14*sqrt(2p) + 16*p)
double l1_error_bound(int p, double epsilon);

// 2*eps*( sqrt(g) + d_norm/(1-ic) * (sqrt(g)*nu + 1) ) with
// g = gram_inv_spectral, nu = ||A_{I^c}||_{1->2}. Throws NotInvertible when
// the certificate is singular, FuchsViolated when ic >= 1.
double prop1_bound(const Certificate& cert, double epsilon,
                   double norm_1to2_offsupport);

// c0 * m / (||A||_2^2 * ln m)
double sparsity_threshold(int m, double spectral_norm_A, double c0);

// 1 - 4 m^{-2 ln 2}, clamped below at 0
double probability_floor(int m);

// 1 - 2m exp(-t^2 ln m / (8 c0^2)) - 2 m^{-2 ln 2}, clamped to [0, 1]
double prop2_floor(int m, double t, double c0);

// { 30 mu ln m + 13 sqrt(2 p ||A||^2 ln m / m),
//   4 mu sqrt(ln m) + sqrt(p ||A||^2 / m) }
std::pair<double, double> tropp_rhs(int m, int p, double spectral_norm_A,
                                    double mu);

// min(1, 2|J| exp(-t^2 / (2 kappa^2)))
double lemma_lw_tail(double t, double kappa, int J_size);

// 30*A0 + 13*sqrt(2*c0) <= 1/4 (non-strict)
bool cortropp_condition(double A0, double c0);

// epsilon1 * (1 + C1 * ||A||_2)
double corollary1_epsilon(double epsilon1, double C1, double spectral_norm_A);

// Evaluates every closed-form bound for the given parameters. The
// certificate is optional; without one prop1_rhs stays NaN.
BoundReport build_report(const BoundParams& params, double spectral_norm_A,
                         double mu, const Certificate* cert = nullptr);

}  // namespace sparsebp
