#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "sparsebp/dictionary.hpp"

namespace sparsebp {

struct SolverConfig {
  int max_iters = 50000;
  double primal_tol = 1e-9;        // relative iterate change
  double feasibility_tol = 1e-9;   // relative slack on ||Ax - y||_2 <= eps
  double rho_init = 1.0;           // penalty parameter
  double balance_ratio = 10.0;     // primal/dual residual balancing trigger
  double balance_scale = 2.0;
  int balance_every = 10;
  int polish_every = 50;           // refinement attempt cadence
  double support_threshold_scale = 1e-8;
  double kkt_tol = 1e-9;           // dual-certificate slack for refinement
  double lambda_bisection_tol = 1e-10;
  int oracle_max_sweeps = 200000;
};

enum class SolveStatus { Converged, MaxIters, Infeasible };

std::string to_string(SolveStatus s);

struct Solution {
  Eigen::VectorXd x_star;
  // ||A x* - y||_2; at convergence <= eps*(1 + feasibility_tol) up to the
  // fp noise of the measurement itself, O(eps_machine * ||y||)
  double residual_norm = 0.0;
  double l1_norm = 0.0;
  std::vector<int> support_star;   // |x*(i)| > support_threshold
  double support_threshold = 0.0;  // recorded for auditability
  double lambda = 0.0;             // penalized-form multiplier
  int iterations = 0;
  SolveStatus status = SolveStatus::MaxIters;
  bool polished = false;  // support-restricted refinement accepted
};

struct KKTReport {
  Eigen::VectorXd dual_vector;  // A^t u with u = (y - A x*) / lambda
  double max_offsupport_dual = 0.0;
  double onsupport_sign_error = 0.0;
  std::optional<double> implicit_eq_residual;
  bool gram_singular = false;
};

// min ||x||_1  s.t.  ||A x - y||_2 <= eps.
//
// Operator splitting on the constrained form: a soft-thresholding step on x
// alternates with Euclidean projection of the residual onto the eps-ball,
// with a scaled dual variable and residual-balanced penalty adaptation.
// A support-restricted refinement is attempted periodically; it is accepted
// only when the full KKT certificate holds, which certifies optimality.
//
// ||y||_2 <= eps returns x = 0 immediately. eps = 0 is accepted only when
// y is in range(A) within 1e-9 (otherwise status Infeasible).
Solution solve_bpdn(const Dictionary& A, const Eigen::VectorXd& y, double eps,
                    const SolverConfig& cfg = {});

// KKT/Fuchs verification at a converged solution with lambda > 0:
// u = (y - A x*) / lambda, the implicit equation residual
// || x*_{I*} - [ (A_{I*}^t A_{I*})^{-1} A_{I*}^t y
//               - lambda (A_{I*}^t A_{I*})^{-1} sign(x*_{I*}) ] ||_2
// is computed by explicit SPD solve on I*. A singular Gram on I* sets
// gram_singular instead of throwing.
KKTReport verify_kkt(const Dictionary& A, const Eigen::VectorXd& y, double eps,
                     const Solution& sol);

// Independent small-instance reference (m <= 12, GuardExceeded otherwise):
// exact coordinate-wise minimization of  0.5 ||Ax-y||^2 + lambda ||x||_1
// iterated to 1e-12 stationarity, with outer bisection on
// lambda in [0, ||A^t y||_inf] until ||A x(lambda) - y||_2 = eps.
// When `path` is given, every evaluated (lambda, residual) pair is appended.
Solution oracle_solve(const Dictionary& A, const Eigen::VectorXd& y,
                      double eps, const SolverConfig& cfg = {},
                      std::vector<std::pair<double, double>>* path = nullptr);

}  // namespace sparsebp
