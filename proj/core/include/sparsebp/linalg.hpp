#pragma once

#include <Eigen/Core>
#include <functional>

namespace sparsebp {

// Cholesky factorization G = L L^t with pivot tolerance
// 1e-12 * max diagonal. Throws NotPositiveDefinite when a pivot falls at or
// below the tolerance; failure is reported, never regularized.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(const Eigen::MatrixXd& G);

  int dim() const { return static_cast<int>(l_.rows()); }

  // Solves G z = rhs (two triangular solves plus one refinement step).
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  // Same, one column at a time conceptually: G Z = RHS.
  Eigen::MatrixXd solve_many(const Eigen::MatrixXd& rhs) const;

 private:
  Eigen::MatrixXd l_;
  Eigen::MatrixXd g_;  // kept for the refinement step
};

// One-shot G z = rhs through CholeskyFactor.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& G, const Eigen::VectorXd& rhs);

struct PowerIterOptions {
  double tol = 1e-10;    // relative Rayleigh-quotient tolerance
  int max_iters = 10000;
};

// Largest eigenvalue of a symmetric positive semidefinite operator given as
// v -> apply(v), by power iteration from the normalized all-ones vector
// (restarted once with a perturbed start if the Rayleigh quotient stagnates
// at zero). Throws ConvergenceFailure past max_iters.
double largest_eigenvalue_sym(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
    int dim, const PowerIterOptions& opts = {});

// ||B||_2 (largest singular value) by power iteration on B^t B.
// Throws std::invalid_argument on a zero matrix.
double spectral_norm(const Eigen::MatrixXd& B, const PowerIterOptions& opts = {});

}  // namespace sparsebp
