#pragma once

#include <Eigen/Core>
#include <limits>

#include "sparsebp/dictionary.hpp"
#include "sparsebp/sparse_model.hpp"

namespace sparsebp {

// Recovery certificate for a dictionary/signal pair:
//   d  = A_I (A_I^t A_I)^{-1} sign(x0_I)
//   s  = A^t d
//   ic = max_{j not in I} |s(j)|
// plus ||(A_I^t A_I)^{-1}||_2 and ||d||_2. When the Gram matrix is
// numerically singular only `invertible` is meaningful.
struct Certificate {
  bool invertible = false;
  Eigen::VectorXd d;  // length n
  Eigen::VectorXd s;  // length m
  double ic = std::numeric_limits<double>::quiet_NaN();
  double gram_inv_spectral = std::numeric_limits<double>::quiet_NaN();
  double d_norm = std::numeric_limits<double>::quiet_NaN();
};

// Throws NotNormalized if A is not normalized, InvalidSparsity on an empty
// support. A singular Gram matrix yields invertible = false, not a throw.
Certificate compute_certificate(const Dictionary& A, const SparseSignal& x0);

// xi is an l1 subgradient at x: ||xi||_inf <= 1 + 1e-12 and xi matches
// sign(x) on the support of x to 1e-12. Throws DimensionMismatch.
bool is_subgradient(const Eigen::VectorXd& xi, const Eigen::VectorXd& x);

// D_xi(x, x1) = ||x||_1 - ||x1||_1 - <xi, x - x1>; requires xi to be a
// subgradient at x1 (NotASubgradient otherwise). Nonnegative by convexity.
double bregman_distance(const Eigen::VectorXd& xi, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& x1);

// Fuchs condition ic < 1 (strict; ic == 1 fails). Throws NotInvertible.
bool fuchs_condition(const Certificate& cert);

}  // namespace sparsebp
