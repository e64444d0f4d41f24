#pragma once

#include <Eigen/Core>
#include <vector>

#include "sparsebp/rng.hpp"

namespace sparsebp {

enum class MagnitudeRule {
  ConstantOne,  // every nonzero has magnitude 1
  LogUniform,   // magnitudes log-uniform on [0.1, 10]
};

// A p-sparse vector in R^m given by its support, signs and magnitudes.
struct SparseSignal {
  int m = 0;
  std::vector<int> support;    // sorted, distinct, in [0, m)
  Eigen::VectorXd signs;       // length p, entries in {-1, +1}
  Eigen::VectorXd magnitudes;  // length p, positive

  int sparsity() const { return static_cast<int>(support.size()); }

  // dense x with x(i) = sign * magnitude on I, exactly 0 off I
  Eigen::VectorXd dense() const;

  // +-1 on the support, 0 elsewhere
  Eigen::VectorXd sign_dense() const;

  std::vector<int> complement() const;
};

// x^1 = x^s + r with ||r||_2 <= tail_bound
struct CompressibleSignal {
  SparseSignal sparse_part;
  Eigen::VectorXd tail;
  double tail_bound = 0.0;

  Eigen::VectorXd dense() const { return sparse_part.dense() + tail; }
};

// Generic p-sparse model: support uniform over p-subsets of {0..m-1}
// (partial Fisher-Yates), signs independent uniform on {-1,+1}, magnitudes
// per rule. Throws InvalidSparsity unless 1 <= p <= m.
SparseSignal sample_generic_p_sparse(int m, int p, MagnitudeRule rule,
                                     Rng& rng);

// Tail r uniform on the sphere of radius tail_energy (Gaussian rescaled).
CompressibleSignal make_compressible(const SparseSignal& xs,
                                     double tail_energy, Rng& rng);

// Entrywise sign with exact-zero preservation.
Eigen::VectorXd sign_vector(const Eigen::VectorXd& x);

}  // namespace sparsebp
