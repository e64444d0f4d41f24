#include "sparsebp/certificates.hpp"

#include <cmath>
#include <memory>

#include "sparsebp/errors.hpp"
#include "sparsebp/linalg.hpp"

namespace sparsebp {

Certificate compute_certificate(const Dictionary& A, const SparseSignal& x0) {
  if (!A.is_normalized()) {
    throw NotNormalized("compute_certificate: dictionary is not normalized");
  }
  if (x0.support.empty()) {
    throw InvalidSparsity("compute_certificate: empty support");
  }
  if (x0.m != A.cols()) {
    throw DimensionMismatch("compute_certificate: signal dimension");
  }
  Certificate cert;
  const SubMatrix S(A, x0.support);
  const Eigen::MatrixXd AI = S.materialize();
  const Eigen::MatrixXd G = gram(S);
  std::unique_ptr<CholeskyFactor> factor;
  try {
    factor = std::make_unique<CholeskyFactor>(G);
  } catch (const NotPositiveDefinite&) {
    cert.invertible = false;
    return cert;
  }
  cert.invertible = true;
  const Eigen::VectorXd z = factor->solve(x0.signs);
  cert.d = AI * z;
  cert.d_norm = cert.d.norm();
  cert.s = A.entries().transpose() * cert.d;
  double ic = 0.0;
  std::vector<bool> on_support(A.cols(), false);
  for (int idx : x0.support) on_support[idx] = true;
  for (int j = 0; j < A.cols(); ++j) {
    if (!on_support[j]) ic = std::max(ic, std::abs(cert.s(j)));
  }
  cert.ic = ic;
  cert.gram_inv_spectral = largest_eigenvalue_sym(
      [&factor](const Eigen::VectorXd& v) { return factor->solve(v); },
      S.size());
  return cert;
}

bool is_subgradient(const Eigen::VectorXd& xi, const Eigen::VectorXd& x) {
  if (xi.size() != x.size()) {
    throw DimensionMismatch("is_subgradient: dimension mismatch");
  }
  if (xi.size() > 0 && xi.cwiseAbs().maxCoeff() > 1.0 + 1e-12) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0) {
      const double sign = x(i) > 0.0 ? 1.0 : -1.0;
      if (std::abs(xi(i) - sign) > 1e-12) return false;
    }
  }
  return true;
}

double bregman_distance(const Eigen::VectorXd& xi, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& x1) {
  if (x.size() != x1.size()) {
    throw DimensionMismatch("bregman_distance: dimension mismatch");
  }
  if (!is_subgradient(xi, x1)) {
    throw NotASubgradient("bregman_distance: xi is not a subgradient at x1");
  }
  return x.lpNorm<1>() - x1.lpNorm<1>() - xi.dot(x - x1);
}

bool fuchs_condition(const Certificate& cert) {
  if (!cert.invertible) {
    throw NotInvertible("fuchs_condition: Gram matrix is singular");
  }
  return cert.ic < 1.0;
}

}  // namespace sparsebp
