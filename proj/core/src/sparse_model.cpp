#include "sparsebp/sparse_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsebp/errors.hpp"

namespace sparsebp {

Eigen::VectorXd SparseSignal::dense() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < sparsity(); ++k) {
    x(support[k]) = signs(k) * magnitudes(k);
  }
  return x;
}

Eigen::VectorXd SparseSignal::sign_dense() const {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < sparsity(); ++k) {
    s(support[k]) = signs(k);
  }
  return s;
}

std::vector<int> SparseSignal::complement() const {
  std::vector<bool> member(m, false);
  for (int idx : support) member[idx] = true;
  std::vector<int> comp;
  comp.reserve(m - support.size());
  for (int j = 0; j < m; ++j) {
    if (!member[j]) comp.push_back(j);
  }
  return comp;
}

SparseSignal sample_generic_p_sparse(int m, int p, MagnitudeRule rule,
                                     Rng& rng) {
  if (p < 1 || p > m) {
    throw InvalidSparsity("sample_generic_p_sparse: need 1 <= p <= m, got p=" +
                          std::to_string(p) + " m=" + std::to_string(m));
  }
  // partial Fisher-Yates: first p entries are a uniform p-subset
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  for (int k = 0; k < p; ++k) {
    const auto j =
        k + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(m - k)));
    std::swap(idx[k], idx[j]);
  }
  SparseSignal x;
  x.m = m;
  x.support.assign(idx.begin(), idx.begin() + p);
  std::sort(x.support.begin(), x.support.end());
  x.signs.resize(p);
  for (int k = 0; k < p; ++k) x.signs(k) = rng.sign();
  x.magnitudes.resize(p);
  switch (rule) {
    case MagnitudeRule::ConstantOne:
      x.magnitudes.setOnes();
      break;
    case MagnitudeRule::LogUniform:
      for (int k = 0; k < p; ++k) {
        x.magnitudes(k) = std::pow(10.0, -1.0 + 2.0 * rng.uniform01());
      }
      break;
  }
  return x;
}

CompressibleSignal make_compressible(const SparseSignal& xs,
                                     double tail_energy, Rng& rng) {
  if (tail_energy < 0.0) {
    throw BadShape("make_compressible: tail_energy must be nonnegative");
  }
  CompressibleSignal c;
  c.sparse_part = xs;
  c.tail_bound = tail_energy;
  Eigen::VectorXd r(xs.m);
  for (int i = 0; i < xs.m; ++i) r(i) = rng.normal();
  const double norm = r.norm();
  if (tail_energy == 0.0 || norm == 0.0) {
    c.tail = Eigen::VectorXd::Zero(xs.m);
  } else {
    c.tail = r * (tail_energy / norm);
  }
  return c;
}

Eigen::VectorXd sign_vector(const Eigen::VectorXd& x) {
  Eigen::VectorXd s(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    s(i) = x(i) > 0.0 ? 1.0 : (x(i) < 0.0 ? -1.0 : 0.0);
  }
  return s;
}

}  // namespace sparsebp
