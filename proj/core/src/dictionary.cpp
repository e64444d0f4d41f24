#include "sparsebp/dictionary.hpp"

#include <cmath>

#include "sparsebp/errors.hpp"
#include "sparsebp/linalg.hpp"

namespace sparsebp {

Dictionary::Dictionary(Eigen::MatrixXd entries, std::string description)
    : entries_(std::move(entries)), description_(std::move(description)) {
  const auto n = entries_.rows();
  const auto m = entries_.cols();
  if (n < 1 || m < n) {
    throw BadShape("Dictionary: need m >= n >= 1, got n=" + std::to_string(n) +
                   " m=" + std::to_string(m));
  }
  if (!entries_.allFinite()) {
    throw BadShape("Dictionary: non-finite entries");
  }
  col_norms_ = entries_.colwise().norm();
  normalized_ = true;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (col_norms_(j) <= 0.0) {
      throw BadShape("Dictionary: zero column " + std::to_string(j));
    }
    if (std::abs(col_norms_(j) - 1.0) > 1e-9) normalized_ = false;
  }
}

Dictionary Dictionary::normalized(Eigen::MatrixXd entries,
                                  std::string description) {
  for (Eigen::Index j = 0; j < entries.cols(); ++j) {
    const double norm = entries.col(j).norm();
    if (norm <= 0.0) {
      throw BadShape("Dictionary::normalized: zero column " +
                     std::to_string(j));
    }
    entries.col(j) /= norm;
  }
  return Dictionary(std::move(entries), std::move(description));
}

Dictionary::Dictionary(const Dictionary& other)
    : entries_(other.entries_),
      col_norms_(other.col_norms_),
      normalized_(other.normalized_),
      description_(other.description_) {
  std::lock_guard<std::mutex> lock(other.cache_mutex_);
  spectral_cache_ = other.spectral_cache_;
  coherence_cache_ = other.coherence_cache_;
}

double Dictionary::spectral_norm() const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (!spectral_cache_) {
    spectral_cache_ = sparsebp::spectral_norm(entries_);
  }
  return *spectral_cache_;
}

double Dictionary::coherence() const {
  if (!normalized_) {
    throw NotNormalized("coherence: dictionary columns are not normalized");
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (!coherence_cache_) {
    const Eigen::MatrixXd G = entries_.transpose() * entries_;
    double mu = 0.0;
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < G.cols(); ++j) {
        mu = std::max(mu, std::abs(G(i, j)));
      }
    }
    coherence_cache_ = mu;
  }
  return *coherence_cache_;
}

bool Dictionary::coherence_criterion(double A0) const {
  if (A0 < 0.0) {
    throw BadShape("coherence_criterion: A0 must be nonnegative");
  }
  return coherence() <= A0 / std::log(static_cast<double>(cols()));
}

SubMatrix::SubMatrix(const Dictionary& parent, std::vector<int> indices)
    : parent_(&parent), indices_(std::move(indices)) {
  int prev = -1;
  for (int idx : indices_) {
    if (idx <= prev || idx >= parent.cols()) {
      throw BadShape("SubMatrix: indices must be strictly increasing in [0, m)");
    }
    prev = idx;
  }
}

SubMatrix SubMatrix::complement(const Dictionary& parent,
                                const std::vector<int>& indices) {
  std::vector<bool> member(parent.cols(), false);
  for (int idx : indices) {
    if (idx < 0 || idx >= parent.cols()) {
      throw BadShape("SubMatrix::complement: index out of range");
    }
    member[idx] = true;
  }
  std::vector<int> comp;
  comp.reserve(parent.cols() - indices.size());
  for (int j = 0; j < parent.cols(); ++j) {
    if (!member[j]) comp.push_back(j);
  }
  return SubMatrix(parent, std::move(comp));
}

Eigen::MatrixXd SubMatrix::materialize() const {
  Eigen::MatrixXd out(parent_->rows(), indices_.size());
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    out.col(k) = parent_->entries().col(indices_[k]);
  }
  return out;
}

Eigen::MatrixXd gram(const SubMatrix& S) {
  if (S.size() < 1) {
    throw BadShape("gram: empty index set");
  }
  const Eigen::MatrixXd AI = S.materialize();
  Eigen::MatrixXd G = AI.transpose() * AI;
  G = 0.5 * (G + G.transpose()).eval();
  return G;
}

double norm_1_to_2(const Eigen::MatrixXd& B) {
  if (B.size() == 0) return 0.0;
  return B.colwise().norm().maxCoeff();
}

}  // namespace sparsebp
