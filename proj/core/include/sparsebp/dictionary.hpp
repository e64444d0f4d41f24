#pragma once

#include <Eigen/Core>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace sparsebp {

// Dense n x m measurement matrix A (overcomplete m > n in the usual
// setting; square orthonormal dictionaries are accepted too) with cached
// column norms and lazily computed spectral norm ||A||_2 and coherence.
class Dictionary {
 public:
  // Takes the entries as-is. Throws BadShape unless m >= n >= 1 and all
  // entries are finite; throws BadShape on a zero column.
  explicit Dictionary(Eigen::MatrixXd entries, std::string description = "");

  // Rescales every column to unit Euclidean norm first.
  static Dictionary normalized(Eigen::MatrixXd entries,
                               std::string description = "");

  Dictionary(const Dictionary& other);
  Dictionary& operator=(const Dictionary&) = delete;
  Dictionary(Dictionary&&) = default;

  int rows() const { return static_cast<int>(entries_.rows()); }
  int cols() const { return static_cast<int>(entries_.cols()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  Eigen::VectorXd column(int j) const { return entries_.col(j); }
  const Eigen::VectorXd& col_norms() const { return col_norms_; }
  const std::string& description() const { return description_; }

  // true iff every column norm is within 1e-9 of 1
  bool is_normalized() const { return normalized_; }

  // ||A||_2 by power iteration; cached after the first call.
  double spectral_norm() const;

  // mu(A) = max_{i != j} |<a_i, a_j>|; throws NotNormalized if the
  // normalized flag is false. Cached after the first call.
  double coherence() const;

  // mu(A) <= A0 / ln m
  bool coherence_criterion(double A0) const;

 private:
  Eigen::MatrixXd entries_;
  Eigen::VectorXd col_norms_;
  bool normalized_ = false;
  std::string description_;

  mutable std::mutex cache_mutex_;
  mutable std::optional<double> spectral_cache_;
  mutable std::optional<double> coherence_cache_;
};

// A view of the columns of a Dictionary selected by a strictly increasing
// index set (the support I or its complement).
class SubMatrix {
 public:
  // Throws BadShape unless the indices are strictly increasing and in [0, m).
  SubMatrix(const Dictionary& parent, std::vector<int> indices);

  static SubMatrix complement(const Dictionary& parent,
                              const std::vector<int>& indices);

  const Dictionary& parent() const { return *parent_; }
  const std::vector<int>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }

  // n x |I| dense copy of the selected columns
  Eigen::MatrixXd materialize() const;

 private:
  const Dictionary* parent_;
  std::vector<int> indices_;
};

// A_I^t A_I, exactly symmetric (averaged with its transpose). |I| >= 1.
Eigen::MatrixXd gram(const SubMatrix& S);

// ||B||_{1->2} = max_i ||b_i||_2 over columns
double norm_1_to_2(const Eigen::MatrixXd& B);

}  // namespace sparsebp
