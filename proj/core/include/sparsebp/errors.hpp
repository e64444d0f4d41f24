#pragma once

#include <stdexcept>
#include <string>

namespace sparsebp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A factorization pivot fell below the tolerance; the matrix is not
// numerically positive definite.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

// An operation that assumes unit column norms was called on a dictionary
// whose columns are not normalized.
class NotNormalized : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class InvalidSparsity : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotASubgradient : public Error {
 public:
  using Error::Error;
};

class NotInvertible : public Error {
 public:
  using Error::Error;
};

class FuchsViolated : public Error {
 public:
  using Error::Error;
};

// A_I^t A_I (or A_{I*}^t A_{I*}) is numerically singular.
class GramSingular : public Error {
 public:
  using Error::Error;
};

class GuardExceeded : public Error {
 public:
  using Error::Error;
};

class BadShape : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparsebp
