#include "sparsebp/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "sparsebp/errors.hpp"

namespace sparsebp {

CholeskyFactor::CholeskyFactor(const Eigen::MatrixXd& G) : g_(G) {
  const auto n = G.rows();
  if (n == 0 || G.cols() != n) {
    throw BadShape("CholeskyFactor: matrix must be square and nonempty");
  }
  const double pivot_tol = 1e-12 * G.diagonal().maxCoeff();
  l_ = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = G(j, j) - l_.row(j).head(j).squaredNorm();
    if (!(d > pivot_tol)) {
      throw NotPositiveDefinite("CholeskyFactor: pivot " + std::to_string(d) +
                                " at column " + std::to_string(j));
    }
    l_(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double s = l_.row(i).head(j).dot(l_.row(j).head(j));
      l_(i, j) = (G(i, j) - s) / l_(j, j);
    }
  }
}

Eigen::VectorXd CholeskyFactor::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != l_.rows()) {
    throw DimensionMismatch("CholeskyFactor::solve: rhs size");
  }
  auto lower = l_.triangularView<Eigen::Lower>();
  auto upper = l_.transpose().triangularView<Eigen::Upper>();
  Eigen::VectorXd z = upper.solve(lower.solve(rhs));
  // one refinement step
  Eigen::VectorXd r = rhs - g_ * z;
  z += upper.solve(lower.solve(r));
  return z;
}

Eigen::MatrixXd CholeskyFactor::solve_many(const Eigen::MatrixXd& rhs) const {
  if (rhs.rows() != l_.rows()) {
    throw DimensionMismatch("CholeskyFactor::solve_many: rhs rows");
  }
  auto lower = l_.triangularView<Eigen::Lower>();
  auto upper = l_.transpose().triangularView<Eigen::Upper>();
  Eigen::MatrixXd z = upper.solve(lower.solve(rhs));
  Eigen::MatrixXd r = rhs - g_ * z;
  z += upper.solve(lower.solve(r));
  return z;
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& G,
                          const Eigen::VectorXd& rhs) {
  return CholeskyFactor(G).solve(rhs);
}

namespace {

Eigen::VectorXd perturbed_start(int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) {
    v(i) = 1.0 + static_cast<double>(i + 1) / dim * ((i % 2) ? -0.5 : 0.5);
  }
  v.normalize();
  return v;
}

struct PowerIterRun {
  double rayleigh = 0.0;
  Eigen::VectorXd v;
  bool converged = false;
};

PowerIterRun power_iterate(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
    Eigen::VectorXd v, const PowerIterOptions& opts, bool allow_restart) {
  const int dim = static_cast<int>(v.size());
  bool restarted = !allow_restart;
  PowerIterRun run;
  double lambda = 0.0;
  for (int it = 0; it < opts.max_iters; ++it) {
    Eigen::VectorXd w = apply(v);
    const double rq = v.dot(w);
    const double wn = w.norm();
    if (wn <= 0.0 || rq <= 0.0) {
      // start vector (numerically) in the kernel; perturb once
      if (restarted) return run;
      restarted = true;
      v = perturbed_start(dim);
      continue;
    }
    v = w / wn;
    run.rayleigh = rq;
    run.v = v;
    if (it > 0 && std::abs(rq - lambda) <= opts.tol * std::abs(rq)) {
      run.converged = true;
      return run;
    }
    lambda = rq;
  }
  return run;
}

}  // namespace

double largest_eigenvalue_sym(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
    int dim, const PowerIterOptions& opts) {
  if (dim < 1) {
    throw BadShape("largest_eigenvalue_sym: dim < 1");
  }
  if (dim == 1) {
    Eigen::VectorXd e = Eigen::VectorXd::Ones(1);
    return apply(e)(0);
  }
  Eigen::VectorXd start = Eigen::VectorXd::Ones(dim);
  start.normalize();
  const PowerIterRun primary = power_iterate(apply, start, opts, true);
  if (!primary.converged) {
    throw ConvergenceFailure("power iteration: no convergence after " +
                             std::to_string(opts.max_iters) + " iterations");
  }
  // The all-ones start can be exactly orthogonal to the dominant eigenvector
  // (every 2x2 correlation matrix has eigenvectors (1,1) and (1,-1)).
  // A second run from a start deflated against the converged direction
  // covers that trap; Rayleigh quotients never overshoot the true maximum,
  // so the larger of the two runs is always the better estimate.
  Eigen::VectorXd start2 = perturbed_start(dim);
  start2 -= primary.v * primary.v.dot(start2);
  const double n2 = start2.norm();
  if (n2 > 1e-12) {
    start2 /= n2;
    const PowerIterRun secondary = power_iterate(apply, start2, opts, false);
    if (secondary.rayleigh > primary.rayleigh) return secondary.rayleigh;
  }
  return primary.rayleigh;
}

double spectral_norm(const Eigen::MatrixXd& B, const PowerIterOptions& opts) {
  if (B.size() == 0) {
    throw std::invalid_argument("spectral_norm: empty matrix");
  }
  if (B.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument("spectral_norm: zero matrix");
  }
  const int dim = static_cast<int>(B.cols());
  const double lam = largest_eigenvalue_sym(
      [&B](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return B.transpose() * (B * v);
      },
      dim, opts);
  return std::sqrt(lam);
}

}  // namespace sparsebp
