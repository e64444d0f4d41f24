#include "sparsebp/solver.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "sparsebp/errors.hpp"
#include "sparsebp/linalg.hpp"

namespace sparsebp {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIters: return "MaxIters";
    case SolveStatus::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

namespace {

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double t) {
  return v.unaryExpr([t](double a) {
    const double m = std::abs(a) - t;
    return m > 0.0 ? (a > 0.0 ? m : -m) : 0.0;
  });
}

std::vector<int> extract_support(const Eigen::VectorXd& x, double threshold) {
  std::vector<int> support;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) > threshold) support.push_back(static_cast<int>(i));
  }
  return support;
}

struct Refined {
  Eigen::VectorXd x;
  double lambda = 0.0;
  double residual_norm = 0.0;
  std::vector<int> support;
};

// Support-restricted refinement. On a support I with signs sigma, the
// minimizer of the penalized form satisfies
//   x_I(lambda) = x_ls - lambda G^{-1} sigma,
//   r(lambda)   = r_ls + lambda A_I G^{-1} sigma
// with r_ls orthogonal to range(A_I), so ||r(lambda)||^2 = ||r_ls||^2 +
// lambda^2 ||A_I G^{-1} sigma||^2 and the lambda matching ||r|| = eps is
// closed-form. The candidate support comes from the splitting iterate and is
// corrected active-set style for a few rounds: atoms whose refined value
// crosses zero leave, the worst dual-violating atom enters. A round is
// accepted only when the signs survive and A^t (y - A x)/lambda is a valid
// l1 subgradient, which certifies global optimality for the constrained
// problem.
std::optional<Refined> try_refine(const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& y, double eps,
                                  const Eigen::VectorXd& x_cand,
                                  const SolverConfig& cfg) {
  const double thr =
      cfg.support_threshold_scale *
      std::max(1.0, x_cand.size() ? x_cand.cwiseAbs().maxCoeff() : 1.0);
  std::vector<int> I = extract_support(x_cand, thr);
  if (I.empty()) return std::nullopt;
  std::vector<double> sigma;
  sigma.reserve(I.size());
  for (int idx : I) sigma.push_back(x_cand(idx) > 0.0 ? 1.0 : -1.0);

  for (int round = 0; round < 10; ++round) {
    const int p = static_cast<int>(I.size());
    if (p == 0 || p > static_cast<int>(A.rows())) return std::nullopt;
    Eigen::MatrixXd AI(A.rows(), p);
    Eigen::VectorXd sig(p);
    for (int k = 0; k < p; ++k) {
      AI.col(k) = A.col(I[k]);
      sig(k) = sigma[k];
    }
    Eigen::MatrixXd G = AI.transpose() * AI;
    G = 0.5 * (G + G.transpose()).eval();
    std::unique_ptr<CholeskyFactor> factor;
    try {
      factor = std::make_unique<CholeskyFactor>(G);
    } catch (const NotPositiveDefinite&) {
      return std::nullopt;
    }
    const Eigen::VectorXd x_ls = factor->solve(AI.transpose() * y);
    const Eigen::VectorXd r_ls = y - AI * x_ls;
    const double rn2 = r_ls.squaredNorm();
    if (rn2 >= eps * eps) return std::nullopt;
    const Eigen::VectorXd h = factor->solve(sig);
    const double denom = (AI * h).squaredNorm();
    if (!(denom > 0.0)) return std::nullopt;
    const double lambda = std::sqrt((eps * eps - rn2) / denom);
    if (!(lambda > 0.0)) return std::nullopt;
    const Eigen::VectorXd xI = x_ls - lambda * h;

    // zero crossings leave the active set
    std::vector<int> keep;
    for (int k = 0; k < p; ++k) {
      if (xI(k) * sig(k) > 0.0) keep.push_back(k);
    }
    if (static_cast<int>(keep.size()) < p) {
      if (keep.empty()) return std::nullopt;
      std::vector<int> I2;
      std::vector<double> sigma2;
      for (int k : keep) {
        I2.push_back(I[k]);
        sigma2.push_back(sigma[k]);
      }
      I = std::move(I2);
      sigma = std::move(sigma2);
      continue;
    }

    const Eigen::VectorXd resid = y - AI * xI;
    const Eigen::VectorXd eta = A.transpose() * resid / lambda;
    std::vector<bool> on(A.cols(), false);
    for (int idx : I) on[idx] = true;
    int worst_j = -1;
    double worst = 1.0 + cfg.kkt_tol;
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (!on[j] && std::abs(eta(j)) > worst) {
        worst = std::abs(eta(j));
        worst_j = static_cast<int>(j);
      }
    }
    if (worst_j >= 0) {
      // the most violating atom enters with the sign its dual demands
      const auto pos = std::lower_bound(I.begin(), I.end(), worst_j);
      const auto off = static_cast<std::size_t>(pos - I.begin());
      I.insert(pos, worst_j);
      sigma.insert(sigma.begin() + off, eta(worst_j) > 0.0 ? 1.0 : -1.0);
      continue;
    }

    Refined out;
    out.x = Eigen::VectorXd::Zero(A.cols());
    for (int k = 0; k < p; ++k) out.x(I[k]) = xI(k);
    out.residual_norm = resid.norm();
    out.lambda = lambda;
    out.support = I;
    return out;
  }
  return std::nullopt;
}

Solution zero_solution(int m, double ynorm, const SolverConfig& cfg) {
  Solution sol;
  sol.x_star = Eigen::VectorXd::Zero(m);
  sol.residual_norm = ynorm;
  sol.l1_norm = 0.0;
  sol.support_threshold = cfg.support_threshold_scale;
  sol.lambda = 0.0;
  sol.iterations = 0;
  sol.status = SolveStatus::Converged;
  return sol;
}

}  // namespace

Solution solve_bpdn(const Dictionary& dict, const Eigen::VectorXd& y,
                    double eps, const SolverConfig& cfg) {
  const Eigen::MatrixXd& A = dict.entries();
  if (y.size() != A.rows()) {
    throw DimensionMismatch("solve_bpdn: y has wrong dimension");
  }
  if (eps < 0.0) throw BadShape("solve_bpdn: eps < 0");
  const int m = static_cast<int>(A.cols());
  const double ynorm = y.norm();
  if (ynorm <= eps) {
    return zero_solution(m, ynorm, cfg);
  }
  if (eps == 0.0) {
    // equality-constrained basis pursuit only makes sense for y in range(A)
    const Eigen::VectorXd xls = A.colPivHouseholderQr().solve(y);
    if ((A * xls - y).norm() > 1e-9 * std::max(1.0, ynorm)) {
      Solution sol = zero_solution(m, ynorm, cfg);
      sol.status = SolveStatus::Infeasible;
      return sol;
    }
  }

  const double opnorm2 = dict.spectral_norm() * dict.spectral_norm();
  double rho = cfg.rho_init;
  double tau = 0.99 / (rho * opnorm2);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(A.rows());
  Eigen::VectorXd u = Eigen::VectorXd::Zero(A.rows());

  const auto project_ball = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    const Eigen::VectorXd d = v - y;
    const double dn = d.norm();
    if (dn <= eps) return v;
    if (eps == 0.0) return y;
    return y + d * (eps / dn);
  };

  Solution sol;
  sol.status = SolveStatus::MaxIters;
  int it = 0;
  int last_refine_attempt = -10;
  for (it = 1; it <= cfg.max_iters; ++it) {
    const Eigen::VectorXd Ax = A * x;
    const Eigen::VectorXd grad = A.transpose() * (Ax - z + u);
    Eigen::VectorXd x_new = soft_threshold(x - tau * rho * grad, tau);
    const Eigen::VectorXd Axn = A * x_new;
    const Eigen::VectorXd z_new = project_ball(Axn + u);
    const Eigen::VectorXd r = Axn - z_new;
    const Eigen::VectorXd s = rho * (A.transpose() * (z_new - z));
    u += r;
    const double dx =
        (x_new - x).norm() / std::max(1.0, x.norm());
    x = x_new;
    z = z_new;

    const bool settled = dx <= cfg.primal_tol;
    const bool want_refine =
        it % cfg.polish_every == 0 || settled || it == cfg.max_iters;
    if (want_refine && (it - last_refine_attempt >= 10 || it == cfg.max_iters)) {
      last_refine_attempt = it;
      if (eps > 0.0) {
        if (auto refined = try_refine(A, y, eps, x, cfg)) {
          sol.x_star = refined->x;
          sol.residual_norm = refined->residual_norm;
          sol.l1_norm = refined->x.lpNorm<1>();
          sol.support_star = refined->support;
          sol.support_threshold =
              cfg.support_threshold_scale *
              std::max(1.0, refined->x.cwiseAbs().maxCoeff());
          sol.lambda = refined->lambda;
          sol.iterations = it;
          sol.status = SolveStatus::Converged;
          sol.polished = true;
          return sol;
        }
      }
    }
    if (settled) {
      const double resid = (A * x - y).norm();
      // the floor absorbs the fp noise of measuring ||Ax-y|| with O(||y||)
      // data, which dominates eps*feasibility_tol once eps is tiny
      const double feas_floor =
          32.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, ynorm);
      const bool feasible =
          eps > 0.0 ? resid <= eps * (1.0 + cfg.feasibility_tol) + feas_floor
                    : resid <= 1e-9 * std::max(1.0, ynorm);
      if (feasible) {
        sol.status = SolveStatus::Converged;
        sol.iterations = it;
        break;
      }
    }
    if (it % cfg.balance_every == 0) {
      const double rn = r.norm();
      const double sn = s.norm();
      if (rn > cfg.balance_ratio * sn) {
        rho *= cfg.balance_scale;
        u /= cfg.balance_scale;
        tau = 0.99 / (rho * opnorm2);
      } else if (sn > cfg.balance_ratio * rn) {
        rho /= cfg.balance_scale;
        u *= cfg.balance_scale;
        tau = 0.99 / (rho * opnorm2);
      }
    }
  }

  if (sol.status != SolveStatus::Converged) sol.iterations = cfg.max_iters;
  sol.x_star = x;
  sol.residual_norm = (A * x - y).norm();
  sol.l1_norm = x.lpNorm<1>();
  sol.support_threshold =
      cfg.support_threshold_scale *
      std::max(1.0, x.size() ? x.cwiseAbs().maxCoeff() : 1.0);
  sol.support_star = extract_support(x, sol.support_threshold);
  // multiplier of the active ball constraint from the scaled dual
  const double wnorm = (rho * u).norm();
  if (eps > 0.0 && wnorm > 0.0) {
    sol.lambda = eps / wnorm;
  } else {
    sol.lambda = eps > 0.0 ? (A.transpose() * (y - A * x)).lpNorm<Eigen::Infinity>()
                           : 0.0;
  }
  return sol;
}

KKTReport verify_kkt(const Dictionary& dict, const Eigen::VectorXd& y,
                     double eps, const Solution& sol) {
  (void)eps;
  if (sol.status != SolveStatus::Converged) {
    throw Error("verify_kkt: solution is not converged");
  }
  if (!(sol.lambda > 0.0)) {
    throw Error("verify_kkt: ball constraint inactive (lambda == 0)");
  }
  const Eigen::MatrixXd& A = dict.entries();
  KKTReport rep;
  const Eigen::VectorXd u = (y - A * sol.x_star) / sol.lambda;
  rep.dual_vector = A.transpose() * u;
  std::vector<bool> on(A.cols(), false);
  for (int idx : sol.support_star) on[idx] = true;
  rep.max_offsupport_dual = 0.0;
  rep.onsupport_sign_error = 0.0;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    if (on[j]) {
      const double sign = sol.x_star(j) > 0.0 ? 1.0 : -1.0;
      rep.onsupport_sign_error =
          std::max(rep.onsupport_sign_error, std::abs(rep.dual_vector(j) - sign));
    } else {
      rep.max_offsupport_dual =
          std::max(rep.max_offsupport_dual, std::abs(rep.dual_vector(j)));
    }
  }
  if (sol.support_star.empty()) {
    rep.implicit_eq_residual = 0.0;
    return rep;
  }
  const int p = static_cast<int>(sol.support_star.size());
  Eigen::MatrixXd AI(A.rows(), p);
  Eigen::VectorXd sigma(p), xI(p);
  for (int k = 0; k < p; ++k) {
    AI.col(k) = A.col(sol.support_star[k]);
    xI(k) = sol.x_star(sol.support_star[k]);
    sigma(k) = xI(k) > 0.0 ? 1.0 : -1.0;
  }
  Eigen::MatrixXd G = AI.transpose() * AI;
  G = 0.5 * (G + G.transpose()).eval();
  try {
    const CholeskyFactor factor(G);
    const Eigen::VectorXd predicted =
        factor.solve(AI.transpose() * y) - sol.lambda * factor.solve(sigma);
    rep.implicit_eq_residual = (xI - predicted).norm();
  } catch (const NotPositiveDefinite&) {
    rep.gram_singular = true;
  }
  return rep;
}

namespace {

// exact coordinate minimization of 0.5||Ax-y||^2 + lambda||x||_1,
// x_j <- soft(x_j ||a_j||^2 + a_j^t r, lambda) / ||a_j||^2, swept until the
// subgradient violation drops below tol
int cd_to_stationarity(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                       double lambda, Eigen::VectorXd& x, double tol,
                       int max_sweeps) {
  const int m = static_cast<int>(A.cols());
  Eigen::VectorXd col_sq(m);
  for (int j = 0; j < m; ++j) col_sq(j) = A.col(j).squaredNorm();
  Eigen::VectorXd r = y - A * x;
  int sweeps = 0;
  while (sweeps < max_sweeps) {
    ++sweeps;
    for (int j = 0; j < m; ++j) {
      const double cj = x(j) * col_sq(j) + A.col(j).dot(r);
      const double mag = std::abs(cj) - lambda;
      const double xj = mag > 0.0 ? (cj > 0.0 ? mag : -mag) / col_sq(j) : 0.0;
      if (xj != x(j)) {
        r -= (xj - x(j)) * A.col(j);
        x(j) = xj;
      }
    }
    // stationarity from a fresh residual, avoiding incremental drift
    r = y - A * x;
    const Eigen::VectorXd v = A.transpose() * r;
    double viol = 0.0;
    for (int j = 0; j < m; ++j) {
      if (x(j) != 0.0) {
        viol = std::max(viol, std::abs(v(j) - lambda * (x(j) > 0 ? 1.0 : -1.0)));
      } else {
        viol = std::max(viol, std::max(std::abs(v(j)) - lambda, 0.0));
      }
    }
    if (viol <= tol) break;
  }
  return sweeps;
}

}  // namespace

Solution oracle_solve(const Dictionary& dict, const Eigen::VectorXd& y,
                      double eps, const SolverConfig& cfg,
                      std::vector<std::pair<double, double>>* path) {
  const Eigen::MatrixXd& A = dict.entries();
  if (A.cols() > 12) {
    throw GuardExceeded("oracle_solve: m > 12");
  }
  if (y.size() != A.rows()) {
    throw DimensionMismatch("oracle_solve: y has wrong dimension");
  }
  const int m = static_cast<int>(A.cols());
  const double ynorm = y.norm();
  if (ynorm <= eps) {
    return zero_solution(m, ynorm, cfg);
  }
  const double lam_max = (A.transpose() * y).lpNorm<Eigen::Infinity>();
  const double stat_tol = 1e-12 * std::max(1.0, lam_max);
  double lam_lo = 0.0;
  double lam_hi = lam_max;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  int total_sweeps = 0;
  bool hit_sweep_cap = false;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lam_lo + lam_hi);
    const int sweeps =
        cd_to_stationarity(A, y, mid, x, stat_tol, cfg.oracle_max_sweeps);
    total_sweeps += sweeps;
    if (sweeps >= cfg.oracle_max_sweeps) hit_sweep_cap = true;
    const double resid = (A * x - y).norm();
    if (path) path->emplace_back(mid, resid);
    if (resid >= eps) {
      lam_hi = mid;
    } else {
      lam_lo = mid;
    }
    if (lam_hi - lam_lo <= cfg.lambda_bisection_tol * std::max(lam_max, 1.0)) {
      break;
    }
  }
  // settle on the feasible side of the bisection
  total_sweeps +=
      cd_to_stationarity(A, y, lam_lo, x, stat_tol, cfg.oracle_max_sweeps);
  Solution sol;
  sol.x_star = x;
  sol.residual_norm = (A * x - y).norm();
  sol.l1_norm = x.lpNorm<1>();
  sol.support_threshold =
      cfg.support_threshold_scale *
      std::max(1.0, x.size() ? x.cwiseAbs().maxCoeff() : 1.0);
  sol.support_star = extract_support(x, sol.support_threshold);
  sol.lambda = lam_lo;
  sol.iterations = total_sweeps;
  if (sol.residual_norm > eps * (1.0 + cfg.feasibility_tol) &&
      sol.residual_norm > eps + stat_tol) {
    sol.status = SolveStatus::Infeasible;
  } else {
    sol.status = hit_sweep_cap ? SolveStatus::MaxIters : SolveStatus::Converged;
  }
  return sol;
}

}  // namespace sparsebp
