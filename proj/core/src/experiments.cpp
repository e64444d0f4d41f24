#include "sparsebp/experiments.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "sparsebp/errors.hpp"
#include "sparsebp/linalg.hpp"
#include "sparsebp/serialize.hpp"

namespace sparsebp {

std::string to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::IdentityDct: return "identity_dct";
    case MatrixKind::IdentityHadamard: return "identity_hadamard";
    case MatrixKind::Signs: return "signs";
  }
  return "unknown";
}

MatrixKind matrix_kind_from_string(const std::string& name) {
  if (name == "identity_dct") return MatrixKind::IdentityDct;
  if (name == "identity_hadamard") return MatrixKind::IdentityHadamard;
  if (name == "signs") return MatrixKind::Signs;
  throw BadShape("unknown matrix kind: " + name);
}

std::string to_string(NoiseRule r) {
  switch (r) {
    case NoiseRule::FixedNormSphere: return "fixed_norm_sphere";
    case NoiseRule::ScaledUniformBall: return "scaled_uniform_ball";
    case NoiseRule::None: return "none";
    case NoiseRule::AdversarialSigns: return "adversarial_signs";
  }
  return "unknown";
}

NoiseRule noise_rule_from_string(const std::string& name) {
  if (name == "fixed_norm_sphere") return NoiseRule::FixedNormSphere;
  if (name == "scaled_uniform_ball") return NoiseRule::ScaledUniformBall;
  if (name == "none") return NoiseRule::None;
  if (name == "adversarial_signs") return NoiseRule::AdversarialSigns;
  throw BadShape("unknown noise rule: " + name);
}

std::string to_string(MagnitudeRule r) {
  switch (r) {
    case MagnitudeRule::ConstantOne: return "constant_one";
    case MagnitudeRule::LogUniform: return "log_uniform";
  }
  return "unknown";
}

MagnitudeRule magnitude_rule_from_string(const std::string& name) {
  if (name == "constant_one") return MagnitudeRule::ConstantOne;
  if (name == "log_uniform") return MagnitudeRule::LogUniform;
  throw BadShape("unknown magnitude rule: " + name);
}

namespace {

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

Eigen::MatrixXd dct2_basis(int n) {
  Eigen::MatrixXd D(n, n);
  for (int k = 0; k < n; ++k) {
    const double c = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int i = 0; i < n; ++i) {
      D(i, k) = c * std::cos(M_PI * k * (2.0 * i + 1.0) / (2.0 * n));
    }
  }
  return D;
}

Eigen::MatrixXd hadamard(int n) {
  Eigen::MatrixXd H(1, 1);
  H(0, 0) = 1.0;
  while (H.rows() < n) {
    const auto k = H.rows();
    Eigen::MatrixXd H2(2 * k, 2 * k);
    H2.topLeftCorner(k, k) = H;
    H2.topRightCorner(k, k) = H;
    H2.bottomLeftCorner(k, k) = H;
    H2.bottomRightCorner(k, k) = -H;
    H = std::move(H2);
  }
  return H;
}

}  // namespace

Dictionary build_matrix(MatrixKind kind, int n, int m, std::uint64_t seed) {
  if (n < 1 || m <= n) {
    throw BadShape("build_matrix: need m > n >= 1");
  }
  switch (kind) {
    case MatrixKind::IdentityDct: {
      if (m != 2 * n) throw BadShape("identity_dct: m must equal 2n");
      Eigen::MatrixXd A(n, m);
      A.leftCols(n) = Eigen::MatrixXd::Identity(n, n);
      A.rightCols(n) = dct2_basis(n);
      return Dictionary::normalized(std::move(A), "identity_dct n=" +
                                                      std::to_string(n));
    }
    case MatrixKind::IdentityHadamard: {
      if (m != 2 * n) throw BadShape("identity_hadamard: m must equal 2n");
      if (!is_power_of_two(n)) {
        throw BadShape("identity_hadamard: n must be a power of two");
      }
      Eigen::MatrixXd A(n, m);
      A.leftCols(n) = Eigen::MatrixXd::Identity(n, n);
      A.rightCols(n) = hadamard(n) / std::sqrt(double(n));
      return Dictionary::normalized(std::move(A), "identity_hadamard n=" +
                                                      std::to_string(n));
    }
    case MatrixKind::Signs: {
      Rng rng(seed);
      Eigen::MatrixXd A(n, m);
      const double scale = 1.0 / std::sqrt(double(n));
      for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) A(i, j) = rng.sign() * scale;
      }
      return Dictionary::normalized(std::move(A),
                                    "signs n=" + std::to_string(n) +
                                        " m=" + std::to_string(m) +
                                        " seed=" + std::to_string(seed));
    }
  }
  throw BadShape("build_matrix: unknown kind");
}

namespace {

Eigen::VectorXd draw_noise(const Dictionary& A, NoiseRule rule, double level,
                           Rng& rng) {
  const int n = A.rows();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  if (level <= 0.0 || rule == NoiseRule::None) return b;
  switch (rule) {
    case NoiseRule::FixedNormSphere: {
      for (int i = 0; i < n; ++i) b(i) = rng.normal();
      const double norm = b.norm();
      if (norm > 0.0) b *= level / norm;
      return b;
    }
    case NoiseRule::ScaledUniformBall: {
      for (int i = 0; i < n; ++i) b(i) = rng.normal();
      const double norm = b.norm();
      const double radius = level * std::pow(rng.uniform01(), 1.0 / n);
      if (norm > 0.0) b *= radius / norm;
      return b;
    }
    case NoiseRule::AdversarialSigns: {
      Eigen::VectorXd s(A.cols());
      for (int j = 0; j < A.cols(); ++j) s(j) = rng.sign();
      b = A.entries() * s;
      const double norm = b.norm();
      if (norm > 0.0) b *= level / norm;
      return b;
    }
    case NoiseRule::None: return b;
  }
  return b;
}

double offsupport_norm_1to2(const Dictionary& A, const std::vector<int>& I) {
  std::vector<bool> on(A.cols(), false);
  for (int idx : I) on[idx] = true;
  double nu = 0.0;
  for (int j = 0; j < A.cols(); ++j) {
    if (!on[j]) nu = std::max(nu, A.col_norms()(j));
  }
  return nu;
}

}  // namespace

TrialRecord run_trial(const Dictionary& A, const ExperimentConfig& cfg,
                      int trial_index) {
  TrialRecord rec;
  rec.trial_index = trial_index;
  Rng rng = Rng::for_trial(cfg.root_seed, static_cast<std::uint64_t>(trial_index));
  rec.seed = rng.seed();
  try {
    const int m = A.cols();
    const SparseSignal x0 =
        sample_generic_p_sparse(m, cfg.p, cfg.magnitude_rule, rng);
    rec.support = x0.support;

    Eigen::VectorXd x1 = x0.dense();
    double eff_eps = cfg.epsilon;
    double noise_level = cfg.epsilon;
    if (cfg.compressible) {
      eff_eps = corollary1_epsilon(cfg.compressible->epsilon1,
                                   cfg.compressible->C1, A.spectral_norm());
      noise_level = cfg.compressible->epsilon1;
      if (cfg.compressible->C1 > 0.0) {
        // worst-case tail: uniform on the sphere of radius C1*eps1
        const CompressibleSignal comp = make_compressible(
            x0, cfg.compressible->C1 * cfg.compressible->epsilon1, rng);
        x1 = comp.dense();
      }
    }
    const Eigen::VectorXd b = draw_noise(A, cfg.noise_rule, noise_level, rng);
    const Eigen::VectorXd y = A.entries() * x1 + b;

    const Certificate cert = compute_certificate(A, x0);
    rec.invertible = cert.invertible;
    if (cert.invertible) {
      rec.ic = cert.ic;
      rec.gram_inv_spectral = cert.gram_inv_spectral;
    }

    const Solution sol = solve_bpdn(A, y, eff_eps, cfg.solver);
    rec.solver_status = sol.status;
    rec.iterations = sol.iterations;
    rec.polished = sol.polished;
    rec.residual_norm = sol.residual_norm;
    rec.lambda = sol.lambda;

    const Eigen::VectorXd diff = sol.x_star - x0.dense();
    rec.l2_error = diff.norm();
    rec.l1_error = diff.lpNorm<1>();
    rec.theorem_bound = theorem1_constant(cfg.p) * eff_eps;
    rec.l1_bound = l1_error_bound(cfg.p, eff_eps);
    if (cert.invertible && cert.ic < 1.0) {
      rec.prop1_rhs =
          prop1_bound(cert, eff_eps, offsupport_norm_1to2(A, x0.support));
    }

    if (sol.status == SolveStatus::Converged && sol.lambda > 0.0) {
      const KKTReport kkt = verify_kkt(A, y, eff_eps, sol);
      rec.kkt_max_offsupport_dual = kkt.max_offsupport_dual;
      rec.kkt_onsupport_sign_error = kkt.onsupport_sign_error;
      rec.kkt_gram_singular = kkt.gram_singular;
      if (kkt.implicit_eq_residual) {
        rec.kkt_implicit_eq_residual = *kkt.implicit_eq_residual;
      }
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

Summary summarize(const std::vector<TrialRecord>& records,
                  const ExperimentConfig& cfg, double effective_epsilon) {
  Summary s;
  s.trials = static_cast<int>(records.size());
  s.effective_epsilon = effective_epsilon;
  s.theorem1_C = theorem1_constant(cfg.p);
  int success = 0, ic_quarter = 0, gram_ok = 0, joint = 0, l1_ok = 0;
  for (const TrialRecord& r : records) {
    const bool solver_ok =
        r.error.empty() && r.solver_status == SolveStatus::Converged;
    if (solver_ok && r.l2_error <= r.theorem_bound) ++success;
    if (solver_ok && r.l1_error <= r.l1_bound) ++l1_ok;
    const bool ic_ok = r.invertible && r.ic <= 0.25;
    const bool g_ok = r.invertible && r.gram_inv_spectral <= 2.0;
    if (ic_ok) ++ic_quarter;
    if (g_ok) ++gram_ok;
    if (ic_ok && g_ok) ++joint;
  }
  const double denom = std::max(1, s.trials);
  s.empirical_success_rate = success / denom;
  s.empirical_ic_quarter_rate = ic_quarter / denom;
  s.empirical_gram_rate = gram_ok / denom;
  s.joint_rate = joint / denom;
  s.l1_success_rate = l1_ok / denom;
  s.probability_floor = probability_floor(cfg.m);
  s.prop2_floor = prop2_floor(cfg.m, cfg.t, cfg.c0);
  return s;
}

ExperimentResult run_experiment(const Dictionary& A,
                                const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw BadShape("run_experiment: trials < 1");
  if (cfg.p < 1 || cfg.p > A.cols()) {
    throw InvalidSparsity("run_experiment: p outside [1, m]");
  }
  ExperimentConfig local = cfg;
  local.n = A.rows();
  local.m = A.cols();

  std::vector<TrialRecord> records(local.trials);
  const int nthreads =
      std::max(1, std::min(local.threads, local.trials));
  if (nthreads == 1) {
    for (int i = 0; i < local.trials; ++i) records[i] = run_trial(A, local, i);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= local.trials) break;
        records[i] = run_trial(A, local, i);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const double eff_eps =
      local.compressible
          ? corollary1_epsilon(local.compressible->epsilon1,
                               local.compressible->C1, A.spectral_norm())
          : local.epsilon;
  ExperimentResult result;
  result.summary = summarize(records, local, eff_eps);
  result.records = std::move(records);

  if (!local.out_dir.empty()) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(local.out_dir, ec);
    const fs::path dir(local.out_dir);
    {
      std::ofstream csv(dir / "trials.csv", std::ios::binary);
      if (!csv) throw IoError("cannot open " + (dir / "trials.csv").string());
      csv << trials_to_csv(result.records);
      if (!csv) throw IoError("failed writing trials.csv");
    }
    {
      std::ofstream js(dir / "summary.json", std::ios::binary);
      if (!js) throw IoError("cannot open " + (dir / "summary.json").string());
      js << to_json(result.summary, local).dump(2) << "\n";
      if (!js) throw IoError("failed writing summary.json");
    }
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (!cfg.matrix_file.empty()) {
    const Dictionary A = load_matrix(cfg.matrix_file);
    return run_experiment(A, cfg);
  }
  const Dictionary A = build_matrix(cfg.builtin, cfg.n, cfg.m, cfg.matrix_seed);
  return run_experiment(A, cfg);
}

std::string trials_csv_header() {
  return "trial_index,seed,p,support,invertible,ic,gram_inv_spectral,"
         "l2_error,l1_error,prop1_rhs,theorem_bound,l1_bound,residual_norm,"
         "lambda,solver_status,iterations,polished,kkt_max_offsupport_dual,"
         "kkt_onsupport_sign_error,kkt_implicit_eq_residual,"
         "kkt_gram_singular,error";
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string trial_csv_row(const TrialRecord& r) {
  std::ostringstream os;
  os << r.trial_index << ',' << r.seed << ',' << r.support.size() << ',';
  for (std::size_t k = 0; k < r.support.size(); ++k) {
    if (k) os << ';';
    os << r.support[k];
  }
  os << ',' << (r.invertible ? 1 : 0) << ',' << format_double(r.ic) << ','
     << format_double(r.gram_inv_spectral) << ',' << format_double(r.l2_error)
     << ',' << format_double(r.l1_error) << ',' << format_double(r.prop1_rhs)
     << ',' << format_double(r.theorem_bound) << ','
     << format_double(r.l1_bound) << ',' << format_double(r.residual_norm)
     << ',' << format_double(r.lambda) << ',' << to_string(r.solver_status)
     << ',' << r.iterations << ',' << (r.polished ? 1 : 0) << ','
     << format_double(r.kkt_max_offsupport_dual) << ','
     << format_double(r.kkt_onsupport_sign_error) << ','
     << format_double(r.kkt_implicit_eq_residual) << ','
     << (r.kkt_gram_singular ? 1 : 0) << ',' << csv_escape(r.error);
  return os.str();
}

std::string trials_to_csv(const std::vector<TrialRecord>& records) {
  std::string out = trials_csv_header();
  out += '\n';
  for (const TrialRecord& r : records) {
    out += trial_csv_row(r);
    out += '\n';
  }
  return out;
}

std::pair<double, double> estimate_tropp_moments(const Dictionary& A, int p,
                                                 int trials,
                                                 std::uint64_t seed) {
  if (trials < 1) throw BadShape("estimate_tropp_moments: trials < 1");
  const int m = A.cols();
  const double q = 2.0 * std::log(double(m));
  Rng rng(seed);
  double acc_gram = 0.0;
  double acc_cross = 0.0;
  for (int t = 0; t < trials; ++t) {
    const SparseSignal x =
        sample_generic_p_sparse(m, p, MagnitudeRule::ConstantOne, rng);
    const SubMatrix S(A, x.support);
    const Eigen::MatrixXd AI = S.materialize();
    Eigen::MatrixXd D = AI.transpose() * AI;
    D = 0.5 * (D + D.transpose()).eval();
    D -= Eigen::MatrixXd::Identity(p, p);
    const double gram_dev =
        D.cwiseAbs().maxCoeff() == 0.0 ? 0.0 : spectral_norm(D);
    const Eigen::MatrixXd AIc =
        SubMatrix::complement(A, x.support).materialize();
    const double cross = (AI.transpose() * AIc).colwise().norm().maxCoeff();
    acc_gram += std::pow(gram_dev, q);
    acc_cross += std::pow(cross, q);
  }
  return {std::pow(acc_gram / trials, 1.0 / q),
          std::pow(acc_cross / trials, 1.0 / q)};
}

LwTailResult estimate_lw_tail(const Dictionary& A, int p, double t, int trials,
                              std::uint64_t seed, bool resample_support) {
  if (trials < 1) throw BadShape("estimate_lw_tail: trials < 1");
  if (t < 0.0) throw BadShape("estimate_lw_tail: t < 0");
  const int m = A.cols();
  Rng rng(seed);
  LwTailResult result;
  result.t = t;
  result.J_size = m - p;
  result.resampled_support = resample_support;

  const auto build_w = [&](const std::vector<int>& support) -> Eigen::MatrixXd {
    const SubMatrix S(A, support);
    const Eigen::MatrixXd AI = S.materialize();
    Eigen::MatrixXd G = gram(S);
    try {
      const CholeskyFactor factor(G);
      const Eigen::MatrixXd AIc = SubMatrix::complement(A, support).materialize();
      return factor.solve_many(AI.transpose() * AIc);  // p x |J|, columns W_j
    } catch (const NotPositiveDefinite& e) {
      throw GramSingular(std::string("estimate_lw_tail: ") + e.what());
    }
  };

  int count = 0;
  if (!resample_support) {
    const SparseSignal x0 =
        sample_generic_p_sparse(m, p, MagnitudeRule::ConstantOne, rng);
    const Eigen::MatrixXd W = build_w(x0.support);
    result.kappa = W.colwise().norm().maxCoeff();
    Eigen::VectorXd sigma(p);
    for (int trial = 0; trial < trials; ++trial) {
      for (int k = 0; k < p; ++k) sigma(k) = rng.sign();
      const double z0 = (W.transpose() * sigma).cwiseAbs().maxCoeff();
      if (z0 >= t) ++count;
    }
  } else {
    double kappa_max = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      const SparseSignal x =
          sample_generic_p_sparse(m, p, MagnitudeRule::ConstantOne, rng);
      const Eigen::MatrixXd W = build_w(x.support);
      kappa_max = std::max(kappa_max, W.colwise().norm().maxCoeff());
      const double z0 = (W.transpose() * x.signs).cwiseAbs().maxCoeff();
      if (z0 >= t) ++count;
    }
    result.kappa = kappa_max;
  }
  result.empirical = double(count) / trials;
  result.bound = lemma_lw_tail(t, result.kappa, result.J_size);
  return result;
}

}  // namespace sparsebp
