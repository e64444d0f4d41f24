// sparsebp CLI: constrained l1 recovery, certificates, bounds and the
// Monte Carlo harness behind one binary.
//
// Exit codes: 0 success, 1 I/O or config error, 2 numerical failure.

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <string>

#include "sparsebp/certificates.hpp"
#include "sparsebp/errors.hpp"
#include "sparsebp/experiments.hpp"
#include "sparsebp/serialize.hpp"
#include "sparsebp/solver.hpp"

namespace {

using namespace sparsebp;
using nlohmann::json;

struct MatrixArgs {
  std::string file;
  std::string builtin;
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
};

// When the subcommand needs --seed for its own Monte Carlo draws (tropp,
// lwtail), the signs-builder seed moves to --matrix-seed.
void add_matrix_options(CLI::App* cmd, MatrixArgs& args,
                        bool plain_seed_name = true) {
  auto* file = cmd->add_option("--matrix", args.file, "matrix file path");
  auto* builtin = cmd->add_option(
      "--builtin", args.builtin, "builtin kind: identity_dct | identity_hadamard | signs");
  cmd->add_option("--n", args.n, "rows for the builtin generator");
  cmd->add_option("--m", args.m, "columns for the builtin generator");
  cmd->add_option(plain_seed_name ? "--seed" : "--matrix-seed", args.seed,
                  "seed for the signs generator");
  file->excludes(builtin);
}

Dictionary load_dictionary(const MatrixArgs& args) {
  if (!args.file.empty()) return load_matrix(args.file);
  if (args.builtin.empty()) {
    throw IoError("one of --matrix or --builtin is required");
  }
  if (args.n < 1 || args.m < 1) {
    throw IoError("--builtin needs --n and --m");
  }
  return build_matrix(matrix_kind_from_string(args.builtin), args.n, args.m,
                      args.seed);
}

int cmd_analyze(const MatrixArgs& margs, double A0) {
  const Dictionary A = load_dictionary(margs);
  json out;
  out["n"] = A.rows();
  out["m"] = A.cols();
  out["normalized"] = A.is_normalized();
  out["description"] = A.description();
  out["spectral_norm"] = A.spectral_norm();
  if (A.is_normalized()) {
    const double mu = A.coherence();
    out["coherence"] = mu;
    const double lnm = std::log(static_cast<double>(A.cols()));
    out["criterion"] = {{"A0", A0},
                        {"ln_m", lnm},
                        {"threshold", A0 / lnm},
                        {"satisfied", A.coherence_criterion(A0)}};
  } else {
    out["coherence"] = nullptr;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_certify(const MatrixArgs& margs, const std::string& signal_path,
                bool vectors) {
  const Dictionary A = load_dictionary(margs);
  const SparseSignal x0 = load_signal(signal_path);
  if (x0.m != A.cols()) {
    throw IoError("signal dimension " + std::to_string(x0.m) +
                  " does not match matrix m=" + std::to_string(A.cols()));
  }
  const Certificate cert = compute_certificate(A, x0);
  std::cout << to_json(cert, vectors).dump(2) << "\n";
  return 0;
}

int cmd_solve(const MatrixArgs& margs, const std::string& y_path, double eps,
              const std::string& config_path) {
  const Dictionary A = load_dictionary(margs);
  const Eigen::VectorXd y = load_vector(y_path);
  if (y.size() != A.rows()) {
    throw IoError("y has dimension " + std::to_string(y.size()) +
                  ", expected n=" + std::to_string(A.rows()));
  }
  SolverConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open " + config_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw IoError(std::string("solver config JSON: ") + e.what());
    }
    cfg = solver_config_from_json(j);
  }
  const Solution sol = solve_bpdn(A, y, eps, cfg);
  json out = to_json(sol);
  if (sol.status == SolveStatus::Converged && sol.lambda > 0.0) {
    out["kkt"] = to_json(verify_kkt(A, y, eps, sol));
  }
  std::cout << out.dump(2) << "\n";
  return sol.status == SolveStatus::Converged ? 0 : 2;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir,
                   int threads) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (cfg.out_dir.empty()) cfg.out_dir = ".";
  if (threads > 0) cfg.threads = threads;
  const ExperimentResult result = run_experiment(cfg);
  std::cout << to_json(result.summary, cfg).dump(2) << "\n";
  int hard_failures = 0;
  for (const TrialRecord& r : result.records) {
    if (!r.error.empty()) ++hard_failures;
  }
  if (hard_failures > 0) {
    std::cerr << hard_failures << " trial(s) recorded errors; see trials.csv\n";
    return 2;
  }
  return 0;
}

int cmd_tropp(const MatrixArgs& margs, int p, int trials, std::uint64_t seed) {
  const Dictionary A = load_dictionary(margs);
  const auto [est_gram, est_cross] = estimate_tropp_moments(A, p, trials, seed);
  const auto [rhs_gram, rhs_cross] =
      tropp_rhs(A.cols(), p, A.spectral_norm(), A.coherence());
  json out;
  out["p"] = p;
  out["trials"] = trials;
  out["q"] = 2.0 * std::log(static_cast<double>(A.cols()));
  out["estimate_gram"] = est_gram;
  out["estimate_cross"] = est_cross;
  out["rhs_gram"] = rhs_gram;
  out["rhs_cross"] = rhs_cross;
  out["dominated"] = est_gram <= rhs_gram && est_cross <= rhs_cross;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_lwtail(const MatrixArgs& margs, int p, double t, int trials,
               std::uint64_t seed, bool resample) {
  const Dictionary A = load_dictionary(margs);
  const LwTailResult r = estimate_lw_tail(A, p, t, trials, seed, resample);
  json out = to_json(r);
  out["p"] = p;
  out["trials"] = trials;
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse recovery via constrained l1 minimization: solver, "
               "certificates, bounds and Monte Carlo verification"};
  app.require_subcommand(1);

  MatrixArgs analyze_m;
  double analyze_A0 = kDefaultA0;
  auto* analyze = app.add_subcommand("analyze", "matrix diagnostics JSON");
  add_matrix_options(analyze, analyze_m);
  analyze->add_option("--A0", analyze_A0, "coherence criterion constant");

  MatrixArgs certify_m;
  std::string certify_signal;
  bool certify_vectors = false;
  auto* certify = app.add_subcommand("certify", "certificate JSON for a signal");
  add_matrix_options(certify, certify_m);
  certify->add_option("--signal", certify_signal, "signal JSON file")
      ->required();
  certify->add_flag("--vectors", certify_vectors, "include d and s vectors");

  MatrixArgs solve_m;
  std::string solve_y;
  double solve_eps = 0.0;
  std::string solve_config;
  auto* solve = app.add_subcommand("solve", "solve min ||x||_1 s.t. ||Ax-y||_2 <= eps");
  add_matrix_options(solve, solve_m);
  solve->add_option("--y", solve_y, "data vector file")->required();
  solve->add_option("--epsilon", solve_eps, "noise level eps >= 0")->required();
  solve->add_option("--config", solve_config, "solver config JSON file");

  std::string exp_config, exp_out;
  int exp_threads = 0;
  auto* experiment =
      app.add_subcommand("experiment", "Monte Carlo run: trials.csv + summary.json");
  experiment->add_option("--config", exp_config, "experiment config JSON")
      ->required();
  experiment->add_option("--out", exp_out, "output directory");
  experiment->add_option("--threads", exp_threads, "worker threads");

  MatrixArgs tropp_m;
  int tropp_p = 0, tropp_trials = 1000;
  std::uint64_t tropp_seed = 0;
  auto* tropp = app.add_subcommand("tropp", "Monte Carlo Tropp moment estimates");
  add_matrix_options(tropp, tropp_m, /*plain_seed_name=*/false);
  tropp->add_option("--p", tropp_p, "support size")->required();
  tropp->add_option("--trials", tropp_trials, "support draws");
  tropp->add_option("--seed", tropp_seed, "seed for the support draws");

  MatrixArgs lw_m;
  int lw_p = 0, lw_trials = 10000;
  double lw_t = 0.0;
  std::uint64_t lw_seed = 0;
  bool lw_resample = false;
  auto* lwtail = app.add_subcommand("lwtail", "empirical P(Z0 >= t) vs the Hoeffding bound");
  add_matrix_options(lwtail, lw_m, /*plain_seed_name=*/false);
  lwtail->add_option("--p", lw_p, "support size")->required();
  lwtail->add_option("--t", lw_t, "tail threshold")->required();
  lwtail->add_option("--trials", lw_trials, "sign draws");
  lwtail->add_option("--seed", lw_seed, "seed for the draws");
  lwtail->add_flag("--resample", lw_resample, "resample the support each trial");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(analyze_m, analyze_A0);
    if (certify->parsed())
      return cmd_certify(certify_m, certify_signal, certify_vectors);
    if (solve->parsed())
      return cmd_solve(solve_m, solve_y, solve_eps, solve_config);
    if (experiment->parsed())
      return cmd_experiment(exp_config, exp_out, exp_threads);
    if (tropp->parsed())
      return cmd_tropp(tropp_m, tropp_p, tropp_trials, tropp_seed);
    if (lwtail->parsed())
      return cmd_lwtail(lw_m, lw_p, lw_t, lw_trials, lw_seed, lw_resample);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidSparsity& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const BadShape& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
