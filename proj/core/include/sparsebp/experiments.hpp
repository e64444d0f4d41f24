#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sparsebp/bounds.hpp"
#include "sparsebp/dictionary.hpp"
#include "sparsebp/solver.hpp"
#include "sparsebp/sparse_model.hpp"

namespace sparsebp {

inline constexpr int kTrialsCsvSchemaVersion = 1;

enum class MatrixKind { IdentityDct, IdentityHadamard, Signs };

std::string to_string(MatrixKind k);
MatrixKind matrix_kind_from_string(const std::string& name);

// Builtin test dictionaries.
//   identity_dct:      [I_n | DCT-II_n], m = 2n
//   identity_hadamard: [I_n | H_n / sqrt(n)], m = 2n, n a power of two
//   signs:             entries +-1/sqrt(n) from the seeded RNG, normalized
// Throws BadShape on invalid n/m.
Dictionary build_matrix(MatrixKind kind, int n, int m, std::uint64_t seed);

enum class NoiseRule {
  FixedNormSphere,   // ||b||_2 = eps, uniform direction
  ScaledUniformBall, // b uniform in the eps-ball
  None,              // b = 0
  AdversarialSigns,  // b = eps * A s / ||A s||, s a random +-1 vector
};

std::string to_string(NoiseRule r);
NoiseRule noise_rule_from_string(const std::string& name);

std::string to_string(MagnitudeRule r);
MagnitudeRule magnitude_rule_from_string(const std::string& name);

struct CompressibleParams {
  double C1 = 0.0;
  double epsilon1 = 0.0;
};

struct ExperimentConfig {
  // matrix source: file path wins when nonempty, else the builtin generator
  std::string matrix_file;
  MatrixKind builtin = MatrixKind::IdentityDct;
  int n = 128;
  int m = 256;
  std::uint64_t matrix_seed = 0;

  int p = 5;
  int trials = 500;
  std::uint64_t root_seed = 0;
  double epsilon = 0.1;
  NoiseRule noise_rule = NoiseRule::FixedNormSphere;
  MagnitudeRule magnitude_rule = MagnitudeRule::ConstantOne;
  std::optional<CompressibleParams> compressible;

  double A0 = kDefaultA0;
  double c0 = kDefaultC0;
  double t = 0.25;

  SolverConfig solver;

  std::string out_dir;  // empty: in-memory only
  int threads = 1;
};

struct TrialRecord {
  int trial_index = 0;
  std::uint64_t seed = 0;
  std::vector<int> support;
  bool invertible = false;
  double ic = std::numeric_limits<double>::quiet_NaN();
  double gram_inv_spectral = std::numeric_limits<double>::quiet_NaN();
  double l2_error = std::numeric_limits<double>::quiet_NaN();
  double l1_error = std::numeric_limits<double>::quiet_NaN();
  double prop1_rhs = std::numeric_limits<double>::quiet_NaN();
  double theorem_bound = std::numeric_limits<double>::quiet_NaN();  // C * eps
  double l1_bound = std::numeric_limits<double>::quiet_NaN();
  double residual_norm = std::numeric_limits<double>::quiet_NaN();
  double lambda = std::numeric_limits<double>::quiet_NaN();
  SolveStatus solver_status = SolveStatus::MaxIters;
  int iterations = 0;
  bool polished = false;
  double kkt_max_offsupport_dual = std::numeric_limits<double>::quiet_NaN();
  double kkt_onsupport_sign_error = std::numeric_limits<double>::quiet_NaN();
  double kkt_implicit_eq_residual = std::numeric_limits<double>::quiet_NaN();
  bool kkt_gram_singular = false;
  std::string error;  // trial-level failure, captured rather than thrown
};

struct Summary {
  int schema_version = kTrialsCsvSchemaVersion;
  int trials = 0;
  double empirical_success_rate = 0.0;     // l2_error <= C eps, solver OK
  double empirical_ic_quarter_rate = 0.0;  // invertible and ic <= 1/4
  double empirical_gram_rate = 0.0;        // invertible and ginv <= 2
  double joint_rate = 0.0;
  double l1_success_rate = 0.0;            // l1_error <= l1_bound, solver OK
  double probability_floor = 0.0;
  double prop2_floor = 0.0;
  double effective_epsilon = 0.0;
  double theorem1_C = 0.0;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  Summary summary;
};

// One Monte Carlo trial: sample x0 (plus tail when compressible), noise b,
// y = A x1 + b; solve; certificate and all bounds. Trial-level numerical
// failures land in the record's error field, never abort the batch.
TrialRecord run_trial(const Dictionary& A, const ExperimentConfig& cfg,
                      int trial_index);

// Runs cfg.trials trials (cfg.threads workers, per-trial seed =
// root_seed XOR index, records merged in index order) and aggregates.
// When cfg.out_dir is nonempty writes trials.csv and summary.json there.
ExperimentResult run_experiment(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const Dictionary& A,
                                const ExperimentConfig& cfg);

Summary summarize(const std::vector<TrialRecord>& records,
                  const ExperimentConfig& cfg, double effective_epsilon);

// Fixed CSV schema (header row; shortest round-trip float formatting).
std::string trials_csv_header();
std::string trial_csv_row(const TrialRecord& rec);
std::string trials_to_csv(const std::vector<TrialRecord>& records);

// Monte Carlo plug-in estimates of E(||A_I^t A_I - Id||_2^q)^{1/q} and
// E(max_{j not in I} ||A_I^t a_j||_2^q)^{1/q} with q = 2 ln m over uniform
// random supports of size p.
std::pair<double, double> estimate_tropp_moments(const Dictionary& A, int p,
                                                 int trials,
                                                 std::uint64_t seed);

struct LwTailResult {
  double empirical = 0.0;  // P(Z0 >= t) over random sign vectors
  double bound = 0.0;      // lemma_lw_tail(t, kappa, |J|)
  double kappa = 0.0;      // max_j ||W_j||_2 (max over trials when resampled)
  int J_size = 0;
  double t = 0.0;
  bool resampled_support = false;
};

// Z0 = max_{j in J} |<W_j, sign(x_I)>| with W_j = (A_I^t A_I)^{-1} A_I^t a_j
// over j not in I. Fixed support drawn once per batch by default; with
// resample_support every trial draws a fresh support (labeled in the
// result). GramSingular propagates.
LwTailResult estimate_lw_tail(const Dictionary& A, int p, double t, int trials,
                              std::uint64_t seed,
                              bool resample_support = false);

}  // namespace sparsebp
