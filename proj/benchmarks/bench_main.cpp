#include <benchmark/benchmark.h>

#include "sparsebp/certificates.hpp"
#include "sparsebp/experiments.hpp"
#include "sparsebp/linalg.hpp"
#include "sparsebp/rng.hpp"
#include "sparsebp/solver.hpp"

using namespace sparsebp;

namespace {

Eigen::VectorXd trial_data(const Dictionary& A, int p, std::uint64_t seed,
                           double eps, SparseSignal* x0_out) {
  Rng rng(seed);
  const SparseSignal x0 =
      sample_generic_p_sparse(A.cols(), p, MagnitudeRule::ConstantOne, rng);
  Eigen::VectorXd b(A.rows());
  for (int i = 0; i < A.rows(); ++i) b(i) = rng.normal();
  b *= eps / b.norm();
  if (x0_out) *x0_out = x0;
  return A.entries() * x0.dense() + b;
}

void BM_SolveBpdn(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Dictionary A = build_matrix(MatrixKind::IdentityDct, n, 2 * n, 0);
  const Eigen::VectorXd y = trial_data(A, 5, 17, 0.1, nullptr);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_bpdn(A, y, 0.1));
  }
}
BENCHMARK(BM_SolveBpdn)->Arg(64)->Arg(128)->Arg(256);

void BM_OracleSolve(benchmark::State& state) {
  Rng rng(5);
  Eigen::MatrixXd M(6, 10);
  for (int j = 0; j < 10; ++j) {
    for (int i = 0; i < 6; ++i) M(i, j) = rng.normal();
  }
  const Dictionary A = Dictionary::normalized(std::move(M));
  const Eigen::VectorXd y = trial_data(A, 2, 23, 0.05, nullptr);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_solve(A, y, 0.2 * y.norm()));
  }
}
BENCHMARK(BM_OracleSolve);

void BM_ComputeCertificate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Dictionary A = build_matrix(MatrixKind::IdentityDct, n, 2 * n, 0);
  Rng rng(9);
  const SparseSignal x0 =
      sample_generic_p_sparse(2 * n, 8, MagnitudeRule::ConstantOne, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_certificate(A, x0));
  }
}
BENCHMARK(BM_ComputeCertificate)->Arg(64)->Arg(128)->Arg(512);

void BM_SpectralNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Dictionary A = build_matrix(MatrixKind::Signs, n, 2 * n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_norm(A.entries()));
  }
}
BENCHMARK(BM_SpectralNorm)->Arg(64)->Arg(256);

void BM_SampleGenericPSparse(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_generic_p_sparse(4096, 64, MagnitudeRule::ConstantOne, rng));
  }
}
BENCHMARK(BM_SampleGenericPSparse);

void BM_RunTrial(benchmark::State& state) {
  const Dictionary A = build_matrix(MatrixKind::IdentityDct, 128, 256, 0);
  ExperimentConfig cfg;
  cfg.n = 128;
  cfg.m = 256;
  cfg.p = 5;
  cfg.epsilon = 0.1;
  cfg.root_seed = 77;
  int index = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trial(A, cfg, index++ % 64));
  }
}
BENCHMARK(BM_RunTrial);

}  // namespace

BENCHMARK_MAIN();
