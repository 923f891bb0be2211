// Eigen-solver throughput: Lanczos top-k vs the dense full spectrum.

#include <benchmark/benchmark.h>

#include "sqsc/eigs.hpp"
#include "sqsc/kernel.hpp"
#include "sqsc/nonlin.hpp"
#include "sqsc/synth.hpp"

namespace {

Eigen::MatrixXd kernel_fixture(sqsc::Index n) {
  sqsc::MixtureConfig mix;
  mix.p = 256;
  mix.n = n;
  mix.rho = 4.0;
  mix.seed = 17;
  const sqsc::DataMatrix X = sqsc::generate(mix, 1);
  return sqsc::build_kernel(X, sqsc::Nonlinearity::sign(), sqsc::KernelLayout::Dense, {}).dense;
}

void BM_lanczos_top2(benchmark::State& state) {
  const Eigen::MatrixXd K = kernel_fixture(state.range(0));
  const sqsc::Index n = K.rows();
  const sqsc::LinOp op = [&](const double* x, double* y) {
    Eigen::Map<Eigen::VectorXd>(y, n) = K * Eigen::Map<const Eigen::VectorXd>(x, n);
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqsc::top_eigenpairs(op, n, 2));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_lanczos_top2)->Arg(256)->Arg(512)->Arg(1024)->Complexity();

void BM_full_spectrum(benchmark::State& state) {
  const Eigen::MatrixXd K = kernel_fixture(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqsc::full_spectrum(K, false));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_full_spectrum)->Arg(256)->Arg(512)->Arg(1024)->Complexity();

}  // namespace

BENCHMARK_MAIN();
