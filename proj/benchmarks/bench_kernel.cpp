// Kernel construction and matvec throughput.

#include <benchmark/benchmark.h>

#include "sqsc/kernel.hpp"
#include "sqsc/nonlin.hpp"
#include "sqsc/synth.hpp"

namespace {

sqsc::DataMatrix fixture(sqsc::Index p, sqsc::Index n) {
  sqsc::MixtureConfig mix;
  mix.p = p;
  mix.n = n;
  mix.rho = 2.0;
  mix.seed = 99;
  return sqsc::generate(mix, 1);
}

void BM_build_dense_binarize(benchmark::State& state) {
  const sqsc::DataMatrix X = fixture(256, state.range(0));
  const sqsc::Nonlinearity f = sqsc::Nonlinearity::binarize(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqsc::build_kernel(X, f, sqsc::KernelLayout::Dense, {}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_build_dense_binarize)->Arg(256)->Arg(512)->Arg(1024)->Complexity();

void BM_build_sparse_binarize(benchmark::State& state) {
  const sqsc::DataMatrix X = fixture(256, state.range(0));
  const sqsc::Nonlinearity f = sqsc::Nonlinearity::binarize(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqsc::build_kernel(X, f, sqsc::KernelLayout::Sparse, {}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_build_sparse_binarize)->Arg(256)->Arg(512)->Arg(1024)->Complexity();

void BM_build_uniform_mask(benchmark::State& state) {
  const sqsc::DataMatrix X = fixture(256, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqsc::uniform_mask_kernel(X, 0.3, 7, {}));
  }
}
BENCHMARK(BM_build_uniform_mask)->Arg(512)->Arg(1024);

void BM_sparse_matvec(benchmark::State& state) {
  const sqsc::DataMatrix X = fixture(256, state.range(0));
  const sqsc::Kernel K =
      sqsc::build_kernel(X, sqsc::Nonlinearity::binarize(1.0), sqsc::KernelLayout::Sparse, {});
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(state.range(0), -1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(K.sparse.matvec(x, 1));
  }
  state.SetItemsProcessed(state.iterations() * K.report.nnz);
}
BENCHMARK(BM_sparse_matvec)->Arg(512)->Arg(1024)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
