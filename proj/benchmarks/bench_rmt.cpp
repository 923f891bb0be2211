// Limiting-theory evaluation costs: resolvent, density grids, catalogues.

#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "sqsc/nonlin.hpp"
#include "sqsc/rmt.hpp"

namespace {

sqsc::SpectrumModel model() {
  return sqsc::model_from_operator(sqsc::Nonlinearity::binarize(0.8), 0.5, 3.0, 4.0);
}

void BM_stieltjes(benchmark::State& state) {
  const sqsc::SpectrumModel md = model();
  for (auto _ : state) {
    for (int i = 0; i < 1000; ++i) {
      const std::complex<double> z(-2.0 + 0.006 * i, 1e-6);
      benchmark::DoNotOptimize(sqsc::stieltjes(md, z));
    }
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_stieltjes);

void BM_density_grid(benchmark::State& state) {
  const sqsc::SpectrumModel md = model();
  const sqsc::SupportDescription sup = sqsc::support_edges(md);
  std::vector<double> grid(static_cast<std::size_t>(state.range(0)));
  const double lo = sup.edges.front() - 0.2, hi = sup.edges.back() + 0.2;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
  }
  sqsc::DensityOptions opts;
  opts.richardson = state.range(1) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqsc::density(md, grid, opts));
  }
}
BENCHMARK(BM_density_grid)->Args({512, 0})->Args({512, 1})->Args({2048, 1});

void BM_support_edges(benchmark::State& state) {
  const sqsc::SpectrumModel md = model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqsc::support_edges(md));
  }
}
BENCHMARK(BM_support_edges);

void BM_spike_catalogue(benchmark::State& state) {
  sqsc::SpectrumModel md =
      sqsc::model_from_operator(sqsc::Nonlinearity::quantize(3, 0.5), 0.25, 5.0, 4.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqsc::general_spikes(md));
  }
}
BENCHMARK(BM_spike_catalogue);

void BM_optimal_threshold_quantize(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqsc::optimal_threshold(sqsc::NonlinKind::Quantize,
                                                     static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_optimal_threshold_quantize)->Arg(2)->Arg(5)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
