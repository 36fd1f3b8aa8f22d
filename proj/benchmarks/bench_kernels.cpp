#include <benchmark/benchmark.h>

#include <vector>

#include "kernelkit/decompositions.hpp"
#include "kernelkit/kernels.hpp"
#include "kernelkit/sampling.hpp"

using namespace kk;

namespace {

std::vector<double> linear_grid(size_t n, double a, double b) {
  std::vector<double> g(n);
  for (size_t i = 0; i < n; ++i)
    g[i] = n == 1 ? a : a + (b - a) * i / (double)(n - 1);
  return g;
}

void bm_gram_fbm(benchmark::State& state) {
  KernelSpec spec = KernelSpec::fbm(0.3);
  std::vector<double> grid = linear_grid(state.range(0), 0.01, 5.0);
  for (auto _ : state) {
    GramMatrix g = gram(spec, grid);
    benchmark::DoNotOptimize(g.entries().data());
  }
}
BENCHMARK(bm_gram_fbm)->Arg(32)->Arg(128)->Arg(512);

void bm_psd_certificate(benchmark::State& state) {
  KernelSpec spec = KernelSpec::fbm(0.7);
  std::vector<double> grid = linear_grid(state.range(0), 0.01, 5.0);
  GramMatrix g = gram(spec, grid);
  for (auto _ : state) {
    PsdCertificate c = psd_certificate(g);
    benchmark::DoNotOptimize(c.min_eigenvalue);
  }
}
BENCHMARK(bm_psd_certificate)->Arg(32)->Arg(128);

void bm_schoenberg_a(benchmark::State& state) {
  for (auto _ : state) {
    SeriesResult r = fbm_decomposition_a(0.3, 1.0, 0.5);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(bm_schoenberg_a);

void bm_spectral_kernel(benchmark::State& state) {
  WeightedMeasure m = WeightedMeasure::fbm_spectral(0.3);
  for (auto _ : state) {
    QuadratureResult r = spectral_kernel(m, 1.5, 0.7, 1e-8);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(bm_spectral_kernel);

void bm_sample_paths(benchmark::State& state) {
  KernelSpec spec = KernelSpec::fbm(0.7);
  std::vector<double> grid = linear_grid(8, 0.25, 2.0);
  for (auto _ : state) {
    auto e = sampling::sample_paths(spec, grid, state.range(0), 7);
    benchmark::DoNotOptimize(e.paths.data());
  }
}
BENCHMARK(bm_sample_paths)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
