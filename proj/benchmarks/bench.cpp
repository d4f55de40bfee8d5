#include <benchmark/benchmark.h>

#include "wchaos/breuer_major.hpp"
#include "wchaos/gaussim.hpp"
#include "wchaos/rng.hpp"
#include "wchaos/tensor.hpp"

using namespace wchaos;

static void BM_Contract(benchmark::State& state) {
  int h_dim = static_cast<int>(state.range(0));
  Kernel f(3, h_dim, 0, 0, BasisMode::whitened);
  PhiloxStream rng(1, 0);
  for (double& c : f.coords()) c = rng.next_normal();
  for (auto _ : state) {
    Kernel c = contract(f, f, 1);
    benchmark::DoNotOptimize(c.coords().data());
  }
}
BENCHMARK(BM_Contract)->Arg(4)->Arg(8)->Arg(12);

static void BM_Symmetrize(benchmark::State& state) {
  Kernel f(4, static_cast<int>(state.range(0)), 0, 0, BasisMode::whitened);
  PhiloxStream rng(2, 0);
  for (double& c : f.coords()) c = rng.next_normal();
  for (auto _ : state) {
    Kernel s = symmetrize(f);
    benchmark::DoNotOptimize(s.coords().data());
  }
}
BENCHMARK(BM_Symmetrize)->Arg(4)->Arg(8);

static void BM_ToeplitzTraceDense(benchmark::State& state) {
  long n = state.range(0);
  CovModel cov = CovModel::power_law(-2.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(bm_contraction_norm(2, 1, n, cov, ToeplitzPath::dense));
}
BENCHMARK(BM_ToeplitzTraceDense)->Arg(256)->Arg(1024);

static void BM_ToeplitzTraceFFT(benchmark::State& state) {
  long n = state.range(0);
  CovModel cov = CovModel::power_law(-2.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(bm_contraction_norm(2, 1, n, cov, ToeplitzPath::fft));
}
BENCHMARK(BM_ToeplitzTraceFFT)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_CirculantSample(benchmark::State& state) {
  CirculantEmbedding emb(CovModel::fbm(0.7), static_cast<int>(state.range(0)));
  PhiloxStream rng(3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(emb.sample(rng).data());
}
BENCHMARK(BM_CirculantSample)->Arg(1024)->Arg(8192);

BENCHMARK_MAIN();
