#include "nlpm/dynamics.hpp"
#include "nlpm/probes.hpp"

#include <benchmark/benchmark.h>

using namespace nlpm;

namespace {

Field bench_field(int d, int n) { return random_band_limited(make_grid(d, n), 42); }

void BM_ForwardTransform(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  Field f = bench_field(d, n);
  for (auto _ : state) benchmark::DoNotOptimize(forward_transform(f));
}
BENCHMARK(BM_ForwardTransform)->Args({1, 256})->Args({1, 1024})->Args({2, 128})->Args({2, 256});

void BM_FracLaplacianSpectral(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  Field f = bench_field(d, n);
  for (auto _ : state) benchmark::DoNotOptimize(frac_laplacian_spectral(f, 1.5));
}
BENCHMARK(BM_FracLaplacianSpectral)->Args({1, 256})->Args({2, 128});

void BM_FracLaplacianLatticeSum(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  Field f = bench_field(d, n);
  for (auto _ : state) benchmark::DoNotOptimize(frac_laplacian_latticesum(f, 1.5, 4));
}
BENCHMARK(BM_FracLaplacianLatticeSum)->Args({1, 128})->Args({2, 32});

void BM_Rhs(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const ModelParams params = make_params(d, d - 0.5, 0.5, Regime::FastDiffusion, 1e-3);
  Field f = bench_field(d, n);
  for (auto _ : state) benchmark::DoNotOptimize(rhs(f, params));
}
BENCHMARK(BM_Rhs)->Args({1, 256})->Args({1, 1024})->Args({2, 128});

void BM_Step(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const ModelParams params = make_params(d, d - 0.5, 0.5, Regime::FastDiffusion, 1e-3);
  InitialDataSpec spec;
  spec.kind = InitialDataSpec::Kind::CosineBump;
  const Field init = prepare_initial_data(spec, params, make_grid(d, n));
  for (auto _ : state) {
    state.PauseTiming();
    RunState rs;
    rs.time = 0.0;
    rs.field = init;
    state.ResumeTiming();
    rs = step(rs, params, StepControl{});
    benchmark::DoNotOptimize(rs);
  }
}
BENCHMARK(BM_Step)->Args({1, 256})->Args({2, 128});

}  // namespace

BENCHMARK_MAIN();
