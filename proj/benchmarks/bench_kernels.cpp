#include <benchmark/benchmark.h>

#include <cmath>

#include "nlsconserve/dynamics.hpp"
#include "nlsconserve/observables.hpp"
#include "nlsconserve/spectral.hpp"

namespace {

using namespace nls;

ComplexField bench_field(int n) {
  const Grid g = make_grid(1, n, 40.0);
  ComplexField u = zero_field(g);
  for (std::size_t j = 0; j < u.values.size(); ++j) {
    const double x = g.coords[j];
    u.values[j] = Complex(std::exp(-x * x / 2.0) * std::cos(x), std::exp(-x * x / 2.0));
  }
  return u;
}

void BM_free_propagate(benchmark::State& state) {
  const ComplexField u = bench_field(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(free_propagate(u, 1e-3));
}
BENCHMARK(BM_free_propagate)->Arg(256)->Arg(1024)->Arg(4096);

void BM_strang_step(benchmark::State& state) {
  const ComplexField u = bench_field(static_cast<int>(state.range(0)));
  const PowerNonlinearity nl = make_nonlinearity(-1.0, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(strang_step(u, nl, 1e-3));
}
BENCHMARK(BM_strang_step)->Arg(256)->Arg(1024)->Arg(4096);

void BM_gradient(benchmark::State& state) {
  const ComplexField u = bench_field(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gradient(u));
}
BENCHMARK(BM_gradient)->Arg(256)->Arg(4096);

void BM_inner_product(benchmark::State& state) {
  const ComplexField u = bench_field(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(inner_product(u, u));
}
BENCHMARK(BM_inner_product)->Arg(256)->Arg(4096);

void BM_observe(benchmark::State& state) {
  const ComplexField u = bench_field(static_cast<int>(state.range(0)));
  const PowerNonlinearity nl = make_nonlinearity(-1.0, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(observe(u, nl, 0.5));
}
BENCHMARK(BM_observe)->Arg(256)->Arg(1024);

void BM_duhamel_integral(benchmark::State& state) {
  const ComplexField u = bench_field(256);
  std::vector<ComplexField> samples;
  for (int m = 0; m < 17; ++m) samples.push_back(free_propagate(u, 0.05 * m));
  for (auto _ : state)
    benchmark::DoNotOptimize(duhamel_integral(samples, 0.8, QuadRule::simpson));
}
BENCHMARK(BM_duhamel_integral);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
