#include "mplab/field.hpp"
#include "mplab/kernels.hpp"
#include "mplab/scenarios.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace {

using namespace mplab;

std::vector<double> wave(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(0.37 * static_cast<double>(i)) + 0.1 * std::cos(1.3 * i);
  return v;
}

template <kernels::Exec E>
void BM_laplacian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const kernels::GridShape g{n, n, 2};
  const auto in = wave(g.size());
  std::vector<double> out(g.size());
  for (auto _ : state) {
    kernels::laplacian(E, g, 1.0, 1.0, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

template <kernels::Exec E>
void BM_rk4_combine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = wave(n);
  std::vector<double> y(n, 0.0);
  for (auto _ : state) {
    kernels::rk4_combine(E, 1e-3, k, k, k, k, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <kernels::Exec E>
void BM_step_pde(benchmark::State& state) {
  const auto s = *find_scenario("S3");
  PdeConfig pde = build_pde(s.config, E);
  Section y = sample_section(pde.grid, pde.initial, pde.horizon().start);
  for (auto _ : state) {
    y = step_pde(pde, y);
    y.time = pde.horizon().start;
    benchmark::DoNotOptimize(y.data.data());
  }
}

}  // namespace

BENCHMARK(BM_laplacian<kernels::Exec::serial>)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_laplacian<kernels::Exec::parallel>)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_rk4_combine<kernels::Exec::serial>)->Arg(1 << 12)->Arg(1 << 18);
BENCHMARK(BM_rk4_combine<kernels::Exec::parallel>)->Arg(1 << 12)->Arg(1 << 18);
BENCHMARK(BM_step_pde<kernels::Exec::serial>);
BENCHMARK(BM_step_pde<kernels::Exec::parallel>);

BENCHMARK_MAIN();
