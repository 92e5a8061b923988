// Serial reference against OpenMP-parallel kernels: the (gamma_C, p) sweep
// and the settle() ensemble.

#include "nhb/dynamics.hpp"
#include "nhb/phase_diagram.hpp"

#include <benchmark/benchmark.h>

namespace {

nhb::GridSpec bench_grid() {
  nhb::GridSpec spec;
  spec.gamma.points = 100;
  spec.p.points = 100;
  return spec;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto m = nhb::moderate_saturation_params();
  const auto spec = bench_grid();
  const auto opts = nhb::grid_cell_options(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nhb::sweep_serial(m, spec, opts));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(spec.gamma.points * spec.p.points));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto m = nhb::moderate_saturation_params();
  const auto spec = bench_grid();
  const auto opts = nhb::grid_cell_options(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nhb::sweep(m, spec, opts, int(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(spec.gamma.points * spec.p.points));
}

void BM_EnsembleSerial(benchmark::State& state) {
  auto m = nhb::moderate_saturation_params();
  m.gamma_C = 1.0;
  m.p = 0.9;
  const auto initials = nhb::sample_initials(1, 16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nhb::settle_ensemble_serial(m, initials, 500.0));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(initials.size()));
}

void BM_EnsembleParallel(benchmark::State& state) {
  auto m = nhb::moderate_saturation_params();
  m.gamma_C = 1.0;
  m.p = 0.9;
  const auto initials = nhb::sample_initials(1, 16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nhb::settle_ensemble(m, initials, 500.0, {}, int(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(initials.size()));
}

} // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EnsembleSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EnsembleParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
