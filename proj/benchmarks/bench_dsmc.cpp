#include <benchmark/benchmark.h>

#include "cs2d/dsmc.hpp"
#include "cs2d/rng.hpp"
#include "cs2d/trap.hpp"

using namespace cs2d;

namespace {

GasState gas(long N, GasMode mode, int planes) {
  Rng rng = make_rng(7);
  std::vector<long> counts(planes, N / planes);
  auto s = sample_thermal_gas(reference_trap(), mode, counts, {10e-6, 10e-6, 8e-6},
                              rng, Constants{});
  s.rng_seed = 7;
  return s;
}

}  // namespace

static void BM_AdvanceFree(benchmark::State& st) {
  auto s = gas(st.range(0), GasMode::classical3d, 1);
  for (auto _ : st) {
    advance_free(s, 1e-4);
    benchmark::DoNotOptimize(s.particles.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_AdvanceFree)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_ClassicalStep(benchmark::State& st) {
  DsmcEngine eng(gas(st.range(0), GasMode::classical3d, 4), DsmcConfig{});
  for (auto _ : st) eng.step(1e-4);
  st.SetItemsProcessed(st.iterations() * st.range(0));
  st.counters["collisions"] = static_cast<double>(eng.counters().collisions);
}
BENCHMARK(BM_ClassicalStep)->Arg(1000)->Arg(5000)->Arg(20000);

static void BM_QuantizedStep(benchmark::State& st) {
  DsmcConfig cfg;
  cfg.quasi2d_rate = 4.0;
  DsmcEngine eng(gas(st.range(0), GasMode::quantized_axial, 4), cfg);
  for (auto _ : st) eng.step(1e-4);
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_QuantizedStep)->Arg(1000)->Arg(5000)->Arg(20000);

BENCHMARK_MAIN();
