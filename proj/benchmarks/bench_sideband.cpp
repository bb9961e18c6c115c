#include <benchmark/benchmark.h>

#include "cs2d/sideband.hpp"

using namespace cs2d;

static void BM_SteadyState(benchmark::State& st) {
  RateModelConfig m;
  m.n_max = static_cast<int>(st.range(0));
  m.explicit_repump = st.range(1) != 0;
  const auto Q = build_rate_matrix(m);
  for (auto _ : st) benchmark::DoNotOptimize(steady_state(Q).p3[1]);
}
BENCHMARK(BM_SteadyState)->Args({20, 0})->Args({40, 0})->Args({40, 1})->Args({80, 1});

static void BM_Evolve(benchmark::State& st) {
  RateModelConfig m;
  m.n_max = static_cast<int>(st.range(0));
  const auto Q = build_rate_matrix(m);
  const auto p0 = thermal_population(5.8, m.n_max);
  std::vector<double> t;
  for (int i = 0; i <= 100; ++i) t.push_back(i * 1e-5);
  for (auto _ : st) benchmark::DoNotOptimize(evolve(Q, p0, t).p.size());
}
BENCHMARK(BM_Evolve)->Arg(20)->Arg(40);
