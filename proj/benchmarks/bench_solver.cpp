#include <benchmark/benchmark.h>

#include "rmc/problem.hpp"
#include "rmc/solver.hpp"

namespace {

void BM_Solve(benchmark::State& state) {
  const auto n = state.range(0);
  const rmc::Instance inst = rmc::make_instance(n, n, 5, 0.3, 0.05, 1);
  rmc::SolverConfig cfg;
  cfg.rank = 5;
  cfg.beta_mode = rmc::BetaMode::Oracle;
  cfg.max_iters = 50;
  cfg.record_timing = false;
  if (state.range(1) == 1) cfg.kind = rmc::ThresholdKind::scad(3);
  for (auto _ : state) {
    const auto tr = rmc::solve(inst.data.observations, cfg, &inst.truth);
    benchmark::DoNotOptimize(tr.l_hat.data());
    state.counters["iters"] = tr.iterations;
  }
}
BENCHMARK(BM_Solve)->Args({200, 0})->Args({200, 1})->Args({400, 0})->Unit(benchmark::kMillisecond);

void BM_SUpdate(benchmark::State& state) {
  const auto n = state.range(0);
  const rmc::Instance inst = rmc::make_instance(n, n, 5, 0.3, 0.1, 2);
  rmc::IterateState st;
  st.l = inst.truth.l_star;
  st.xi = inst.truth.entry_scale();
  const rmc::SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(rmc::s_update(st, inst.data.observations, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(inst.data.observations.size()));
}
BENCHMARK(BM_SUpdate)->Arg(400)->Arg(1000);

void BM_MakeInstance(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(rmc::make_instance(n, n, 5, 0.3, 0.1, 3));
}
BENCHMARK(BM_MakeInstance)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
