#include <benchmark/benchmark.h>

#include "rmc/linalg.hpp"
#include "rmc/problem.hpp"
#include "rmc/random.hpp"

namespace {

rmc::Matrix noisy_low_rank(rmc::Index n, rmc::Index r) {
  rmc::Matrix a = rmc::gen_ground_truth(n, n, r, 1).l_star;
  rmc::CounterRng rng(2);
  for (rmc::Index j = 0; j < n; ++j)
    for (rmc::Index i = 0; i < n; ++i) a(i, j) += 0.1 * rng.normal();
  return a;
}

void BM_DenseSvd(benchmark::State& state) {
  const auto n = state.range(0);
  const rmc::Matrix a = noisy_low_rank(n, 5);
  const auto opts = rmc::with_method(rmc::SvdMethod::Dense);
  for (auto _ : state) benchmark::DoNotOptimize(rmc::truncated_svd(a, 5, opts));
}
BENCHMARK(BM_DenseSvd)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SubspaceSvd(benchmark::State& state) {
  const auto n = state.range(0);
  const rmc::Matrix a = noisy_low_rank(n, 5);
  auto opts = rmc::with_method(rmc::SvdMethod::Subspace);
  for (auto _ : state) benchmark::DoNotOptimize(rmc::truncated_svd(a, 5, opts));
}
BENCHMARK(BM_SubspaceSvd)->Arg(100)->Arg(200)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

// Warm start from the answer itself, as in the late iterations of a solve.
void BM_SubspaceSvdWarm(benchmark::State& state) {
  const auto n = state.range(0);
  const rmc::Matrix a = noisy_low_rank(n, 5);
  auto opts = rmc::with_method(rmc::SvdMethod::Subspace);
  opts.start = rmc::truncated_svd(a, 5, opts).v;
  for (auto _ : state) benchmark::DoNotOptimize(rmc::truncated_svd(a, 5, opts));
}
BENCHMARK(BM_SubspaceSvdWarm)->Arg(100)->Arg(200)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SpectralNorm(benchmark::State& state) {
  const rmc::Matrix a = noisy_low_rank(state.range(0), 5);
  for (auto _ : state) benchmark::DoNotOptimize(rmc::spectral_norm(a));
}
BENCHMARK(BM_SpectralNorm)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace
