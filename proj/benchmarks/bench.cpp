#include <benchmark/benchmark.h>

#include "haarint/asymptotics.hpp"
#include "haarint/haar.hpp"
#include "haarint/reduction.hpp"
#include "haarint/saddle.hpp"

using namespace haarint;

static void BM_SampleUnitary(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng({1, 0});
  for (auto _ : state) benchmark::DoNotOptimize(sample_unitary(n, rng));
}
BENCHMARK(BM_SampleUnitary)->Arg(8)->Arg(64)->Arg(256);

static void BM_SampleBlock(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng({2, 0});
  for (auto _ : state) benchmark::DoNotOptimize(sample_block(n, 2, rng));
}
BENCHMARK(BM_SampleBlock)->Arg(64)->Arg(512);

static void BM_WeingartenLeading(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  MomentPattern pattern;
  for (int m = 0; m < p; ++m) {
    pattern.factors.push_back({m % 3, m % 2});
    pattern.conj_factors.push_back({m % 3, m % 2});
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(weingarten_leading(pattern, 64));
}
BENCHMARK(BM_WeingartenLeading)->Arg(4)->Arg(6)->Arg(8);

static void BM_ReducedIntegralQ1(benchmark::State& state) {
  const auto f = IntegrandSpec::exp_gram_trace(0.5, false);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        reduced_integral_q1(f, 200, ReductionMode::kExact));
}
BENCHMARK(BM_ReducedIntegralQ1);

static void BM_DetpowerQ2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(detpower_integral_q2(n));
}
BENCHMARK(BM_DetpowerQ2)->Arg(4)->Arg(8)->Arg(12);

static void BM_PairQuadrature(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(pair_exp_quartic_integral_q1(8.0, 100));
}
BENCHMARK(BM_PairQuadrature);

static void BM_LinearSaddle(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  Rng rng({3, 0});
  ComplexMatrix g(q, q);
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < q; ++i) g(i, j) = rng.complex_normal();
  ComplexMatrix y = (g + g.adjoint()) / 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(linear_saddle(y, 200));
}
BENCHMARK(BM_LinearSaddle)->Arg(1)->Arg(4)->Arg(16);

BENCHMARK_MAIN();
