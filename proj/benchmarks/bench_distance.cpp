#include <benchmark/benchmark.h>

#include "sparse_pr/distance.hpp"

using namespace sparse_pr;

static void BM_MinDistance(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto A = generate_ensemble(Field::Real, m, 8, 42);
  DistanceOptions options;
  options.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(phase_gen_min_distance(A, options).d);
}
BENCHMARK(BM_MinDistance)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_Spark(benchmark::State& state) {
  const auto A = generate_ensemble(Field::Real, 6, 12, 42);
  for (auto _ : state) benchmark::DoNotOptimize(spark_at_least(A, 7).passed);
}
BENCHMARK(BM_Spark)->Unit(benchmark::kMillisecond);
