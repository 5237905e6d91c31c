#include <benchmark/benchmark.h>

#include "sparse_pr/experiments.hpp"
#include "sparse_pr/solver_complex.hpp"
#include "sparse_pr/solver_real.hpp"

using namespace sparse_pr;

static void BM_SolveReal(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto A = generate_ensemble(Field::Real, 2 * k, 8, 1);
  const auto y = measure(A, random_sparse_signal(Field::Real, 8, k, 2));
  RealSolverOptions options;
  options.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(solve_l0_real(A, y, k, options).classes.size());
}
BENCHMARK(BM_SolveReal)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_SolveComplex(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int n = k == 3 ? 12 : 8;
  const auto A = generate_ensemble(Field::Complex, 4 * k - 2, n, 1);
  const auto y = measure(A, random_sparse_signal(Field::Complex, n, k, 2));
  ComplexSolverOptions options;
  options.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(solve_l0_complex(A, y, k, options).classes.size());
}
BENCHMARK(BM_SolveComplex)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_CollisionProbe(benchmark::State& state) {
  const auto A = generate_ensemble(Field::Complex, 2, 4, 8);
  for (auto _ : state) benchmark::DoNotOptimize(collision_probe_complex(A, 1, 10, 3, 1).objective);
}
BENCHMARK(BM_CollisionProbe)->Unit(benchmark::kMillisecond);
