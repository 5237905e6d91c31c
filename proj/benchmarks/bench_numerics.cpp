#include <benchmark/benchmark.h>

#include "sparse_pr/model.hpp"
#include "sparse_pr/numerics.hpp"

using namespace sparse_pr;

static void BM_NumericalRank(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const Eigen::MatrixXd M = generate_ensemble(Field::Real, size, size, 5).real_entries();
  for (auto _ : state) benchmark::DoNotOptimize(numerical_rank(M).rank);
}
BENCHMARK(BM_NumericalRank)->Arg(4)->Arg(8)->Arg(16);

static void BM_LeastSquares(benchmark::State& state) {
  const int rows = static_cast<int>(state.range(0));
  const Eigen::MatrixXd M = generate_ensemble(Field::Real, rows, 3, 9).real_entries();
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(rows);
  for (auto _ : state) benchmark::DoNotOptimize(least_squares(M, b).residual_norm);
}
BENCHMARK(BM_LeastSquares)->Arg(4)->Arg(12);

static void BM_HermitianEig(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Eigen::MatrixXcd B = generate_ensemble(Field::Complex, k, k, 11).entries();
  const Eigen::MatrixXcd X = B * B.adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_top_eig(X).eigenvalues(0));
}
BENCHMARK(BM_HermitianEig)->Arg(2)->Arg(3);
