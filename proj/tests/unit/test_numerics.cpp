#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sparse_pr/numerics.hpp"
#include "sparse_pr/rng.hpp"

using namespace sparse_pr;

namespace {

Eigen::MatrixXd seeded_gaussian(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) M(i, j) = rng.normal();
  }
  return M;
}

}  // namespace

TEST(NumericalRank, ZeroSingularValue) {
  Eigen::MatrixXd M(2, 2);
  M << 1, 0, 0, 0;
  const auto r = numerical_rank(M);
  EXPECT_EQ(r.rank, 1);
  EXPECT_EQ(r.max_rank, 2);
  EXPECT_FALSE(r.full());
  EXPECT_FALSE(r.fragile());
}

TEST(NumericalRank, NearParallelRows) {
  Eigen::MatrixXd M(2, 2);
  M << 1, 1, 1, 1 + 1e-13;
  EXPECT_EQ(numerical_rank(M, 1e-10).rank, 1);
}

TEST(NumericalRank, GaussianSeed5FullRank) {
  const Eigen::MatrixXd M = seeded_gaussian(4, 4, 5);
  EXPECT_EQ(numerical_rank(M).rank, 4);
  EXPECT_EQ(oracle::elimination_rank(M), 4);
}

TEST(NumericalRank, FragileNearThreshold) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(3, 3);
  M(2, 2) = 3e-10;  // within 10x of the 1e-10 threshold
  const auto r = numerical_rank(M);
  EXPECT_EQ(r.rank, 3);
  EXPECT_TRUE(r.fragile());
  M(2, 2) = 1e-6;
  EXPECT_FALSE(numerical_rank(M).fragile());
}

TEST(NumericalRank, ComplexAndEmptyAndErrors) {
  Eigen::MatrixXcd C(2, 2);
  C << Complex(1, 1), Complex(2, 2), Complex(0, 1), Complex(0, 2);
  EXPECT_EQ(numerical_rank(C).rank, 1);
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd(Eigen::MatrixXd::Zero(3, 2))).rank, 0);
  Eigen::MatrixXd bad(1, 1);
  bad << std::nan("");
  EXPECT_THROW(numerical_rank(bad), InvalidInput);
  EXPECT_THROW(numerical_rank(Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2)), 0.0), InvalidInput);
}

TEST(LeastSquares, ConsistentSingleColumn) {
  Eigen::MatrixXd M(2, 1);
  M << 1, 1;
  Eigen::VectorXd b(2);
  b << 2, 2;
  const auto r = least_squares(M, b);
  EXPECT_NEAR(r.x(0), 2.0, 1e-14);
  EXPECT_NEAR(r.residual_norm, 0.0, 1e-14);
}

TEST(LeastSquares, OrthogonalRightHandSide) {
  Eigen::MatrixXd M(2, 1);
  M << 1, 1;
  Eigen::VectorXd b(2);
  b << 1, -1;
  const auto r = least_squares(M, b);
  EXPECT_NEAR(r.x(0), 0.0, 1e-14);
  EXPECT_NEAR(r.residual_norm, std::sqrt(2.0), 1e-14);
}

TEST(LeastSquares, RecoversPlantedSolution) {
  const Eigen::MatrixXd M = seeded_gaussian(6, 3, 9);
  const Eigen::VectorXd x0 = seeded_gaussian(3, 1, 90);
  const auto r = least_squares(M, M * x0);
  EXPECT_LE((r.x - x0).norm(), 1e-10);
  EXPECT_LE(r.residual_norm, 1e-10);
  EXPECT_FALSE(r.degenerate);
}

TEST(LeastSquares, DegenerateUsesMinimumNorm) {
  Eigen::MatrixXd M(3, 2);
  M << 1, 1, 2, 2, 3, 3;
  Eigen::VectorXd b(3);
  b << 2, 4, 6;
  const auto r = least_squares(M, b);
  EXPECT_TRUE(r.degenerate);
  EXPECT_NEAR(r.x(0), 1.0, 1e-12);
  EXPECT_NEAR(r.x(1), 1.0, 1e-12);
}

TEST(LeastSquaresFactor, MatchesOneShotSolve) {
  const Eigen::MatrixXd M = seeded_gaussian(5, 2, 21);
  const LeastSquaresFactor factor(M);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Eigen::VectorXd b = seeded_gaussian(5, 1, 100 + s);
    const auto direct = least_squares(M, b);
    EXPECT_LE((factor.solve(b) - direct.x).norm(), 1e-12);
    EXPECT_NEAR(factor.residual_norm(b), direct.residual_norm, 1e-12);
  }
  Eigen::MatrixXd dup(3, 2);
  dup << 1, 1, 0, 0, 2, 2;
  EXPECT_TRUE(LeastSquaresFactor(dup).degenerate());
}

TEST(HermitianTopEig, Diagonal) {
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(2, 2);
  X(0, 0) = 4.0;
  X(1, 1) = 1.0;
  const auto e = hermitian_top_eig(X);
  EXPECT_NEAR(e.eigenvalues(0), 4.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues(1), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.top()(0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.top()(1)), 0.0, 1e-14);
}

TEST(HermitianTopEig, RankOneGram) {
  Eigen::VectorXcd x(2);
  x << 1.0, Complex(0.0, 1.0);
  const Eigen::MatrixXcd X = x * x.adjoint();
  const auto e = hermitian_top_eig(X);
  EXPECT_NEAR(e.eigenvalues(0), 2.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues(1), 0.0, 1e-14);
  // v1 parallel to x: |<v1, x>| = ||x||.
  EXPECT_NEAR(std::abs(e.top().dot(x)), std::sqrt(2.0), 1e-12);
}

TEST(HermitianTopEig, ReconstructsRandomHermitian) {
  Rng rng(11);
  Eigen::MatrixXcd B(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) B(i, j) = rng.complex_normal();
  }
  const Eigen::MatrixXcd X = B + B.adjoint();
  const auto e = hermitian_top_eig(X);
  Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) rebuilt += e.eigenvalues(i) * e.eigenvectors.col(i) * e.eigenvectors.col(i).adjoint();
  EXPECT_LE((rebuilt - X).norm(), 1e-10 * X.norm());
  for (int i = 1; i < 4; ++i) EXPECT_GE(e.eigenvalues(i - 1), e.eigenvalues(i));
}

TEST(HermitianTopEig, RejectsNonHermitian) {
  Eigen::MatrixXcd X(2, 2);
  X << 1.0, 2.0, 3.0, 1.0;
  EXPECT_THROW(hermitian_top_eig(X), InvalidInput);
}

TEST(NullSpaceVector, OnesRow) {
  Eigen::MatrixXd M(1, 2);
  M << 1, 1;
  const Eigen::VectorXd v = null_space_vector(M);
  EXPECT_NEAR(std::abs(v(0)), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(v(0) + v(1), 0.0, 1e-14);
}

TEST(NullSpaceVector, OneTwoRow) {
  Eigen::MatrixXd M(1, 2);
  M << 1, 2;
  const Eigen::VectorXd v = null_space_vector(M);
  EXPECT_NEAR(v(0), 2.0 / std::sqrt(5.0), 1e-14);
  EXPECT_NEAR(v(1), -1.0 / std::sqrt(5.0), 1e-14);
}

TEST(NullSpaceVector, RandomWideMatrix) {
  const Eigen::MatrixXd M = seeded_gaussian(3, 4, 13);
  const Eigen::VectorXd v = null_space_vector(M);
  EXPECT_LE((M * v).norm(), 1e-10);
  EXPECT_NEAR(v.norm(), 1.0, 1e-14);
  EXPECT_THROW(null_space_vector(Eigen::MatrixXd::Identity(3, 3)), InvalidInput);
}

TEST(NullSpaceBasis, DimensionAndOrthonormality) {
  const Eigen::MatrixXd M = seeded_gaussian(2, 5, 14);
  const Eigen::MatrixXd N = null_space_basis(M);
  ASSERT_EQ(N.cols(), 3);
  EXPECT_LE((M * N).norm(), 1e-10);
  EXPECT_LE((N.transpose() * N - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-12);
  EXPECT_EQ(null_space_basis(Eigen::MatrixXd::Identity(2, 2)).cols(), 0);
}
