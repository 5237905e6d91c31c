#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sparse_pr/distance.hpp"

using namespace sparse_pr;

namespace {

MeasurementEnsemble crafted() {
  Eigen::MatrixXd M(2, 3);
  M << 1, 0, 1, 0, 1, 1;
  return MeasurementEnsemble::from_real(M);
}

}  // namespace

TEST(Distance, GaussianFourByEightIsMPlusOne) {
  const auto A = generate_ensemble(Field::Real, 4, 8, 42);
  const auto report = phase_gen_min_distance(A);
  EXPECT_EQ(report.d, 5);
  EXPECT_EQ(report.min_rank, 4);
  EXPECT_EQ(report.certified_k(), 2);
  EXPECT_FALSE(report.deficient);
  EXPECT_FALSE(report.fragile);
  ASSERT_TRUE(report.witness.has_value());
  EXPECT_EQ(report.witness->size(), 4);
  EXPECT_EQ(witness_rank(A, report.witness->I, report.witness->J, report.witness->pattern(4)), report.min_rank);
}

TEST(Distance, CraftedMatrixHasNoCollisionAtSizeTwo) {
  // [a1, P a1] with P = diag(1, -1) has rank 1, but its null vectors are
  // (x, -x): a phase-equivalent pair, not a collision.
  const auto A = crafted();
  EXPECT_EQ(witness_rank(A, {0}, {0}, PhasePattern::from_sign_mask(2, 0b10)), 1);
  EXPECT_FALSE(configuration_collision(A, {0}, {0}, PhasePattern::from_sign_mask(2, 0b10)).has_value());

  const auto report = phase_gen_min_distance(A);
  EXPECT_EQ(report.d, 3);
  EXPECT_EQ(report.certified_k(), 1);
  const auto naive = oracle::naive_distance(A.real_entries());
  EXPECT_EQ(naive.d, 3);
}

TEST(Distance, DuplicatedColumnCollidesAtSizeTwo) {
  Eigen::MatrixXd M(3, 4);
  M << 1, 2, 0, 1, -1, 2, 1, 0, 2, 1, 1, 1;
  M.col(1) = M.col(0);
  M(0, 1) = -M(0, 0);  // a2 = P a1 with P = diag(-1, 1, 1)
  const auto A = MeasurementEnsemble::from_real(M);
  const auto report = phase_gen_min_distance(A);
  EXPECT_EQ(report.d, 2);
  EXPECT_TRUE(report.deficient);
  ASSERT_TRUE(report.witness.has_value());
  EXPECT_EQ(report.witness->I, (IndexSet{0}));
  EXPECT_EQ(report.witness->J, (IndexSet{1}));
  EXPECT_EQ(report.overlap.kind, OverlapKind::Disjoint);
  const auto naive = oracle::naive_distance(M);
  EXPECT_EQ(naive.d, report.d);
  EXPECT_EQ(naive.witness, report.witness);
}

TEST(Distance, AlwaysAtMostMPlusOne) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (int m = 2; m <= 4; ++m) {
      const auto report = phase_gen_min_distance(generate_ensemble(Field::Real, m, m + 3, seed));
      EXPECT_LE(report.d, m + 1);
    }
  }
  const auto zero = MeasurementEnsemble::from_real(Eigen::MatrixXd::Zero(3, 4));
  EXPECT_LE(phase_gen_min_distance(zero).d, 4);
}

TEST(Distance, RejectsComplexAndTallMatrices) {
  EXPECT_THROW(phase_gen_min_distance(generate_ensemble(Field::Complex, 2, 4, 1)), Unsupported);
  EXPECT_THROW(phase_gen_min_distance(generate_ensemble(Field::Real, 4, 4, 1)), InvalidInput);
}

TEST(Distance, MaxSupportTruncates) {
  const auto A = generate_ensemble(Field::Real, 4, 8, 42);
  DistanceOptions options;
  options.max_support = 1;
  const auto report = phase_gen_min_distance(A, options);
  EXPECT_TRUE(report.truncated);
  EXPECT_EQ(report.d, 3);
  EXPECT_EQ(report.max_support, 1);
}

TEST(Distance, SingleRowHasNothingAdmissible) {
  Eigen::MatrixXd M(1, 3);
  M << 1, 2, 3;
  const auto report = phase_gen_min_distance(MeasurementEnsemble::from_real(M));
  EXPECT_EQ(report.d, 2);
  EXPECT_FALSE(report.witness.has_value());
}

TEST(WitnessRank, DisjointPairsOfGaussianAreFull) {
  const auto A = generate_ensemble(Field::Real, 4, 8, 42);
  for (std::uint64_t code = 1; code < 8; ++code) {
    EXPECT_EQ(witness_rank(A, {0, 1}, {2, 3}, PhasePattern::from_sign_mask(4, code << 1)), 4);
  }
}

TEST(WitnessRank, IdentityPatternDuplicatesColumns) {
  const auto A = generate_ensemble(Field::Real, 4, 8, 42);
  EXPECT_EQ(witness_rank(A, {0, 3}, {0, 3}, PhasePattern::from_sign_mask(4, 0)), 2);
}

TEST(WitnessRank, RejectsBadIndices) {
  const auto A = generate_ensemble(Field::Real, 4, 8, 42);
  const auto P = PhasePattern::from_sign_mask(4, 2);
  EXPECT_THROW(witness_rank(A, {8}, {0}, P), InvalidInput);
  EXPECT_THROW(witness_rank(A, {2, 1}, {0}, P), InvalidInput);
  EXPECT_THROW(witness_rank(A, {0}, {1}, PhasePattern::from_sign_mask(3, 2)), InvalidInput);
}

TEST(SchurBlock, RankSplitsOnPartialOverlap) {
  const auto A = generate_ensemble(Field::Real, 6, 8, 3);
  const IndexSet I{0, 1, 2};
  const IndexSet J{1, 4, 5};
  const std::uint64_t mask = 0b011010;
  const auto B = schur_reduced_block(A, I, J, mask);
  ASSERT_TRUE(B.has_value());
  EXPECT_EQ(B->cols(), 4);
  EXPECT_EQ(witness_rank(A, I, J, PhasePattern::from_sign_mask(6, mask)), 2 + numerical_rank(*B).rank);
}

TEST(SchurBlock, EmptyWhenASignGroupIsTooSmall) {
  const auto A = generate_ensemble(Field::Real, 4, 8, 3);
  EXPECT_FALSE(schur_reduced_block(A, {0, 1, 2}, {1, 2, 3}, 0b0010).has_value());
}

TEST(CollisionNullVector, SumOfTwoTrivialDirections) {
  // Basis column 0 lies in {x = z}, column 1 in {x = -z}; the sum lies in
  // neither.
  Eigen::MatrixXd basis(2, 2);
  basis << 1, 1, 1, -1;
  basis /= std::sqrt(2.0);
  const auto v = collision_null_vector(basis, {0}, {0});
  ASSERT_TRUE(v.has_value());
  EXPECT_GT(std::abs((*v)(0) - (*v)(1)), 1e-3);
  EXPECT_GT(std::abs((*v)(0) + (*v)(1)), 1e-3);
  EXPECT_FALSE(collision_null_vector(basis.col(0), {0}, {0}).has_value());
}

TEST(Spark, GaussianEveryFourColumnsIndependent) {
  const auto report = spark_at_least(generate_ensemble(Field::Real, 4, 8, 42), 5);
  EXPECT_TRUE(report.passed);
  EXPECT_FALSE(report.deficient_columns.has_value());
}

TEST(Spark, DuplicatedColumnFails) {
  Eigen::MatrixXd M = generate_ensemble(Field::Real, 4, 8, 42).real_entries();
  M.col(1) = M.col(0);
  const auto report = spark_at_least(MeasurementEnsemble::from_real(M), 3);
  EXPECT_FALSE(report.passed);
  ASSERT_TRUE(report.deficient_columns.has_value());
  EXPECT_EQ(*report.deficient_columns, (IndexSet{0, 1}));
}

TEST(Spark, CraftedPasses) {
  EXPECT_TRUE(spark_at_least(crafted(), 3).passed);
  EXPECT_THROW(spark_at_least(crafted(), 4), InvalidInput);
}

TEST(Certify, GaussianFourByEight) {
  const auto A = generate_ensemble(Field::Real, 4, 8, 42);
  const auto two = certify_unique(A, 2);
  EXPECT_TRUE(two.certified);
  EXPECT_TRUE(two.spark_ok);
  EXPECT_EQ(two.distance.d, 5);
  EXPECT_FALSE(two.limiting_witness.has_value());

  const auto three = certify_unique(A, 3);
  EXPECT_FALSE(three.certified);
  EXPECT_FALSE(three.spark_ok);
  ASSERT_TRUE(three.limiting_witness.has_value());
}

TEST(Certify, GaussianThreeByEightFailsAtTwo) {
  const auto cert = certify_unique(generate_ensemble(Field::Real, 3, 8, 42), 2);
  EXPECT_FALSE(cert.certified);
  EXPECT_LE(cert.distance.d, 4);
}

TEST(Certify, CraftedMatrixCertifiedAtOne) {
  const auto cert = certify_unique(crafted(), 1);
  EXPECT_EQ(cert.distance.d, 3);
  EXPECT_TRUE(cert.certified);
  EXPECT_THROW(certify_unique(crafted(), 0), InvalidInput);
}

TEST(Certify, SparkFailureReportsColumns) {
  Eigen::MatrixXd M = generate_ensemble(Field::Real, 4, 8, 42).real_entries();
  M.col(5) = 2.0 * M.col(2);
  const auto cert = certify_unique(MeasurementEnsemble::from_real(M), 1);
  EXPECT_FALSE(cert.certified);
  EXPECT_FALSE(cert.spark_ok);
}

TEST(Overlap, Classification) {
  EXPECT_EQ(classify_overlap({0, 1}, {2, 3}).kind, OverlapKind::Disjoint);
  EXPECT_EQ(classify_overlap({0, 1}, {0, 1}), (OverlapClass{OverlapKind::Full, 2}));
  EXPECT_EQ(classify_overlap({0, 1}, {1, 3}), (OverlapClass{OverlapKind::Partial, 1}));
  EXPECT_EQ(to_string(OverlapClass{OverlapKind::Partial, 1}), "partial(1)");
}
