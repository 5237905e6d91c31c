#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sparse_pr/experiments.hpp"
#include "sparse_pr/solver_real.hpp"

using namespace sparse_pr;

namespace {

double measurement_gap(const MeasurementEnsemble& A, const SparseVector& x, const SparseVector& z) {
  const auto ax = measure(A, x);
  const auto az = measure(A, z);
  double gap = 0.0;
  for (int i = 0; i < A.m(); ++i) gap = std::max(gap, std::abs(ax[i] - az[i]));
  return gap;
}

void expect_valid_collision(const MeasurementEnsemble& A, const CollisionPair& pair, int k) {
  EXPECT_LE(pair.x.sparsity(), k);
  EXPECT_LE(pair.z.sparsity(), k);
  EXPECT_LE(measurement_gap(A, pair.x, pair.z), 1e-10 * measure(A, pair.x).max_abs());
  EXPECT_FALSE(phase_equivalent(pair.x, pair.z, 1e-6));
}

SweepConfig small_real_config(int m) {
  SweepConfig config;
  config.n = 8;
  config.k = 2;
  config.m_min = m;
  config.m_max = m;
  config.ensembles_per_m = 100;
  config.seed = 1;
  return config;
}

}  // namespace

TEST(BuildCollision, OneRowTwoColumns) {
  Eigen::MatrixXd M(1, 2);
  M << 1, 2;
  const auto A = MeasurementEnsemble::from_real(M);
  const auto pair = build_collision_real(A, 1);
  const double s = std::sqrt(5.0);
  ASSERT_EQ(pair.x.support(), (IndexSet{0}));
  ASSERT_EQ(pair.z.support(), (IndexSet{1}));
  EXPECT_NEAR(pair.x.values()[0].real(), 2.0 / s, 1e-12);
  EXPECT_NEAR(pair.z.values()[0].real(), 1.0 / s, 1e-12);
  EXPECT_NEAR(measure(A, pair.x)[0], 2.0 / s, 1e-12);
  expect_valid_collision(A, pair, 1);
}

TEST(BuildCollision, GaussianThreeByEight) {
  const auto A = generate_ensemble(Field::Real, 3, 8, 42);
  const auto pair = build_collision_real(A, 2);
  expect_valid_collision(A, pair, 2);
  for (int i : pair.I)
    for (int j : pair.J) EXPECT_NE(i, j);
  EXPECT_GE(solve_l0_real(A, measure(A, pair.x), 2).classes.size(), 2u);
}

TEST(BuildCollision, GaussianFiveByTwelve) {
  const auto A = generate_ensemble(Field::Real, 5, 12, 7);
  const auto pair = build_collision_real(A, 3);
  expect_valid_collision(A, pair, 3);
  EXPECT_EQ(pair.x.sparsity(), 3);
  EXPECT_EQ(pair.z.sparsity(), 3);
}

TEST(BuildCollision, RejectsWhenNotApplicable) {
  EXPECT_THROW(build_collision_real(generate_ensemble(Field::Real, 4, 8, 42), 2), InvalidInput);
  EXPECT_THROW(build_collision_real(generate_ensemble(Field::Complex, 3, 8, 42), 2), InvalidInput);
  EXPECT_THROW(build_collision_real(generate_ensemble(Field::Real, 3, 3, 42), 2), InvalidInput);
}

TEST(SearchCollision, FindsDisjointAndMissesCrafted) {
  const auto A = generate_ensemble(Field::Real, 3, 8, 42);
  const auto found = search_collision_real(A, 2);
  ASSERT_TRUE(found.has_value());
  expect_valid_collision(A, *found, 2);

  Eigen::MatrixXd M(2, 3);
  M << 1, 0, 1, 0, 1, 1;
  EXPECT_FALSE(search_collision_real(MeasurementEnsemble::from_real(M), 1).has_value());
}

TEST(RandomSignal, ShapeAndDeterminism) {
  const auto x = random_sparse_signal(Field::Real, 8, 3, 99);
  EXPECT_EQ(x.sparsity(), 3);
  for (const auto& v : x.values()) {
    EXPECT_GE(std::abs(v), 0.1);
    EXPECT_EQ(v.imag(), 0.0);
  }
  EXPECT_EQ(x.support(), random_sparse_signal(Field::Real, 8, 3, 99).support());
  const auto c = random_sparse_signal(Field::Complex, 8, 2, 99);
  EXPECT_EQ(c.field(), Field::Complex);
  EXPECT_EQ(c.sparsity(), 2);
}

TEST(RecoverySucceeds, NeedsExactlyOneMatchingClass) {
  const SparseVector truth(Field::Real, 3, {1}, {Complex(2.0)});
  SolutionSet one;
  one.classes.push_back({truth.scaled(-1.0), 0.0});
  EXPECT_TRUE(recovery_succeeds(one, truth, 1e-8));
  SolutionSet two = one;
  two.classes.push_back({SparseVector(Field::Real, 3, {0}, {Complex(1.0)}), 0.0});
  EXPECT_FALSE(recovery_succeeds(two, truth, 1e-8));
  EXPECT_FALSE(recovery_succeeds(SolutionSet{}, truth, 1e-8));
}

TEST(Sweep, RealAtTwoKRecoversEverything) {
  const auto result = run_sweep(small_real_config(4));
  ASSERT_EQ(result.rows.size(), 1u);
  EXPECT_EQ(result.rows[0].trials, 100);
  EXPECT_EQ(result.rows[0].successes, 100);
  EXPECT_DOUBLE_EQ(result.rows[0].rate, 1.0);
  EXPECT_FALSE(result.rows[0].heuristic);
}

TEST(Sweep, RealBelowTwoKStillRecoversGenericSignals) {
  // m = 2k - 1 admits collisions, but they sit on a measure-zero set of
  // signals: random draws almost never hit them.
  const auto result = run_sweep(small_real_config(3));
  ASSERT_EQ(result.rows.size(), 1u);
  EXPECT_EQ(result.rows[0].successes, 100);
}

TEST(Sweep, ComplexAtFourKMinusTwo) {
  SweepConfig config;
  config.field = Field::Complex;
  config.n = 8;
  config.k = 2;
  config.m_min = 6;
  config.m_max = 6;
  config.ensembles_per_m = 100;
  const auto result = run_sweep(config);
  ASSERT_EQ(result.rows.size(), 1u);
  EXPECT_EQ(result.rows[0].successes, 100);
  EXPECT_FALSE(result.rows[0].heuristic);
}

TEST(Sweep, DeterministicBytes) {
  auto config = small_real_config(3);
  config.m_max = 4;
  config.ensembles_per_m = 10;
  config.signals_per_ensemble = 2;
  const auto a = emit_results(run_sweep(config), OutputFormat::Csv);
  const auto b = emit_results(run_sweep(config), OutputFormat::Csv);
  EXPECT_EQ(a, b);
  EXPECT_NE(config.fingerprint(), small_real_config(3).fingerprint());
  EXPECT_EQ(config.fingerprint().size(), 16u);
}

TEST(Sweep, ValidationRejectsBadRanges) {
  auto config = small_real_config(4);
  config.m_min = 5;
  config.m_max = 4;
  EXPECT_THROW(config.validate(), InvalidInput);
  config = small_real_config(4);
  config.ensembles_per_m = 0;
  EXPECT_THROW(run_sweep(config), InvalidInput);
  config = small_real_config(4);
  config.k = 9;
  EXPECT_THROW(config.validate(), InvalidInput);
}

TEST(Emit, EmptySweepIsHeaderOnly) {
  SweepResult empty;
  EXPECT_EQ(emit_results(empty, OutputFormat::Csv), "m,trials,successes,rate,mean_ms,fragile\n");
  EXPECT_TRUE(parse_result_rows(emit_results(empty, OutputFormat::Csv)).empty());
}

TEST(Emit, SingleRowOneDataLine) {
  SweepResult result;
  result.rows.push_back({4, 100, 100, 1.0, 0.0, 0, false});
  const auto csv = emit_results(result, OutputFormat::Csv);
  EXPECT_EQ(csv, "m,trials,successes,rate,mean_ms,fragile\n4,100,100,1,0,0\n");
  EXPECT_EQ(parse_result_rows(csv), result.rows);
}

TEST(Emit, GnuplotRoundTrip) {
  SweepResult result;
  result.config = small_real_config(3);
  result.rows.push_back({3, 10, 9, 0.9, 1.25, 1, false});
  result.rows.push_back({4, 10, 10, 1.0, 0.5, 0, false});
  const auto text = emit_results(result, OutputFormat::Gnuplot);
  EXPECT_EQ(text.rfind("# sparse_pr recovery sweep\n", 0), 0u);
  EXPECT_EQ(parse_result_rows(text), result.rows);
}

TEST(Emit, WriteResultsUsesFingerprint) {
  const auto dir = std::filesystem::temp_directory_path() / "sparse_pr_emit_test";
  std::filesystem::remove_all(dir);
  SweepResult result;
  result.config = small_real_config(4);
  result.rows.push_back({4, 100, 100, 1.0, 0.0, 0, false});
  const auto path = write_results(result, OutputFormat::Json, dir);
  EXPECT_EQ(path.filename().string(), "sweep_" + result.config.fingerprint() + ".json");
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  EXPECT_EQ(buffer.str(), emit_results(result, OutputFormat::Json));
  std::filesystem::remove_all(dir);
}

TEST(Emit, WriteFailureNamesPath) {
  const auto file = std::filesystem::temp_directory_path() / "sparse_pr_not_a_dir";
  std::ofstream(file) << "x";
  SweepResult result;
  try {
    write_results(result, OutputFormat::Csv, file / "sub");
    FAIL() << "expected an error";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("sparse_pr_not_a_dir"), std::string::npos);
  }
  std::filesystem::remove(file);
}

TEST(Emit, FormatNames) {
  EXPECT_EQ(parse_output_format("gnuplot"), OutputFormat::Gnuplot);
  EXPECT_EQ(file_extension(OutputFormat::Gnuplot), "dat");
  EXPECT_THROW(parse_output_format("xml"), InvalidInput);
}

TEST(UniquenessCheck, ForwardOnCertifiedGaussian) {
  const auto check = uniqueness_bidirectional_check(generate_ensemble(Field::Real, 4, 8, 42), 2);
  EXPECT_EQ(check.d, 5);
  EXPECT_TRUE(check.forward_applicable);
  EXPECT_TRUE(check.forward_ok);
  EXPECT_EQ(check.forward_trials, 100);
  EXPECT_FALSE(check.converse_applicable);
}

TEST(UniquenessCheck, ConverseOnGaussianBeyondBound) {
  const auto A = generate_ensemble(Field::Real, 4, 8, 42);
  const auto check = uniqueness_bidirectional_check(A, 3);
  EXPECT_FALSE(check.forward_applicable);
  EXPECT_TRUE(check.converse_applicable);
  EXPECT_TRUE(check.converse_ok);
  ASSERT_TRUE(check.collision.has_value());
  expect_valid_collision(A, *check.collision, 3);
}

TEST(UniquenessCheck, CraftedMatrixIsCertifiedAtOne) {
  Eigen::MatrixXd M(2, 3);
  M << 1, 0, 1, 0, 1, 1;
  const auto check = uniqueness_bidirectional_check(MeasurementEnsemble::from_real(M), 1);
  EXPECT_EQ(check.d, 3);
  EXPECT_TRUE(check.certified);
  EXPECT_TRUE(check.forward_ok);
  EXPECT_FALSE(check.converse_applicable);
}
