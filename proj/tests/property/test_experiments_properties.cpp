#include <gtest/gtest.h>

#include <sstream>

#include "generators.hpp"
#include "sparse_pr/experiments.hpp"
#include "sparse_pr/json_io.hpp"
#include "sparse_pr/text_io.hpp"

using namespace sparse_pr;
using gen::for_all;
using gen::Gen;

namespace {

SweepConfig random_config(Gen& g) {
  SweepConfig config;
  config.field = g.integer(0, 3) == 0 ? Field::Complex : Field::Real;
  config.k = g.integer(1, 2);
  config.n = g.integer(config.k + 2, 6);
  config.m_min = g.integer(config.k, config.field == Field::Complex ? 4 * config.k - 2 : 2 * config.k);
  config.m_max = config.m_min + g.integer(0, 1);
  config.ensembles_per_m = g.integer(1, 3);
  config.signals_per_ensemble = g.integer(1, 2);
  config.seed = g.seed();
  return config;
}

SweepResult random_result(Gen& g) {
  SweepResult result;
  result.config = random_config(g);
  const int rows = g.integer(0, 4);
  for (int r = 0; r < rows; ++r) {
    SweepRow row;
    row.m = g.integer(1, 20);
    row.trials = g.integer(1, 500);
    row.successes = g.integer(0, row.trials);
    row.rate = static_cast<double>(row.successes) / row.trials;
    row.mean_ms = g.coin() ? 0.0 : g.uniform(0, 100);
    row.fragile = g.integer(0, row.trials);
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace

TEST(ExperimentsProperties, SweepIsByteDeterministic) {
  for_all(100, 51, [](Gen& g, int c) {
    const auto config = random_config(g);
    const auto a = run_sweep(config);
    const auto b = run_sweep(config);
    EXPECT_EQ(emit_results(a, OutputFormat::Csv), emit_results(b, OutputFormat::Csv)) << "case " << c;
    for (const auto& row : a.rows) {
      EXPECT_LE(row.successes, row.trials);
      EXPECT_EQ(row.trials, config.trials_per_m());
      EXPECT_DOUBLE_EQ(row.rate, static_cast<double>(row.successes) / row.trials);
    }
  });
}

TEST(ExperimentsProperties, CsvAndGnuplotRoundTrip) {
  for_all(200, 52, [](Gen& g, int c) {
    const auto result = random_result(g);
    for (auto format : {OutputFormat::Csv, OutputFormat::Gnuplot}) {
      auto rows = parse_result_rows(emit_results(result, format));
      // Text formats don't carry the heuristic flag.
      for (auto& row : rows) row.heuristic = false;
      EXPECT_EQ(rows, result.rows) << "case " << c;
    }
  });
}

TEST(ExperimentsProperties, JsonRoundTrip) {
  for_all(200, 53, [](Gen& g, int c) {
    const auto result = random_result(g);
    const auto text = emit_results(result, OutputFormat::Json);
    const auto back = sweep_result_from_json(nlohmann::json::parse(text));
    EXPECT_EQ(back.rows, result.rows) << "case " << c;
    EXPECT_EQ(emit_results(back, OutputFormat::Json), text) << "case " << c;
  });
}

TEST(ExperimentsProperties, CollisionPairsAreValid) {
  for_all(100, 54, [](Gen& g, int c) {
    const int k = g.integer(1, 3);
    const int m = g.integer(1, 2 * k - 1);
    const int n = g.integer(2 * k, 2 * k + 3);
    const auto A = generate_ensemble(Field::Real, m, n, g.seed());
    const auto pair = build_collision_real(A, k);
    const auto ax = measure(A, pair.x);
    const auto az = measure(A, pair.z);
    double gap = 0.0;
    for (int i = 0; i < m; ++i) gap = std::max(gap, std::abs(ax[i] - az[i]));
    EXPECT_LE(gap, 1e-10 * ax.max_abs()) << "case " << c;
    EXPECT_FALSE(phase_equivalent(pair.x, pair.z, 1e-6)) << "case " << c;
    EXPECT_LE(pair.x.sparsity(), k);
    EXPECT_LE(pair.z.sparsity(), k);
  });
}

TEST(ExperimentsProperties, TextFormatsRoundTrip) {
  for_all(200, 55, [](Gen& g, int c) {
    const Field field = g.coin() ? Field::Real : Field::Complex;
    const int m = g.integer(1, 6);
    const int n = g.integer(1, 8);
    const auto A = generate_ensemble(field, m, n, g.seed());
    std::ostringstream mat;
    write_matrix(mat, A);
    std::istringstream mat_in(mat.str());
    EXPECT_EQ(read_matrix(mat_in), A) << "case " << c;

    const auto x = g.sparse(field, n, g.integer(0, n));
    std::ostringstream vec;
    write_sparse_vector(vec, x);
    std::istringstream vec_in(vec.str());
    const auto x_back = read_sparse_vector(vec_in, field);
    EXPECT_EQ(x_back.support(), x.support()) << "case " << c;
    EXPECT_EQ(x_back.values(), x.values()) << "case " << c;

    const auto y = measure(A, x);
    std::ostringstream meas;
    write_measurements(meas, y);
    std::istringstream meas_in(meas.str());
    EXPECT_EQ(read_measurements(meas_in), y) << "case " << c;
  });
}
