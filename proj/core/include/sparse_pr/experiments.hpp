#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sparse_pr/distance.hpp"
#include "sparse_pr/model.hpp"
#include "sparse_pr/solution.hpp"

namespace sparse_pr {

/// One recovery-rate sweep over a range of measurement counts.
///
/// Trial t of row m uses ensemble seed derive_seed(seed, m, t / signals_per_ensemble)
/// and signal seed derive_seed(ensemble_seed, t % signals_per_ensemble, kSignalStream),
/// so every trial is reproducible on its own.
struct SweepConfig {
  Field field = Field::Real;
  int n = 8;
  int k = 2;
  int m_min = 4;
  int m_max = 4;
  int ensembles_per_m = 100;
  int signals_per_ensemble = 1;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  /// Wall-clock timing makes output non-reproducible, so mean_ms is written
  /// as 0 unless this is set.
  bool record_timing = false;

  int trials_per_m() const noexcept { return ensembles_per_m * signals_per_ensemble; }
  void validate() const;
  /// 16 hex digits of FNV-1a over the canonical JSON form.
  std::string fingerprint() const;
};

struct SweepRow {
  int m = 0;
  int trials = 0;
  int successes = 0;
  double rate = 0.0;
  double mean_ms = 0.0;
  int fragile = 0;         // trials with a borderline acceptance decision
  bool heuristic = false;  // solver could not run exactly at this m

  bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;
};

inline constexpr std::uint64_t kSignalStream = 0x5167'6e61'6c00'0001ULL;

/// k-sparse signal: uniform support, standard (complex) normal values,
/// resampled until every |value| >= 0.1.
SparseVector random_sparse_signal(Field field, int n, int k, std::uint64_t seed);

/// Recovery counts as a success iff the solver returns exactly one class and
/// it is phase-equivalent to the truth within tol * max(1, ||x||_inf).
bool recovery_succeeds(const SolutionSet& solutions, const SparseVector& truth, double tol);

SweepResult run_sweep(const SweepConfig& config);

struct CollisionPair {
  SparseVector x;
  SparseVector z;
  IndexSet I;
  IndexSet J;
};

/// Disjoint-support collision for m <= 2k - 1: a null vector of [A_I, -A_J]
/// split into x_I and z_J gives Ax = Az. The concatenated vector has unit
/// norm and x's first entry is positive. Support pairs are tried in
/// lexicographic order until both halves are genuinely k-sparse.
CollisionPair build_collision_real(const MeasurementEnsemble& A, int k);

/// Exhaustive search for two non-phase-equivalent vectors of sparsity <= k
/// with equal measurements: every (I, J) with 1 <= |I|, |J| <= k and every
/// sign pattern, identity included. Empty when none exists.
std::optional<CollisionPair> search_collision_real(const MeasurementEnsemble& A, int k);

struct UniquenessCheck {
  int k = 0;
  int d = 0;
  bool certified = false;
  bool forward_applicable = false;
  bool forward_ok = false;
  int forward_trials = 0;
  int forward_successes = 0;
  bool converse_applicable = false;
  bool converse_ok = false;
  /// Collision witnessing the converse, when one was found.
  std::optional<CollisionPair> collision;
  /// Classes returned by solve_l0_real on the measurement built from the
  /// distance witness (0 when no witness measurement was available).
  int witness_measurement_classes = 0;
  std::string details;
};

/// Forward: when certify_unique passes at k, `trials` random k-sparse signals
/// must all be recovered uniquely and correctly. Converse: when
/// k > floor((d-1)/2), a collision or a multi-class solution must be shown.
UniquenessCheck uniqueness_bidirectional_check(const MeasurementEnsemble& A, int k, int trials = 100,
                                         std::uint64_t seed = 0);

enum class OutputFormat { Csv, Json, Gnuplot };

OutputFormat parse_output_format(std::string_view text);
std::string_view file_extension(OutputFormat format) noexcept;

/// CSV header: m,trials,successes,rate,mean_ms,fragile. Byte-stable for a
/// fixed result.
std::string emit_results(const SweepResult& result, OutputFormat format);

/// Writes <dir>/sweep_<fingerprint>.<ext> and returns the path. Throws
/// std::runtime_error naming the path on I/O failure.
std::filesystem::path write_results(const SweepResult& result, OutputFormat format,
                                    const std::filesystem::path& directory);

/// Parses CSV or gnuplot text produced by emit_results back into rows.
std::vector<SweepRow> parse_result_rows(std::string_view text);

}  // namespace sparse_pr
