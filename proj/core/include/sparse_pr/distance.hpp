#pragma once

#include <cstdint>
#include <optional>

#include "sparse_pr/model.hpp"
#include "sparse_pr/numerics.hpp"

namespace sparse_pr {

/// How the two supports of a witness intersect.
enum class OverlapKind { Disjoint, Full, Partial };

struct OverlapClass {
  OverlapKind kind = OverlapKind::Disjoint;
  int shared = 0;  // |I ∩ J|

  bool operator==(const OverlapClass&) const = default;
};

OverlapClass classify_overlap(const IndexSet& I, const IndexSet& J);
std::string to_string(const OverlapClass& overlap);

/// One configuration (I, J, P) of the phase-generalized distance search.
/// `sign_mask` bit i set means p_ii = -1; bit 0 is always clear.
struct Witness {
  IndexSet I;
  IndexSet J;
  std::uint64_t sign_mask = 0;

  PhasePattern pattern(int m) const { return PhasePattern::from_sign_mask(m, sign_mask); }
  int size() const noexcept { return static_cast<int>(I.size() + J.size()); }
  bool operator==(const Witness&) const = default;
};

struct DistanceOptions {
  std::optional<int> max_support;  // bounds |I| and |J|; defaults to m
  double rank_tol = kDefaultRankTol;
  int workers = 0;  // 0 = default_worker_count()
};

/// Phase-generalized minimum distance d of a real m x n matrix (m < n).
///
/// The search walks configurations (I, J, P) with I, J nonempty,
/// |I| + |J| <= m and P in {±1}^m modulo global sign, P != ±identity.
/// A null vector (x_I, z_J) of [A_I, P A_J] gives A x = -P A z, hence
/// |Ax| = |Az|. Null vectors with x = ±z are the trivial pairs every matrix
/// has (e.g. I = J and Ax vanishing on the flipped rows), so a configuration
/// is counted as colliding only when its null space holds a pair that is not
/// phase-equivalent.
///
/// d - 1 is the minimal rank over colliding configurations; the witness is
/// the first one of that rank in the order (|I|+|J|, I, J, P). When none
/// exists, d = m + 1 and the witness is the first full-rank configuration of
/// size m.
struct DistanceReport {
  int m = 0;
  int n = 0;
  int d = 0;
  int min_rank = 0;
  std::optional<Witness> witness;
  OverlapClass overlap;
  bool deficient = false;   // witness has a collision null vector
  bool fragile = false;     // some rank decision had a gap below kFragileGap
  bool truncated = false;   // max_support prevented reaching size m
  int max_support = 0;
  std::int64_t configurations_checked = 0;

  /// Largest sparsity covered by the distance: floor((d - 1) / 2).
  int certified_k() const noexcept { return (d - 1) / 2; }
};

DistanceReport phase_gen_min_distance(const MeasurementEnsemble& A, const DistanceOptions& options = {});

/// [A_I, P A_J].
Eigen::MatrixXd witness_matrix(const MeasurementEnsemble& A, const IndexSet& I, const IndexSet& J,
                               const PhasePattern& P);

RankDecision witness_rank_decision(const MeasurementEnsemble& A, const IndexSet& I, const IndexSet& J,
                                   const PhasePattern& P, double rank_tol = kDefaultRankTol);

int witness_rank(const MeasurementEnsemble& A, const IndexSet& I, const IndexSet& J, const PhasePattern& P);

/// A vector in the span of `null_basis` (columns, laid out as (x_I, z_J))
/// whose halves are not ±each other as n-vectors, if the span has one.
std::optional<Eigen::VectorXd> collision_null_vector(const Eigen::MatrixXd& null_basis, const IndexSet& I,
                                                     const IndexSet& J);

/// collision_null_vector over the null space of [A_I, P A_J].
std::optional<Eigen::VectorXd> configuration_collision(const MeasurementEnsemble& A, const IndexSet& I,
                                                       const IndexSet& J, const PhasePattern& P,
                                                       double rank_tol = kDefaultRankTol);

/// Reduced block B for a partial-overlap configuration: rows are split by
/// the sign of p_ii, the first w rows of each group are used to eliminate the
/// shared columns, and B stacks the two Schur complements on the
/// non-shared columns. Then rank([A_I, P A_J]) = 2w + rank(B).
/// Empty when either sign group has fewer than w rows or a pivot block is
/// singular.
std::optional<Eigen::MatrixXd> schur_reduced_block(const MeasurementEnsemble& A, const IndexSet& I,
                                                   const IndexSet& J, std::uint64_t sign_mask);

struct SparkReport {
  int s = 0;          // requested: every s - 1 columns independent?
  bool passed = false;
  /// Smallest (then lexicographically first) dependent column set, when
  /// the check failed.
  std::optional<IndexSet> deficient_columns;
  bool fragile = false;
};

/// Brute force over column subsets. Requires 1 <= s <= min(m, n) + 1.
SparkReport spark_at_least(const MeasurementEnsemble& A, int s, double rank_tol = kDefaultRankTol);

struct Certification {
  int k = 0;
  bool certified = false;
  bool spark_ok = false;
  bool fragile = false;
  DistanceReport distance;
  SparkReport spark;
  /// Distance witness when k exceeds floor((d-1)/2); dependent column set
  /// (as I, empty J) when only the spark check failed.
  std::optional<Witness> limiting_witness;
};

/// certified = k <= floor((d-1)/2) AND every 2k columns are independent.
/// The second conjunct covers P = identity (plain Ax = Az collisions),
/// which the distance search excludes.
Certification certify_unique(const MeasurementEnsemble& A, int k, const DistanceOptions& options = {});

}  // namespace sparse_pr
