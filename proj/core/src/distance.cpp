#include "sparse_pr/distance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparse_pr/combinatorics.hpp"
#include "sparse_pr/parallel.hpp"

namespace sparse_pr {

namespace {

void require_indices(const MeasurementEnsemble& A, const IndexSet& set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i] < 0 || set[i] >= A.n()) throw InvalidInput("column index out of range");
    if (i > 0 && set[i] <= set[i - 1]) throw InvalidInput("index set must be strictly increasing");
  }
}

Eigen::MatrixXd columns(const Eigen::MatrixXd& A, const IndexSet& set) {
  Eigen::MatrixXd out(A.rows(), static_cast<Eigen::Index>(set.size()));
  for (std::size_t t = 0; t < set.size(); ++t) out.col(static_cast<Eigen::Index>(t)) = A.col(set[t]);
  return out;
}

Eigen::MatrixXd rows(const Eigen::MatrixXd& M, const IndexSet& set) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(set.size()), M.cols());
  for (std::size_t t = 0; t < set.size(); ++t) out.row(static_cast<Eigen::Index>(t)) = M.row(set[t]);
  return out;
}

/// Subsets of {0..n-1} with sizes 1..max_size, sorted lexicographically as
/// index vectors.
std::vector<IndexSet> lex_subsets(int n, int max_size) {
  std::vector<IndexSet> out;
  for (int size = 1; size <= max_size; ++size) {
    auto part = combinations(n, size);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct PairRef {
  const IndexSet* I;
  const IndexSet* J;
};

/// Ordered pairs with |I| + |J| = size and I <= J. For I != J the mirrored
/// pair (J, I) has the same rank for every P (rows rescaled by P, P^2 = 1),
/// and is lexicographically larger, so it never wins a tie-break.
std::vector<PairRef> level_pairs(const std::vector<IndexSet>& subsets, int size) {
  std::vector<PairRef> out;
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    const int need = size - static_cast<int>(subsets[a].size());
    if (need < 1) continue;
    for (std::size_t b = a; b < subsets.size(); ++b) {
      if (static_cast<int>(subsets[b].size()) == need) out.push_back({&subsets[a], &subsets[b]});
    }
  }
  return out;
}

struct Candidate {
  Witness witness;
  int rank = 0;
};

struct PairOutcome {
  std::optional<std::uint64_t> mask;  // first colliding mask of minimal rank
  int rank = 0;
  bool fragile = false;
  std::int64_t checked = 0;
};

struct LevelOutcome {
  std::optional<Candidate> best;  // minimal rank, first in (I, J, P) order
  bool fragile = false;
  std::int64_t checked = 0;
};

LevelOutcome scan_level(const Eigen::MatrixXd& A, const std::vector<IndexSet>& subsets, int size,
                        const DistanceOptions& options) {
  const int m = static_cast<int>(A.rows());
  const std::uint64_t patterns = std::uint64_t{1} << (m - 1);
  const auto pairs = level_pairs(subsets, size);
  std::vector<PairOutcome> outcomes(pairs.size());

  parallel_for(
      pairs.size(),
      [&](std::size_t idx) {
        const IndexSet& I = *pairs[idx].I;
        const IndexSet& J = *pairs[idx].J;
        const auto a = static_cast<Eigen::Index>(I.size());
        const auto b = static_cast<Eigen::Index>(J.size());
        const Eigen::MatrixXd AJ = columns(A, J);
        Eigen::MatrixXd M(m, a + b);
        M.leftCols(a) = columns(A, I);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, a + b);
        const int max_rank = static_cast<int>(std::min<Eigen::Index>(m, a + b));
        PairOutcome& out = outcomes[idx];
        // Code c enumerates signs of p_22..p_mm; p_11 = +1, c = 0 is the identity.
        for (std::uint64_t code = 1; code < patterns; ++code) {
          const std::uint64_t mask = code << 1;
          for (int i = 0; i < m; ++i) {
            const double sign = ((mask >> i) & 1U) ? -1.0 : 1.0;
            M.row(i).tail(b) = sign * AJ.row(i);
          }
          svd.compute(M);
          const auto decision = rank_from_singular_values(svd.singularValues(), max_rank, options.rank_tol);
          ++out.checked;
          out.fragile = out.fragile || decision.fragile();
          if (decision.rank == a + b || (out.mask && decision.rank >= out.rank)) continue;
          if (collision_null_vector(null_space_basis(M, options.rank_tol), I, J)) {
            out.mask = mask;
            out.rank = decision.rank;
            if (out.rank == 0) break;
          }
        }
      },
      options.workers);

  LevelOutcome level;
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const PairOutcome& pair = outcomes[idx];
    level.checked += pair.checked;
    level.fragile = level.fragile || pair.fragile;
    if (pair.mask && (!level.best || pair.rank < level.best->rank)) {
      level.best = Candidate{Witness{*pairs[idx].I, *pairs[idx].J, *pair.mask}, pair.rank};
    }
  }
  return level;
}

}  // namespace

OverlapClass classify_overlap(const IndexSet& I, const IndexSet& J) {
  const int shared = static_cast<int>(set_intersection(I, J).size());
  if (shared == 0) return {OverlapKind::Disjoint, 0};
  if (I == J) return {OverlapKind::Full, shared};
  return {OverlapKind::Partial, shared};
}

std::string to_string(const OverlapClass& overlap) {
  switch (overlap.kind) {
    case OverlapKind::Disjoint: return "disjoint";
    case OverlapKind::Full: return "full";
    case OverlapKind::Partial: return "partial(" + std::to_string(overlap.shared) + ")";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd witness_matrix(const MeasurementEnsemble& A, const IndexSet& I, const IndexSet& J,
                               const PhasePattern& P) {
  if (A.field() != Field::Real || P.field() != Field::Real) {
    throw Unsupported("witness_matrix: only real ensembles and sign patterns are supported");
  }
  if (P.size() != A.m()) throw InvalidInput("witness_matrix: phase pattern length differs from m");
  require_indices(A, I);
  require_indices(A, J);
  const Eigen::MatrixXd& real = A.real_entries();
  Eigen::MatrixXd M(A.m(), static_cast<Eigen::Index>(I.size() + J.size()));
  M.leftCols(static_cast<Eigen::Index>(I.size())) = columns(real, I);
  Eigen::MatrixXd AJ = columns(real, J);
  for (int i = 0; i < A.m(); ++i) AJ.row(i) *= P.phases()[static_cast<std::size_t>(i)].real();
  M.rightCols(static_cast<Eigen::Index>(J.size())) = AJ;
  return M;
}

RankDecision witness_rank_decision(const MeasurementEnsemble& A, const IndexSet& I, const IndexSet& J,
                                   const PhasePattern& P, double rank_tol) {
  return numerical_rank(witness_matrix(A, I, J, P), rank_tol);
}

int witness_rank(const MeasurementEnsemble& A, const IndexSet& I, const IndexSet& J, const PhasePattern& P) {
  return witness_rank_decision(A, I, J, P).rank;
}

std::optional<Eigen::MatrixXd> schur_reduced_block(const MeasurementEnsemble& A, const IndexSet& I,
                                                   const IndexSet& J, std::uint64_t sign_mask) {
  (void)PhasePattern::from_sign_mask(A.m(), sign_mask);  // validates the mask
  const Eigen::MatrixXd& real = A.real_entries();
  require_indices(A, I);
  require_indices(A, J);
  const IndexSet shared = set_intersection(I, J);
  const IndexSet only_i = set_difference(I, J);
  const IndexSet only_j = set_difference(J, I);
  const auto w = static_cast<Eigen::Index>(shared.size());

  IndexSet plus_rows;
  IndexSet minus_rows;
  for (int i = 0; i < A.m(); ++i) ((sign_mask >> i) & 1U ? minus_rows : plus_rows).push_back(i);
  if (static_cast<Eigen::Index>(plus_rows.size()) < w || static_cast<Eigen::Index>(minus_rows.size()) < w) {
    return std::nullopt;
  }

  const auto rest_cols = static_cast<Eigen::Index>(only_i.size() + only_j.size());
  // Per sign group: [A_shared, A_{I\J}, p * A_{J\I}] restricted to that group's rows.
  const auto group_block = [&](const IndexSet& group, double sign) {
    const Eigen::MatrixXd sub = rows(real, group);
    Eigen::MatrixXd out(sub.rows(), w + rest_cols);
    out.leftCols(w) = columns(sub, shared);
    out.middleCols(w, static_cast<Eigen::Index>(only_i.size())) = columns(sub, only_i);
    out.rightCols(static_cast<Eigen::Index>(only_j.size())) = sign * columns(sub, only_j);
    return out;
  };
  const auto complement = [&](const Eigen::MatrixXd& G) -> std::optional<Eigen::MatrixXd> {
    const Eigen::MatrixXd pivot = G.topLeftCorner(w, w);
    if (w > 0 && !numerical_rank(pivot).full()) return std::nullopt;
    const Eigen::Index below = G.rows() - w;
    if (w == 0) return G.rightCols(rest_cols);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(pivot);
    return Eigen::MatrixXd(G.bottomRightCorner(below, rest_cols) -
                           G.bottomLeftCorner(below, w) * lu.solve(G.topRightCorner(w, rest_cols)));
  };

  const auto c_reduced = complement(group_block(plus_rows, 1.0));
  const auto d_reduced = complement(group_block(minus_rows, -1.0));
  if (!c_reduced || !d_reduced) return std::nullopt;
  Eigen::MatrixXd B(c_reduced->rows() + d_reduced->rows(), rest_cols);
  B << *c_reduced, *d_reduced;
  return B;
}

std::optional<Eigen::VectorXd> collision_null_vector(const Eigen::MatrixXd& null_basis, const IndexSet& I,
                                                     const IndexSet& J) {
  const auto a = static_cast<Eigen::Index>(I.size());
  const auto b = static_cast<Eigen::Index>(J.size());
  if (null_basis.rows() != a + b) throw InvalidInput("collision_null_vector: basis rows differ from |I| + |J|");

  // Deviation of v from x = sign * z, measured on the union of the supports.
  const auto deviation = [&](const Eigen::VectorXd& v, double sign) {
    double worst = 0.0;
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < I.size() || q < J.size()) {
      double x = 0.0;
      double z = 0.0;
      if (q == J.size() || (p < I.size() && I[p] < J[q])) {
        x = v(static_cast<Eigen::Index>(p++));
      } else if (p == I.size() || J[q] < I[p]) {
        z = v(a + static_cast<Eigen::Index>(q++));
      } else {
        x = v(static_cast<Eigen::Index>(p++));
        z = v(a + static_cast<Eigen::Index>(q++));
      }
      worst = std::max(worst, std::abs(x - sign * z));
    }
    return worst;
  };
  constexpr double kTrivialTol = 1e-8;
  const auto trivial = [&](const Eigen::VectorXd& v, double sign) {
    return deviation(v, sign) <= kTrivialTol * v.norm();
  };

  std::optional<Eigen::Index> off_minus;
  std::optional<Eigen::Index> off_plus;
  for (Eigen::Index c = 0; c < null_basis.cols(); ++c) {
    const Eigen::VectorXd v = null_basis.col(c);
    const bool minus = trivial(v, -1.0);
    const bool plus = trivial(v, 1.0);
    if (!minus && !plus) return v;
    if (!minus && !off_minus) off_minus = c;
    if (!plus && !off_plus) off_plus = c;
  }
  // One column lies only in {x = z}, another only in {x = -z}: their sum
  // lies in neither.
  if (off_minus && off_plus) return Eigen::VectorXd(null_basis.col(*off_minus) + null_basis.col(*off_plus));
  return std::nullopt;
}

std::optional<Eigen::VectorXd> configuration_collision(const MeasurementEnsemble& A, const IndexSet& I,
                                                       const IndexSet& J, const PhasePattern& P, double rank_tol) {
  const Eigen::MatrixXd M = witness_matrix(A, I, J, P);
  // Wide matrices always have a null space, so compare against the column
  // count rather than min(rows, cols).
  if (numerical_rank(M, rank_tol).rank >= M.cols()) return std::nullopt;
  return collision_null_vector(null_space_basis(M, rank_tol), I, J);
}

// ---------------------------------------------------------------------------

DistanceReport phase_gen_min_distance(const MeasurementEnsemble& A, const DistanceOptions& options) {
  if (A.field() != Field::Real) {
    throw Unsupported("phase-generalized distance is only defined for real ensembles");
  }
  const int m = A.m();
  const int n = A.n();
  if (m >= n) throw InvalidInput("phase-generalized distance requires m < n");
  if (m > 62) throw Unsupported("phase-generalized distance: m too large for exhaustive search");
  const int max_support = std::clamp(options.max_support.value_or(m), 1, m);

  DistanceReport report;
  report.m = m;
  report.n = n;
  report.max_support = max_support;

  // With m = 1 every sign pattern is ±identity: nothing admissible to search.
  const int top = std::min(m, 2 * max_support);
  if (m < 2 || top < 2) {
    report.d = top + 1;
    report.min_rank = top;
    report.truncated = top < m;
    return report;
  }

  const Eigen::MatrixXd& real = A.real_entries();
  const auto subsets = lex_subsets(n, max_support);

  // A collision null vector survives adding columns (pad it with zeros), and
  // any configuration can be grown to size `top` inside the support bound.
  // So if level `top` is clean, all smaller levels are too.
  LevelOutcome top_level = scan_level(real, subsets, top, options);
  report.configurations_checked += top_level.checked;
  report.fragile = top_level.fragile;

  std::optional<Witness> witness;
  if (top_level.best) {
    std::optional<Candidate> best;
    for (int size = 2; size <= top; ++size) {
      LevelOutcome level = size == top ? std::move(top_level) : scan_level(real, subsets, size, options);
      if (size < top) {
        report.configurations_checked += level.checked;
        report.fragile = report.fragile || level.fragile;
      }
      if (level.best && (!best || level.best->rank < best->rank)) best = std::move(level.best);
    }
    witness = best->witness;
    report.deficient = true;
  } else {
    // No collision anywhere: d = top + 1. The witness is the first
    // configuration of size `top` with full rank, when one exists.
    report.truncated = top < m;
    report.d = top + 1;
    report.min_rank = top;
    const std::uint64_t patterns = std::uint64_t{1} << (m - 1);
    for (const auto& pair : level_pairs(subsets, top)) {
      for (std::uint64_t code = 1; code < patterns && !witness; ++code) {
        const auto decision = witness_rank_decision(A, *pair.I, *pair.J, PhasePattern::from_sign_mask(m, code << 1),
                                                    options.rank_tol);
        if (decision.rank == top) witness = Witness{*pair.I, *pair.J, code << 1};
      }
      if (witness) break;
    }
    if (witness) report.overlap = classify_overlap(witness->I, witness->J);
    report.witness = std::move(witness);
    return report;
  }

  const auto decision = witness_rank_decision(A, witness->I, witness->J, witness->pattern(m), options.rank_tol);
  report.fragile = report.fragile || decision.fragile();
  report.min_rank = decision.rank;
  report.d = decision.rank + 1;
  report.overlap = classify_overlap(witness->I, witness->J);
  report.witness = std::move(witness);
  return report;
}

// ---------------------------------------------------------------------------

SparkReport spark_at_least(const MeasurementEnsemble& A, int s, double rank_tol) {
  const int limit = std::min(A.m(), A.n()) + 1;
  if (s < 1 || s > limit) {
    throw InvalidInput("spark_at_least: s must lie in [1, min(m, n) + 1]");
  }
  SparkReport report;
  report.s = s;

  const auto dependent = [&](const IndexSet& cols, bool& fragile) {
    Eigen::MatrixXcd sub(A.m(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t t = 0; t < cols.size(); ++t) sub.col(static_cast<Eigen::Index>(t)) = A.entries().col(cols[t]);
    const auto decision = A.field() == Field::Real ? numerical_rank(Eigen::MatrixXd(sub.real()), rank_tol)
                                                   : numerical_rank(sub, rank_tol);
    fragile = fragile || decision.fragile();
    return !decision.full();
  };

  // Independence is inherited by subsets, so checking size s-1 decides it.
  bool any_dependent = false;
  if (s >= 2) {
    for (const auto& cols : combinations(A.n(), s - 1)) {
      if (dependent(cols, report.fragile)) {
        any_dependent = true;
        break;
      }
    }
  }
  report.passed = !any_dependent;
  if (report.passed) return report;

  for (int size = 1; size < s && !report.deficient_columns; ++size) {
    for (const auto& cols : combinations(A.n(), size)) {
      bool ignored = false;
      if (dependent(cols, ignored)) {
        report.deficient_columns = cols;
        break;
      }
    }
  }
  return report;
}

Certification certify_unique(const MeasurementEnsemble& A, int k, const DistanceOptions& options) {
  if (k < 1) throw InvalidInput("certify_unique: k must be >= 1");
  Certification out;
  out.k = k;
  out.distance = phase_gen_min_distance(A, options);

  if (2 * k <= std::min(A.m(), A.n())) {
    out.spark = spark_at_least(A, 2 * k + 1, options.rank_tol);
    out.spark_ok = out.spark.passed;
  } else {
    // More than m columns are always dependent.
    out.spark.s = 2 * k + 1;
    out.spark.passed = false;
    out.spark_ok = false;
  }

  const bool distance_ok = k <= out.distance.certified_k();
  out.certified = distance_ok && out.spark_ok;
  out.fragile = out.distance.fragile || out.spark.fragile;
  if (!distance_ok) {
    out.limiting_witness = out.distance.witness;
  } else if (!out.spark_ok && out.spark.deficient_columns) {
    out.limiting_witness = Witness{*out.spark.deficient_columns, {}, 0};
  }
  return out;
}

}  // namespace sparse_pr
