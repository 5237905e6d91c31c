#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sparse_pr/model.hpp"

namespace sparse_pr {

enum class SolveMethod { Enumerated, Lifted, Refined };

std::string_view to_string(SolveMethod method) noexcept;

struct SolutionClass {
  SparseVector x;                    // canonical representative
  double residual = 0.0;             // max_i | |A x|_i - y_i |
  SolveMethod method = SolveMethod::Enumerated;
  double rank1_defect = 0.0;         // lifted solves only
};

struct SearchStats {
  std::int64_t supports_tried = 0;
  std::int64_t patterns_tried = 0;
  /// Acceptance decisions whose residual fell within 10x of the threshold
  /// on either side.
  std::int64_t borderline = 0;
};

/// All minimal-l0 solutions found, one entry per global-phase class.
struct SolutionSet {
  std::optional<int> k_star;  // empty when nothing was found up to k_max
  std::vector<SolutionClass> classes;
  SearchStats stats;
  bool heuristic = false;     // some support was only searched heuristically

  bool unique() const noexcept { return classes.size() == 1; }
};

}  // namespace sparse_pr
