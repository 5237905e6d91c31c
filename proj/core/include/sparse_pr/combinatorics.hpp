#pragma once

#include <cstdint>
#include <vector>

#include "sparse_pr/model.hpp"

namespace sparse_pr {

/// All k-subsets of {0, ..., n-1} in lexicographic order.
std::vector<IndexSet> combinations(int n, int k);

/// Binomial coefficient; saturates at INT64_MAX.
std::int64_t binomial(int n, int k) noexcept;

IndexSet set_intersection(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);

}  // namespace sparse_pr
