#pragma once

#include <cstddef>
#include <functional>

namespace sparse_pr {

/// Worker count: SPARSE_PR_THREADS if set to a positive integer, otherwise
/// std::thread::hardware_concurrency() (at least 1).
int default_worker_count();

/// Runs body(i) for i in [0, count) on up to `workers` threads (0 = default).
/// Each index runs exactly once; callers write results into per-index slots
/// and reduce afterwards, so output does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, int workers = 0);

}  // namespace sparse_pr
