#pragma once

#include "sparse_pr/model.hpp"
#include "sparse_pr/solution.hpp"

namespace sparse_pr {

struct RealSolverOptions {
  /// Residual/support threshold, relative to ||y||_inf (absolute when y = 0).
  /// Also the phase-class deduplication tolerance.
  double tol = 1e-8;
  int workers = 0;
};

/// Exact l0 phase retrieval over R.
///
/// For k = 0, 1, ..., k_max, stopping at the first k that admits solutions:
/// every support I of size k and every sign assignment s on the rows with
/// y_i > tol (first such sign fixed to +1) is tried by solving
/// A_I x = s ⊙ y in the least-squares sense; rows with y_i <= tol are hard
/// zero equations. A candidate is kept when its residual is <= tol * sqrt(m)
/// and all k recovered entries exceed tol in magnitude.
SolutionSet solve_l0_real(const MeasurementEnsemble& A, const MeasurementVector& y, int k_max,
                          const RealSolverOptions& options = {});

/// Number of entries of y above tol.
int count_nonzero_measurements(const MeasurementVector& y, double tol);

}  // namespace sparse_pr
