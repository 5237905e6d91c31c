#pragma once

#include <vector>

#include "sparse_pr/solution.hpp"

namespace sparse_pr::detail {

/// Appends `candidate` unless an existing class is phase-equivalent to it
/// within tol * max(1, ||x||_inf).
void merge_class(std::vector<SolutionClass>& classes, SolutionClass candidate, double tol);

/// max_i | |A x|_i - y_i |
double magnitude_residual(const Eigen::MatrixXcd& A, const SparseVector& x, const MeasurementVector& y);

}  // namespace sparse_pr::detail
