#include "sparse_pr/solution.hpp"

#include <algorithm>
#include <cmath>

#include "solution_detail.hpp"

namespace sparse_pr {

std::string_view to_string(SolveMethod method) noexcept {
  switch (method) {
    case SolveMethod::Enumerated: return "enumerated";
    case SolveMethod::Lifted: return "lifted";
    case SolveMethod::Refined: return "refined";
  }
  return "unknown";
}

namespace detail {

void merge_class(std::vector<SolutionClass>& classes, SolutionClass candidate, double tol) {
  candidate.x = candidate.x.canonical();
  const double scale = std::max(1.0, candidate.x.max_abs());
  for (auto& existing : classes) {
    if (phase_equivalent(existing.x, candidate.x, tol * scale)) {
      if (candidate.residual < existing.residual) existing = std::move(candidate);
      return;
    }
  }
  classes.push_back(std::move(candidate));
}

double magnitude_residual(const Eigen::MatrixXcd& A, const SparseVector& x, const MeasurementVector& y) {
  const Eigen::VectorXcd r = A * x.dense();
  double worst = 0.0;
  for (int i = 0; i < y.m(); ++i) worst = std::max(worst, std::abs(std::abs(r(i)) - y[i]));
  return worst;
}

}  // namespace detail
}  // namespace sparse_pr
