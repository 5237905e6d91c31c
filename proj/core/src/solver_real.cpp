#include "sparse_pr/solver_real.hpp"

#include <cmath>
#include <string>

#include "solution_detail.hpp"
#include "sparse_pr/combinatorics.hpp"
#include "sparse_pr/numerics.hpp"
#include "sparse_pr/parallel.hpp"

namespace sparse_pr {

namespace {

struct SupportOutcome {
  std::vector<SolutionClass> accepted;
  std::int64_t patterns = 0;
  std::int64_t borderline = 0;
};

bool near_threshold(double value, double threshold) {
  return value > threshold / 10.0 && value < threshold * 10.0;
}

}  // namespace

int count_nonzero_measurements(const MeasurementVector& y, double tol) {
  int count = 0;
  for (double v : y.magnitudes()) count += v > tol ? 1 : 0;
  return count;
}

SolutionSet solve_l0_real(const MeasurementEnsemble& A, const MeasurementVector& y, int k_max,
                          const RealSolverOptions& options) {
  if (A.field() != Field::Real) throw InvalidInput("solve_l0_real: ensemble is complex");
  const int m = A.m();
  const int n = A.n();
  if (y.m() != m) {
    throw InvalidInput("solve_l0_real: y has length " + std::to_string(y.m()) + " but A has m = " +
                       std::to_string(m));
  }
  if (k_max < 0 || k_max > std::min(m, n)) throw InvalidInput("solve_l0_real: k_max must lie in [0, min(m, n)]");
  if (!(options.tol > 0.0)) throw InvalidInput("solve_l0_real: tol must be positive");

  SolutionSet out;
  const double ymax = y.max_abs();
  if (ymax == 0.0) {
    out.k_star = 0;
    out.classes.push_back({SparseVector::zero(Field::Real, n), 0.0, SolveMethod::Enumerated, 0.0});
    return out;
  }

  const double threshold = options.tol * ymax;
  const double residual_limit = threshold * std::sqrt(static_cast<double>(m));
  IndexSet signed_rows;
  for (int i = 0; i < m; ++i) {
    if (y[i] > threshold) signed_rows.push_back(i);
  }
  if (signed_rows.size() > 40) throw Unsupported("solve_l0_real: too many nonzero measurements to enumerate signs");
  const std::uint64_t patterns = std::uint64_t{1} << (signed_rows.size() - 1);
  const Eigen::MatrixXd& real = A.real_entries();

  for (int k = 1; k <= k_max; ++k) {
    const auto supports = combinations(n, k);
    std::vector<SupportOutcome> outcomes(supports.size());

    parallel_for(
        supports.size(),
        [&](std::size_t idx) {
          const IndexSet& support = supports[idx];
          Eigen::MatrixXd AI(m, k);
          for (int t = 0; t < k; ++t) AI.col(t) = real.col(support[static_cast<std::size_t>(t)]);
          const LeastSquaresFactor factor(AI);
          // A minimal solution never sits on a dependent support: a null
          // vector would let one entry be cancelled, giving a sparser one.
          if (factor.degenerate()) return;

          SupportOutcome& result = outcomes[idx];
          Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
          for (std::uint64_t code = 0; code < patterns; ++code) {
            b(signed_rows.front()) = y[signed_rows.front()];
            for (std::size_t t = 1; t < signed_rows.size(); ++t) {
              const double sign = ((code >> (t - 1)) & 1U) ? -1.0 : 1.0;
              b(signed_rows[t]) = sign * y[signed_rows[t]];
            }
            ++result.patterns;
            const double residual = factor.residual_norm(b);
            if (near_threshold(residual, residual_limit)) ++result.borderline;
            if (residual > residual_limit) continue;

            const Eigen::VectorXd xI = factor.solve(b);
            if (xI.cwiseAbs().minCoeff() <= threshold) continue;
            std::vector<Complex> values(static_cast<std::size_t>(k));
            for (int t = 0; t < k; ++t) values[static_cast<std::size_t>(t)] = xI(t);
            SparseVector x(Field::Real, n, support, std::move(values));
            const double fit = detail::magnitude_residual(A.entries(), x, y);
            if (fit > threshold) continue;
            result.accepted.push_back({std::move(x), fit, SolveMethod::Enumerated, 0.0});
          }
        },
        options.workers);

    for (auto& outcome : outcomes) {
      out.stats.patterns_tried += outcome.patterns;
      out.stats.borderline += outcome.borderline;
      for (auto& candidate : outcome.accepted) detail::merge_class(out.classes, std::move(candidate), options.tol);
    }
    out.stats.supports_tried += static_cast<std::int64_t>(supports.size());
    if (!out.classes.empty()) {
      out.k_star = k;
      break;
    }
  }
  return out;
}

}  // namespace sparse_pr
