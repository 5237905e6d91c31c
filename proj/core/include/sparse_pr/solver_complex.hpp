#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sparse_pr/model.hpp"
#include "sparse_pr/solution.hpp"

namespace sparse_pr {

struct ComplexSolverOptions {
  double tol = 1e-8;             // residual threshold relative to ||y||_inf
  double rank_one_tol = 1e-6;    // accept lambda_2 / lambda_1 up to this
  double psd_tol = 1e-8;         // lambda_min >= -psd_tol * lambda_max
  /// Supports with m < k^2 rows cannot be lifted exactly. When allowed they
  /// are searched by multi-start Gauss-Newton and the result is marked
  /// heuristic; otherwise they raise Unsupported.
  bool allow_heuristic = false;
  int heuristic_restarts = 20;
  std::uint64_t seed = 0;
  int workers = 0;
};

/// Per-support result of the rank-one lifting.
///
/// |a^T x|^2 = tr(conj(a) a^T X) with X = x x^*, so on a fixed support the
/// magnitude equations are linear in the k^2 real parameters of a Hermitian
/// X; a rank-one PSD solution gives x up to global phase.
struct LiftedSolveReport {
  IndexSet support;
  Eigen::MatrixXcd X;
  Eigen::VectorXd eigenvalues;  // descending
  double lifted_residual = 0.0; // ||L theta - y^2||_2
  double rank1_defect = 0.0;    // |lambda_2| / lambda_1, 0 when k = 1
  bool determined = false;      // lifted system has full column rank
  bool accepted = false;
  std::optional<SparseVector> x_hat;
};

LiftedSolveReport lifted_solve(const MeasurementEnsemble& A, const MeasurementVector& y, const IndexSet& support,
                               const ComplexSolverOptions& options = {});

/// Exact l0 phase retrieval over C for supports with m >= k^2, with the same
/// minimal-k semantics as solve_l0_real.
SolutionSet solve_l0_complex(const MeasurementEnsemble& A, const MeasurementVector& y, int k_max,
                             const ComplexSolverOptions& options = {});

enum class RefineStatus { Converged, MaxIterations, Stalled, Diverged };

struct RefineResult {
  Eigen::VectorXcd x;
  double residual = 0.0;   // max_i | |A x|_i - y_i |
  double objective = 0.0;  // sum_i (|a_i^T x|^2 - y_i^2)^2
  int steps = 0;           // accepted steps
  RefineStatus status = RefineStatus::MaxIterations;
  std::vector<double> objective_trace;  // objective after each accepted step, starting with the initial one
};

/// Damped Gauss-Newton on sum_i (|a_i^T x|^2 - y_i^2)^2 over Re x, Im x.
/// Steps use the minimum-norm Gauss-Newton direction (the global-phase
/// direction is in the Jacobian's null space); the step length starts at 1
/// and is halved until the objective decreases.
RefineResult refine_gauss_newton(const Eigen::MatrixXcd& A_I, std::span<const double> y, Eigen::VectorXcd x_init,
                                 int iters = 200, double tol = 1e-12);

enum class ProbeVerdict { CollisionFound, NoCollisionFound };

std::string_view to_string(ProbeVerdict verdict) noexcept;

/// Numerical attempt to find two non-equivalent k-sparse vectors with the
/// same phaseless measurements. A NoCollisionFound verdict is evidence, not
/// a uniqueness proof.
struct CollisionProbe {
  std::optional<SparseVector> u;
  std::optional<SparseVector> v;
  double objective = 0.0;  // best || |Au| - |Av| ||_2 with ||u|| = 1
  int restarts = 0;
  std::int64_t pairs_tried = 0;
  ProbeVerdict verdict = ProbeVerdict::NoCollisionFound;
};

inline constexpr double kCollisionThreshold = 1e-8;

/// For each ordered support pair (I, J): draw a random unit u on I, fit v on
/// J to |A_I u| by Gauss-Newton, repeat `restarts` times. Pairs whose best
/// fit is phase-equivalent to u (within 1e-6) are not collisions.
CollisionProbe collision_probe_complex(const MeasurementEnsemble& A, int k, int restarts, std::uint64_t seed,
                                       int workers = 0);

/// Exact k = 1 criterion: some pair of distinct columns has elementwise
/// proportional magnitude vectors (relative tolerance 1e-10).
bool column_magnitude_collision_1sparse(const MeasurementEnsemble& A);

}  // namespace sparse_pr
