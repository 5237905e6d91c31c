#pragma once

#include <Eigen/Dense>

namespace sparse_pr {

/// Relative singular-value threshold shared by every rank decision.
inline constexpr double kDefaultRankTol = 1e-10;

/// A rank decision is "fragile" when the kept/dropped singular values sit
/// within this factor of the threshold.
inline constexpr double kFragileGap = 10.0;

struct RankDecision {
  int rank = 0;
  int max_rank = 0;  // min(rows, cols)
  double smallest_kept_sv = 0.0;
  double largest_dropped_sv = 0.0;
  double tol_used = 0.0;

  bool full() const noexcept { return rank == max_rank; }
  bool fragile() const noexcept;
};

/// rank = #{sigma_i > tol_rel * sigma_max}. Throws InvalidInput on non-finite
/// entries or tol_rel <= 0.
RankDecision numerical_rank(const Eigen::MatrixXd& M, double tol_rel = kDefaultRankTol);
RankDecision numerical_rank(const Eigen::MatrixXcd& M, double tol_rel = kDefaultRankTol);
RankDecision rank_from_singular_values(const Eigen::VectorXd& sv, int max_rank, double tol_rel);

struct LeastSquaresResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  bool degenerate = false;  // M was numerically column-rank deficient
};

LeastSquaresResult least_squares(const Eigen::MatrixXd& M, const Eigen::VectorXd& b);

/// Thin QR of a tall matrix, reused across many right-hand sides.
class LeastSquaresFactor {
 public:
  explicit LeastSquaresFactor(const Eigen::MatrixXd& M, double tol_rel = kDefaultRankTol);

  bool degenerate() const noexcept { return degenerate_; }
  int rows() const noexcept { return static_cast<int>(q_.rows()); }
  int cols() const noexcept { return static_cast<int>(q_.cols()); }

  /// ||(I - QQ^T) b||_2.
  double residual_norm(const Eigen::VectorXd& b) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  Eigen::MatrixXd q_;
  Eigen::MatrixXd r_;
  bool degenerate_ = false;
};

struct HermitianEigen {
  Eigen::VectorXd eigenvalues;   // descending
  Eigen::MatrixXcd eigenvectors; // column i pairs with eigenvalues(i)
  Eigen::VectorXcd top() const { return eigenvectors.col(0); }
};

/// Eigen-decomposition of a Hermitian matrix; symmetry error above 1e-12
/// (relative to max |X_ij|) is rejected.
HermitianEigen hermitian_top_eig(const Eigen::MatrixXcd& X);

/// Unit vector spanning the direction of the smallest right singular vector.
/// Throws InvalidInput when M has numerically full column rank.
Eigen::VectorXd null_space_vector(const Eigen::MatrixXd& M, double tol_rel = kDefaultRankTol);

/// Orthonormal basis of the numerical null space (columns).
Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& M, double tol_rel = kDefaultRankTol);

}  // namespace sparse_pr
