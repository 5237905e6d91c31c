#include "sparse_pr/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "sparse_pr/model.hpp"

namespace sparse_pr {

namespace {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& M, const char* what) {
  if (!M.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entries");
}

}  // namespace

bool RankDecision::fragile() const noexcept {
  if (tol_used <= 0.0) return false;  // zero matrix: nothing to decide
  const bool kept_close = rank > 0 && smallest_kept_sv < kFragileGap * tol_used;
  const bool dropped_close = rank < max_rank && largest_dropped_sv * kFragileGap > tol_used;
  return kept_close || dropped_close;
}

RankDecision rank_from_singular_values(const Eigen::VectorXd& sv, int max_rank, double tol_rel) {
  if (!(tol_rel > 0.0)) throw InvalidInput("numerical_rank: tol_rel must be positive");
  RankDecision d;
  d.max_rank = max_rank;
  const double smax = sv.size() > 0 ? sv.maxCoeff() : 0.0;
  d.tol_used = tol_rel * smax;
  if (smax == 0.0) return d;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > d.tol_used) {
      ++d.rank;
      d.smallest_kept_sv = d.rank == 1 ? sv(i) : std::min(d.smallest_kept_sv, sv(i));
    } else {
      d.largest_dropped_sv = std::max(d.largest_dropped_sv, sv(i));
    }
  }
  return d;
}

RankDecision numerical_rank(const Eigen::MatrixXd& M, double tol_rel) {
  require_finite(M, "numerical_rank");
  const int max_rank = static_cast<int>(std::min(M.rows(), M.cols()));
  if (max_rank == 0) return rank_from_singular_values(Eigen::VectorXd(), 0, tol_rel);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  return rank_from_singular_values(svd.singularValues(), max_rank, tol_rel);
}

RankDecision numerical_rank(const Eigen::MatrixXcd& M, double tol_rel) {
  require_finite(M, "numerical_rank");
  const int max_rank = static_cast<int>(std::min(M.rows(), M.cols()));
  if (max_rank == 0) return rank_from_singular_values(Eigen::VectorXd(), 0, tol_rel);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return rank_from_singular_values(svd.singularValues(), max_rank, tol_rel);
}

// ---------------------------------------------------------------------------

LeastSquaresFactor::LeastSquaresFactor(const Eigen::MatrixXd& M, double tol_rel) {
  require_finite(M, "least_squares");
  if (M.rows() < M.cols()) throw InvalidInput("least_squares needs rows >= cols");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  q_ = qr.householderQ() * Eigen::MatrixXd::Identity(M.rows(), M.cols());
  r_ = qr.matrixQR().topRows(M.cols()).triangularView<Eigen::Upper>();
  // Column rank from the singular values of R (same as those of M).
  if (M.cols() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r_);
    degenerate_ = !rank_from_singular_values(svd.singularValues(), static_cast<int>(M.cols()), tol_rel).full();
  }
}

double LeastSquaresFactor::residual_norm(const Eigen::VectorXd& b) const {
  const Eigen::VectorXd coeffs = q_.transpose() * b;
  return (b - q_ * coeffs).norm();
}

Eigen::VectorXd LeastSquaresFactor::solve(const Eigen::VectorXd& b) const {
  const Eigen::VectorXd coeffs = q_.transpose() * b;
  return r_.triangularView<Eigen::Upper>().solve(coeffs);
}

LeastSquaresResult least_squares(const Eigen::MatrixXd& M, const Eigen::VectorXd& b) {
  if (b.size() != M.rows()) throw InvalidInput("least_squares: rhs length mismatch");
  require_finite(b, "least_squares");
  LeastSquaresResult out;
  LeastSquaresFactor factor(M);
  out.degenerate = factor.degenerate();
  if (out.degenerate) {
    // Minimum-norm solution so the caller still gets something meaningful.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
    out.x = cod.solve(b);
  } else {
    out.x = factor.solve(b);
  }
  out.residual_norm = (M * out.x - b).norm();
  return out;
}

// ---------------------------------------------------------------------------

HermitianEigen hermitian_top_eig(const Eigen::MatrixXcd& X) {
  require_finite(X, "hermitian_top_eig");
  if (X.rows() != X.cols()) throw InvalidInput("hermitian_top_eig: matrix is not square");
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  if ((X - X.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidInput("hermitian_top_eig: matrix is not Hermitian");
  }
  const Eigen::MatrixXcd sym = (X + X.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  const Eigen::Index k = X.rows();
  HermitianEigen out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index j = 0; j < k; ++j) out.eigenvectors.col(j).normalize();
  return out;
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& M, double tol_rel) {
  require_finite(M, "null_space");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const auto decision =
      rank_from_singular_values(svd.singularValues(), static_cast<int>(std::min(M.rows(), M.cols())), tol_rel);
  const Eigen::Index nullity = M.cols() - decision.rank;
  return svd.matrixV().rightCols(nullity);
}

Eigen::VectorXd null_space_vector(const Eigen::MatrixXd& M, double tol_rel) {
  const Eigen::MatrixXd basis = null_space_basis(M, tol_rel);
  if (basis.cols() == 0) throw InvalidInput("null_space_vector: matrix has full column rank");
  Eigen::VectorXd v = basis.col(basis.cols() - 1);
  // Sign convention: first entry of largest magnitude is positive.
  Eigen::Index pivot = 0;
  v.cwiseAbs().maxCoeff(&pivot);
  if (v(pivot) < 0.0) v = -v;
  return v.normalized();
}

}  // namespace sparse_pr
