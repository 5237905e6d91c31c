#include "sparse_pr/solver_complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "solution_detail.hpp"
#include "sparse_pr/combinatorics.hpp"
#include "sparse_pr/numerics.hpp"
#include "sparse_pr/parallel.hpp"
#include "sparse_pr/rng.hpp"

namespace sparse_pr {

namespace {

Eigen::MatrixXcd columns(const Eigen::MatrixXcd& A, const IndexSet& set) {
  Eigen::MatrixXcd out(A.rows(), static_cast<Eigen::Index>(set.size()));
  for (std::size_t t = 0; t < set.size(); ++t) out.col(static_cast<Eigen::Index>(t)) = A.col(set[t]);
  return out;
}

Eigen::VectorXd squared_magnitude_residual(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& x,
                                           std::span<const double> y) {
  const Eigen::VectorXcd r = A * x;
  Eigen::VectorXd out(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) out(i) = std::norm(r(i)) - y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
  return out;
}

double max_magnitude_error(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& x, std::span<const double> y) {
  const Eigen::VectorXcd r = A * x;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    worst = std::max(worst, std::abs(std::abs(r(i)) - y[static_cast<std::size_t>(i)]));
  }
  return worst;
}

Eigen::VectorXcd random_start(Rng& rng, Eigen::Index k) {
  Eigen::VectorXcd x(k);
  for (Eigen::Index j = 0; j < k; ++j) x(j) = rng.complex_normal();
  return x;
}

/// Rescales x so that ||A x||_2 matches ||y||_2, a cheap start for refinement.
Eigen::VectorXcd match_energy(const Eigen::MatrixXcd& A, Eigen::VectorXcd x, std::span<const double> y) {
  double target = 0.0;
  for (double v : y) target += v * v;
  const double current = (A * x).squaredNorm();
  if (current > 0.0 && target > 0.0) x *= std::sqrt(target / current);
  return x;
}

bool near_threshold(double value, double threshold) {
  return value > threshold / 10.0 && value < threshold * 10.0;
}

}  // namespace

std::string_view to_string(ProbeVerdict verdict) noexcept {
  return verdict == ProbeVerdict::CollisionFound ? "collision_found" : "no_collision_found";
}

// ---------------------------------------------------------------------------

RefineResult refine_gauss_newton(const Eigen::MatrixXcd& A_I, std::span<const double> y, Eigen::VectorXcd x_init,
                                 int iters, double tol) {
  if (static_cast<Eigen::Index>(y.size()) != A_I.rows()) throw InvalidInput("refine_gauss_newton: y length mismatch");
  if (x_init.size() != A_I.cols()) throw InvalidInput("refine_gauss_newton: x_init length mismatch");
  if (x_init.cwiseAbs().maxCoeff() == 0.0) throw InvalidInput("refine_gauss_newton: x_init must be nonzero");

  const Eigen::Index m = A_I.rows();
  const Eigen::Index k = A_I.cols();
  RefineResult out;
  out.x = std::move(x_init);
  Eigen::VectorXd r = squared_magnitude_residual(A_I, out.x, y);
  out.objective = r.squaredNorm();
  out.residual = max_magnitude_error(A_I, out.x, y);
  out.objective_trace.push_back(out.objective);
  if (out.residual <= tol) {
    out.status = RefineStatus::Converged;
    return out;
  }

  Eigen::MatrixXd J(m, 2 * k);
  for (int iter = 0; iter < iters; ++iter) {
    const Eigen::VectorXcd u = A_I * out.x;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        const Complex cu = std::conj(u(i)) * A_I(i, j);
        J(i, j) = 2.0 * cu.real();
        J(i, k + j) = -2.0 * cu.imag();
      }
    }
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
    const Eigen::VectorXd delta = -cod.solve(r);
    if (!delta.allFinite()) {
      out.status = RefineStatus::Diverged;
      return out;
    }
    Eigen::VectorXcd step(k);
    for (Eigen::Index j = 0; j < k; ++j) step(j) = Complex(delta(j), delta(k + j));

    bool accepted = false;
    for (double alpha = 1.0; alpha > 1e-10; alpha /= 2.0) {
      const Eigen::VectorXcd trial = out.x + alpha * step;
      const Eigen::VectorXd trial_r = squared_magnitude_residual(A_I, trial, y);
      const double trial_objective = trial_r.squaredNorm();
      if (!std::isfinite(trial_objective)) continue;
      if (trial_objective < out.objective) {
        const double previous = out.objective;
        out.x = trial;
        r = trial_r;
        out.objective = trial_objective;
        out.objective_trace.push_back(trial_objective);
        ++out.steps;
        accepted = true;
        if (previous - trial_objective <= 1e-15 * previous) {
          out.residual = max_magnitude_error(A_I, out.x, y);
          out.status = out.residual <= tol ? RefineStatus::Converged : RefineStatus::Stalled;
          return out;
        }
        break;
      }
    }
    out.residual = max_magnitude_error(A_I, out.x, y);
    if (out.residual <= tol) {
      out.status = RefineStatus::Converged;
      return out;
    }
    if (!accepted) {
      out.status = RefineStatus::Stalled;
      return out;
    }
  }
  out.status = RefineStatus::MaxIterations;
  return out;
}

// ---------------------------------------------------------------------------

LiftedSolveReport lifted_solve(const MeasurementEnsemble& A, const MeasurementVector& y, const IndexSet& support,
                               const ComplexSolverOptions& options) {
  const int m = A.m();
  const int k = static_cast<int>(support.size());
  if (y.m() != m) throw InvalidInput("lifted_solve: y length mismatch");
  if (k < 1) throw InvalidInput("lifted_solve: empty support");
  const int unknowns = k * k;
  if (m < unknowns) throw Unsupported("lifted_solve: needs m >= k^2 rows");

  LiftedSolveReport report;
  report.support = support;
  const Eigen::MatrixXcd AI = columns(A.entries(), support);

  // theta = [X_11..X_kk, Re X_jl, Im X_jl for j < l]
  Eigen::MatrixXd L(m, unknowns);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    int col = 0;
    for (int j = 0; j < k; ++j) L(i, col++) = std::norm(AI(i, j));
    for (int j = 0; j < k; ++j) {
      for (int l = j + 1; l < k; ++l) {
        const Complex c = AI(i, j) * std::conj(AI(i, l));
        L(i, col++) = 2.0 * c.real();
        L(i, col++) = -2.0 * c.imag();
      }
    }
    rhs(i) = y[i] * y[i];
  }

  const LeastSquaresFactor factor(L);
  report.determined = !factor.degenerate();
  if (!report.determined) return report;
  const Eigen::VectorXd theta = factor.solve(rhs);
  report.lifted_residual = (L * theta - rhs).norm();

  report.X = Eigen::MatrixXcd::Zero(k, k);
  int col = 0;
  for (int j = 0; j < k; ++j) report.X(j, j) = theta(col++);
  for (int j = 0; j < k; ++j) {
    for (int l = j + 1; l < k; ++l) {
      report.X(j, l) = Complex(theta(col), theta(col + 1));
      report.X(l, j) = std::conj(report.X(j, l));
      col += 2;
    }
  }
  const HermitianEigen eig = hermitian_top_eig(report.X);
  report.eigenvalues = eig.eigenvalues;

  const double ymax = y.max_abs();
  const double scale = ymax > 0.0 ? ymax : 1.0;
  const double threshold = options.tol * scale;
  const double lifted_limit = options.tol * scale * scale * std::sqrt(static_cast<double>(m));
  const double top = eig.eigenvalues(0);
  if (!(top > 0.0)) return report;
  report.rank1_defect = k > 1 ? std::abs(eig.eigenvalues(1)) / top : 0.0;
  const bool psd = eig.eigenvalues(k - 1) >= -options.psd_tol * top;
  if (report.lifted_residual > lifted_limit || !psd || report.rank1_defect > options.rank_one_tol) return report;

  Eigen::VectorXcd xI = std::sqrt(top) * eig.top();
  std::span<const double> yv(y.magnitudes());
  if (max_magnitude_error(AI, xI, yv) > threshold) {
    xI = refine_gauss_newton(AI, yv, xI, 50, threshold / 10.0).x;
  }
  if (max_magnitude_error(AI, xI, yv) > threshold || xI.cwiseAbs().minCoeff() <= threshold) return report;

  std::vector<Complex> values(xI.data(), xI.data() + xI.size());
  report.x_hat = SparseVector(Field::Complex, A.n(), support, std::move(values)).canonical();
  report.accepted = true;
  return report;
}

SolutionSet solve_l0_complex(const MeasurementEnsemble& A, const MeasurementVector& y, int k_max,
                             const ComplexSolverOptions& options) {
  if (A.field() != Field::Complex) throw InvalidInput("solve_l0_complex: ensemble is real");
  const int m = A.m();
  const int n = A.n();
  if (y.m() != m) {
    throw InvalidInput("solve_l0_complex: y has length " + std::to_string(y.m()) + " but A has m = " +
                       std::to_string(m));
  }
  if (k_max < 0 || k_max > std::min(m, n)) throw InvalidInput("solve_l0_complex: k_max must lie in [0, min(m, n)]");
  if (!(options.tol > 0.0)) throw InvalidInput("solve_l0_complex: tol must be positive");
  if (k_max * k_max > m && !options.allow_heuristic) {
    throw Unsupported("solve_l0_complex: exact lifting needs m >= k_max^2 (" + std::to_string(k_max * k_max) +
                      " > " + std::to_string(m) + "); enable heuristic mode to continue");
  }

  SolutionSet out;
  const double ymax = y.max_abs();
  if (ymax == 0.0) {
    out.k_star = 0;
    out.classes.push_back({SparseVector::zero(Field::Complex, n), 0.0, SolveMethod::Lifted, 0.0});
    return out;
  }
  const double threshold = options.tol * ymax;
  const double lifted_limit = options.tol * ymax * ymax * std::sqrt(static_cast<double>(m));
  std::span<const double> yv(y.magnitudes());

  for (int k = 1; k <= k_max; ++k) {
    const auto supports = combinations(n, k);
    const bool exact = m >= k * k;
    out.heuristic = out.heuristic || !exact;
    std::vector<std::vector<SolutionClass>> accepted(supports.size());
    std::vector<std::int64_t> borderline(supports.size(), 0);

    parallel_for(
        supports.size(),
        [&](std::size_t idx) {
          const IndexSet& support = supports[idx];
          if (exact) {
            const LiftedSolveReport report = lifted_solve(A, y, support, options);
            if (report.determined && near_threshold(report.lifted_residual, lifted_limit)) ++borderline[idx];
            if (report.accepted) {
              const double fit = detail::magnitude_residual(A.entries(), *report.x_hat, y);
              accepted[idx].push_back({*report.x_hat, fit, SolveMethod::Lifted, report.rank1_defect});
            }
            return;
          }
          const Eigen::MatrixXcd AI = columns(A.entries(), support);
          for (int restart = 0; restart < options.heuristic_restarts; ++restart) {
            Rng rng(derive_seed(options.seed, idx, static_cast<std::uint64_t>(restart)));
            const Eigen::VectorXcd start = match_energy(AI, random_start(rng, k), yv);
            const RefineResult refined = refine_gauss_newton(AI, yv, start, 200, threshold / 10.0);
            if (refined.residual > threshold || refined.x.cwiseAbs().minCoeff() <= threshold) continue;
            std::vector<Complex> values(refined.x.data(), refined.x.data() + refined.x.size());
            SparseVector x(Field::Complex, n, support, std::move(values));
            accepted[idx].push_back({std::move(x), refined.residual, SolveMethod::Refined, 0.0});
          }
        },
        options.workers);

    for (std::size_t idx = 0; idx < supports.size(); ++idx) {
      out.stats.borderline += borderline[idx];
      for (auto& candidate : accepted[idx]) detail::merge_class(out.classes, std::move(candidate), options.tol);
    }
    out.stats.supports_tried += static_cast<std::int64_t>(supports.size());
    out.stats.patterns_tried += static_cast<std::int64_t>(supports.size()) * (exact ? 1 : options.heuristic_restarts);
    if (!out.classes.empty()) {
      out.k_star = k;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

CollisionProbe collision_probe_complex(const MeasurementEnsemble& A, int k, int restarts, std::uint64_t seed,
                                       int workers) {
  if (restarts < 1) throw InvalidInput("collision_probe_complex: restarts must be >= 1");
  if (k < 1 || k > A.n()) throw InvalidInput("collision_probe_complex: k must lie in [1, n]");
  const int n = A.n();
  const auto supports = combinations(n, k);
  const std::size_t pair_count = supports.size() * supports.size();

  struct PairBest {
    double objective = std::numeric_limits<double>::infinity();
    Eigen::VectorXcd u;
    Eigen::VectorXcd v;
  };
  std::vector<PairBest> best(pair_count);

  parallel_for(
      pair_count,
      [&](std::size_t p) {
        const IndexSet& I = supports[p / supports.size()];
        const IndexSet& J = supports[p % supports.size()];
        const Eigen::MatrixXcd AI = columns(A.entries(), I);
        const Eigen::MatrixXcd AJ = columns(A.entries(), J);
        for (int restart = 0; restart < restarts; ++restart) {
          Rng rng(derive_seed(seed, p, static_cast<std::uint64_t>(restart)));
          const Eigen::VectorXcd u = random_start(rng, k).normalized();
          const Eigen::VectorXd target = (AI * u).cwiseAbs();
          std::span<const double> yv(target.data(), static_cast<std::size_t>(target.size()));
          const Eigen::VectorXcd start = match_energy(AJ, random_start(rng, k), yv);
          const RefineResult fit = refine_gauss_newton(AJ, yv, start, 100, 1e-14);

          Eigen::VectorXcd u_full = Eigen::VectorXcd::Zero(n);
          Eigen::VectorXcd v_full = Eigen::VectorXcd::Zero(n);
          for (int t = 0; t < k; ++t) {
            u_full(I[static_cast<std::size_t>(t)]) = u(t);
            v_full(J[static_cast<std::size_t>(t)]) = fit.x(t);
          }
          if (phase_equivalent(u_full, v_full, Field::Complex, 1e-6)) continue;
          const double objective = ((AJ * fit.x).cwiseAbs() - target).norm();
          if (objective < best[p].objective) best[p] = {objective, u_full, v_full};
        }
      },
      workers);

  CollisionProbe probe;
  probe.restarts = restarts;
  probe.pairs_tried = static_cast<std::int64_t>(pair_count);
  probe.objective = std::numeric_limits<double>::infinity();
  for (const auto& entry : best) {
    if (entry.objective < probe.objective) {
      probe.objective = entry.objective;
      probe.u = SparseVector::from_dense(Field::Complex, entry.u);
      probe.v = SparseVector::from_dense(Field::Complex, entry.v);
    }
  }
  probe.verdict = probe.objective <= kCollisionThreshold ? ProbeVerdict::CollisionFound : ProbeVerdict::NoCollisionFound;
  return probe;
}

bool column_magnitude_collision_1sparse(const MeasurementEnsemble& A) {
  const Eigen::MatrixXd mags = A.entries().cwiseAbs();
  for (int i = 0; i < A.n(); ++i) {
    for (int j = i + 1; j < A.n(); ++j) {
      const Eigen::VectorXd p = mags.col(i);
      const Eigen::VectorXd q = mags.col(j);
      // Proportional iff every 2x2 minor [p_r q_s - p_s q_r] vanishes.
      const double scale = p.maxCoeff() * q.maxCoeff();
      double worst = 0.0;
      for (int r = 0; r < A.m(); ++r) {
        for (int s = r + 1; s < A.m(); ++s) worst = std::max(worst, std::abs(p(r) * q(s) - p(s) * q(r)));
      }
      if (worst <= 1e-10 * scale) return true;
    }
  }
  return false;
}

}  // namespace sparse_pr
