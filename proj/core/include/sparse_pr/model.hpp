#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace sparse_pr {

using Complex = std::complex<double>;

/// Index sets are sorted, strictly increasing and zero-based internally.
/// Text files and JSON output use one-based indices.
using IndexSet = std::vector<int>;

/// Raised for malformed or inconsistent inputs (dimension or field mismatch,
/// non-finite entries, negative magnitudes, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a request is well-formed but outside what an operation
/// supports (complex distance, lifted solve with too few rows, ...).
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Field { Real, Complex };

std::string_view to_string(Field field) noexcept;
Field parse_field(std::string_view text);

struct Provenance {
  std::optional<std::uint64_t> seed;
  std::string distribution = "explicit";

  bool is_explicit() const noexcept { return !seed.has_value(); }
};

/// m x n measurement matrix over R or C.
///
/// Storage is always complex double; a Real ensemble has identically zero
/// imaginary parts, which the constructor enforces.
class MeasurementEnsemble {
 public:
  MeasurementEnsemble(Field field, Eigen::MatrixXcd entries, Provenance provenance = {});

  static MeasurementEnsemble from_real(const Eigen::MatrixXd& entries, Provenance provenance = {});

  Field field() const noexcept { return field_; }
  int m() const noexcept { return static_cast<int>(entries_.rows()); }
  int n() const noexcept { return static_cast<int>(entries_.cols()); }
  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  /// Real part of the entries. Throws InvalidInput on a complex ensemble.
  const Eigen::MatrixXd& real_entries() const;

  bool operator==(const MeasurementEnsemble& other) const;

 private:
  Field field_;
  Eigen::MatrixXcd entries_;
  Eigen::MatrixXd real_;
  Provenance provenance_;
};

/// k-sparse vector in H^n: support plus the nonzero values on it.
class SparseVector {
 public:
  SparseVector(Field field, int n, IndexSet support, std::vector<Complex> values);

  static SparseVector zero(Field field, int n);

  /// Keeps entries with |v_i| > drop_tol.
  static SparseVector from_dense(Field field, const Eigen::VectorXcd& dense, double drop_tol = 0.0);
  static SparseVector from_dense(const Eigen::VectorXd& dense, double drop_tol = 0.0);

  Field field() const noexcept { return field_; }
  int n() const noexcept { return n_; }
  int sparsity() const noexcept { return static_cast<int>(support_.size()); }
  const IndexSet& support() const noexcept { return support_; }
  const std::vector<Complex>& values() const noexcept { return values_; }

  Eigen::VectorXcd dense() const;
  Eigen::VectorXd dense_real() const;

  SparseVector scaled(Complex c) const;

  /// Phase-class representative: the first support entry is made real and
  /// positive. The zero vector is its own representative.
  SparseVector canonical() const;

  double max_abs() const noexcept;

 private:
  Field field_;
  int n_;
  IndexSet support_;
  std::vector<Complex> values_;
};

/// Diagonal unit-modulus matrix P, stored by its diagonal.
class PhasePattern {
 public:
  PhasePattern(Field field, std::vector<Complex> phases);

  /// Real sign pattern of length m: bit i of mask set means p_ii = -1.
  static PhasePattern from_sign_mask(int m, std::uint64_t mask);

  Field field() const noexcept { return field_; }
  int size() const noexcept { return static_cast<int>(phases_.size()); }
  const std::vector<Complex>& phases() const noexcept { return phases_; }

  /// False for multiples of the identity.
  bool admissible() const noexcept;

  /// Inverse of from_sign_mask; only defined for real patterns.
  std::uint64_t sign_mask() const;

 private:
  Field field_;
  std::vector<Complex> phases_;
};

/// y = |Ax|: nonnegative finite magnitudes.
class MeasurementVector {
 public:
  explicit MeasurementVector(std::vector<double> magnitudes);

  int m() const noexcept { return static_cast<int>(magnitudes_.size()); }
  const std::vector<double>& magnitudes() const noexcept { return magnitudes_; }
  double operator[](int i) const { return magnitudes_[static_cast<std::size_t>(i)]; }
  double max_abs() const noexcept;

  MeasurementVector scaled(double c) const;

  bool operator==(const MeasurementVector&) const = default;

 private:
  std::vector<double> magnitudes_;
};

/// Elementwise |Ax|.
MeasurementVector measure(const MeasurementEnsemble& A, const SparseVector& x);

/// i.i.d. standard normal (real) or standard complex normal (complex) entries.
/// Reproducible bit-for-bit from (field, m, n, seed); see rng.hpp.
MeasurementEnsemble generate_ensemble(Field field, int m, int n, std::uint64_t seed);

/// True iff ||u - c v||_inf <= tol for some unit-modulus c.
bool phase_equivalent(const SparseVector& u, const SparseVector& v, double tol);

/// Dense-vector form used by the solvers; same semantics as above.
bool phase_equivalent(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, Field field, double tol);

}  // namespace sparse_pr
