#include "sparse_pr/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparse_pr/rng.hpp"

namespace sparse_pr {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_same_field(Field a, Field b, const char* what) {
  if (a != b) throw InvalidInput(std::string(what) + ": field mismatch");
}

}  // namespace

std::string_view to_string(Field field) noexcept {
  return field == Field::Real ? "real" : "complex";
}

Field parse_field(std::string_view text) {
  if (text == "real" || text == "R") return Field::Real;
  if (text == "complex" || text == "C") return Field::Complex;
  throw InvalidInput("unknown field '" + std::string(text) + "' (expected real or complex)");
}

// ---------------------------------------------------------------------------

MeasurementEnsemble::MeasurementEnsemble(Field field, Eigen::MatrixXcd entries, Provenance provenance)
    : field_(field), entries_(std::move(entries)), provenance_(std::move(provenance)) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw InvalidInput("measurement ensemble needs m >= 1 and n >= 1");
  }
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
      const Complex z = entries_(i, j);
      if (!finite(z)) throw InvalidInput("measurement ensemble has a non-finite entry");
      if (field_ == Field::Real && z.imag() != 0.0) {
        throw InvalidInput("real measurement ensemble has a nonzero imaginary part");
      }
    }
  }
  if (field_ == Field::Real) real_ = entries_.real();
}

MeasurementEnsemble MeasurementEnsemble::from_real(const Eigen::MatrixXd& entries, Provenance provenance) {
  return MeasurementEnsemble(Field::Real, entries.cast<Complex>(), std::move(provenance));
}

const Eigen::MatrixXd& MeasurementEnsemble::real_entries() const {
  if (field_ != Field::Real) throw InvalidInput("real entries requested from a complex ensemble");
  return real_;
}

bool MeasurementEnsemble::operator==(const MeasurementEnsemble& other) const {
  return field_ == other.field_ && entries_.rows() == other.entries_.rows() &&
         entries_.cols() == other.entries_.cols() && entries_ == other.entries_;
}

// ---------------------------------------------------------------------------

SparseVector::SparseVector(Field field, int n, IndexSet support, std::vector<Complex> values)
    : field_(field), n_(n), support_(std::move(support)), values_(std::move(values)) {
  if (n_ < 1) throw InvalidInput("sparse vector needs n >= 1");
  if (support_.size() != values_.size()) {
    throw InvalidInput("sparse vector support and values differ in length");
  }
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i] < 0 || support_[i] >= n_) throw InvalidInput("sparse vector index out of range");
    if (i > 0 && support_[i] <= support_[i - 1]) {
      throw InvalidInput("sparse vector indices must be strictly increasing");
    }
    if (!finite(values_[i])) throw InvalidInput("sparse vector has a non-finite value");
    if (std::abs(values_[i]) == 0.0) throw InvalidInput("sparse vector stores an explicit zero");
    if (field_ == Field::Real && values_[i].imag() != 0.0) {
      throw InvalidInput("real sparse vector has a nonzero imaginary part");
    }
  }
}

SparseVector SparseVector::zero(Field field, int n) { return SparseVector(field, n, {}, {}); }

SparseVector SparseVector::from_dense(Field field, const Eigen::VectorXcd& dense, double drop_tol) {
  IndexSet support;
  std::vector<Complex> values;
  for (Eigen::Index i = 0; i < dense.size(); ++i) {
    Complex v = dense(i);
    if (field == Field::Real) v = Complex(v.real(), 0.0);
    if (std::abs(v) > drop_tol && std::abs(v) > 0.0) {
      support.push_back(static_cast<int>(i));
      values.push_back(v);
    }
  }
  return SparseVector(field, static_cast<int>(dense.size()), std::move(support), std::move(values));
}

SparseVector SparseVector::from_dense(const Eigen::VectorXd& dense, double drop_tol) {
  return from_dense(Field::Real, dense.cast<Complex>(), drop_tol);
}

Eigen::VectorXcd SparseVector::dense() const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n_);
  for (std::size_t i = 0; i < support_.size(); ++i) out(support_[i]) = values_[i];
  return out;
}

Eigen::VectorXd SparseVector::dense_real() const { return dense().real(); }

SparseVector SparseVector::scaled(Complex c) const {
  if (field_ == Field::Real && c.imag() != 0.0) {
    throw InvalidInput("complex scale applied to a real sparse vector");
  }
  if (c == Complex(0.0)) return zero(field_, n_);
  std::vector<Complex> vals(values_);
  for (auto& v : vals) v *= c;
  return SparseVector(field_, n_, support_, std::move(vals));
}

SparseVector SparseVector::canonical() const {
  if (values_.empty()) return *this;
  const Complex first = values_.front();
  const Complex phase = std::conj(first) / std::abs(first);
  std::vector<Complex> vals(values_);
  for (auto& v : vals) v *= phase;
  vals.front() = Complex(std::abs(first), 0.0);
  if (field_ == Field::Real) {
    for (auto& v : vals) v = Complex(v.real(), 0.0);
  }
  return SparseVector(field_, n_, support_, std::move(vals));
}

double SparseVector::max_abs() const noexcept {
  double out = 0.0;
  for (const auto& v : values_) out = std::max(out, std::abs(v));
  return out;
}

// ---------------------------------------------------------------------------

PhasePattern::PhasePattern(Field field, std::vector<Complex> phases)
    : field_(field), phases_(std::move(phases)) {
  if (phases_.empty()) throw InvalidInput("phase pattern must have length >= 1");
  for (const auto& p : phases_) {
    if (!finite(p) || std::abs(std::abs(p) - 1.0) > 1e-12) {
      throw InvalidInput("phase pattern entries must have unit modulus");
    }
    if (field_ == Field::Real && (p.imag() != 0.0 || std::abs(p.real()) != 1.0)) {
      throw InvalidInput("real phase pattern entries must be +1 or -1");
    }
  }
}

PhasePattern PhasePattern::from_sign_mask(int m, std::uint64_t mask) {
  if (m < 1 || m > 63) throw InvalidInput("sign mask length must be in [1, 63]");
  if ((mask >> m) != 0) throw InvalidInput("sign mask has bits beyond its length");
  std::vector<Complex> phases(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) phases[static_cast<std::size_t>(i)] = ((mask >> i) & 1U) ? -1.0 : 1.0;
  return PhasePattern(Field::Real, std::move(phases));
}

bool PhasePattern::admissible() const noexcept {
  return std::any_of(phases_.begin(), phases_.end(),
                     [&](const Complex& p) { return p != phases_.front(); });
}

std::uint64_t PhasePattern::sign_mask() const {
  if (field_ != Field::Real) throw InvalidInput("sign mask requested from a complex phase pattern");
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < phases_.size(); ++i) {
    if (phases_[i].real() < 0.0) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

// ---------------------------------------------------------------------------

MeasurementVector::MeasurementVector(std::vector<double> magnitudes) : magnitudes_(std::move(magnitudes)) {
  for (double v : magnitudes_) {
    if (!std::isfinite(v)) throw InvalidInput("measurement vector has a non-finite entry");
    if (v < 0.0) throw InvalidInput("measurement vector has a negative entry");
  }
}

double MeasurementVector::max_abs() const noexcept {
  double out = 0.0;
  for (double v : magnitudes_) out = std::max(out, v);
  return out;
}

MeasurementVector MeasurementVector::scaled(double c) const {
  std::vector<double> out(magnitudes_);
  for (auto& v : out) v *= std::abs(c);
  return MeasurementVector(std::move(out));
}

// ---------------------------------------------------------------------------

MeasurementVector measure(const MeasurementEnsemble& A, const SparseVector& x) {
  require_same_field(A.field(), x.field(), "measure");
  if (A.n() != x.n()) throw InvalidInput("measure: matrix has n = " + std::to_string(A.n()) +
                                         " but vector has n = " + std::to_string(x.n()));
  Eigen::VectorXcd r = Eigen::VectorXcd::Zero(A.m());
  for (std::size_t t = 0; t < x.support().size(); ++t) {
    r += A.entries().col(x.support()[t]) * x.values()[t];
  }
  std::vector<double> y(static_cast<std::size_t>(A.m()));
  for (int i = 0; i < A.m(); ++i) y[static_cast<std::size_t>(i)] = std::abs(r(i));
  return MeasurementVector(std::move(y));
}

MeasurementEnsemble generate_ensemble(Field field, int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw InvalidInput("generate_ensemble needs m >= 1 and n >= 1");
  Rng rng(seed);
  Eigen::MatrixXcd entries(m, n);
  // Row-major fill order so that a prefix of rows does not depend on n.
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      entries(i, j) = field == Field::Real ? Complex(rng.normal(), 0.0) : rng.complex_normal();
    }
  }
  Provenance provenance{seed, field == Field::Real ? "gaussian" : "complex_gaussian"};
  return MeasurementEnsemble(field, std::move(entries), std::move(provenance));
}

bool phase_equivalent(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, Field field, double tol) {
  if (u.size() != v.size()) throw InvalidInput("phase_equivalent: dimension mismatch");
  const auto dist = [&](Complex c) { return (u - c * v).cwiseAbs().maxCoeff(); };
  if (u.size() == 0) return true;
  if (field == Field::Real) return std::min(dist(1.0), dist(-1.0)) <= tol;

  const Complex inner = v.dot(u);  // v^* u
  if (std::abs(inner) == 0.0) {
    return u.cwiseAbs().maxCoeff() <= tol && v.cwiseAbs().maxCoeff() <= tol;
  }
  return dist(inner / std::abs(inner)) <= tol;
}

bool phase_equivalent(const SparseVector& u, const SparseVector& v, double tol) {
  require_same_field(u.field(), v.field(), "phase_equivalent");
  if (u.n() != v.n()) throw InvalidInput("phase_equivalent: dimension mismatch");
  return phase_equivalent(u.dense(), v.dense(), u.field(), tol);
}

}  // namespace sparse_pr
