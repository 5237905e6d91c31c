#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "sparse_pr/model.hpp"

namespace sparse_pr {

/// Malformed text input. The message starts with "line N:".
class ParseError : public InvalidInput {
 public:
  ParseError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Matrix file: a header line `field m n`, then m rows of n entries. Complex
// entries are written `re,im`. Blank lines and lines starting with '#' are
// ignored everywhere.
MeasurementEnsemble read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const MeasurementEnsemble& A);

// Sparse vector file: a line holding n, then `index value` lines with
// one-based indices. When `field` is empty it is inferred from the values.
SparseVector read_sparse_vector(std::istream& in, std::optional<Field> field = std::nullopt);
void write_sparse_vector(std::ostream& out, const SparseVector& x);

// Measurement file: one magnitude per line.
MeasurementVector read_measurements(std::istream& in);
void write_measurements(std::ostream& out, const MeasurementVector& y);

/// Comma- or whitespace-separated magnitudes given on the command line.
MeasurementVector parse_measurements_inline(std::string_view text);

/// Shortest text that reads back to the same double.
std::string format_double(double value);

MeasurementEnsemble load_matrix(const std::string& path);
SparseVector load_sparse_vector(const std::string& path, std::optional<Field> field = std::nullopt);
MeasurementVector load_measurements(const std::string& path);

}  // namespace sparse_pr
