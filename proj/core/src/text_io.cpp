#include "sparse_pr/text_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace sparse_pr {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

/// Reads the next non-blank, non-comment line.
std::optional<Line> next_line(std::istream& in, int& counter) {
  std::string text;
  while (std::getline(in, text)) {
    ++counter;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos || text[first] == '#') continue;
    Line line{counter, {}};
    std::istringstream words(text);
    std::string word;
    while (words >> word) line.tokens.push_back(word);
    return line;
  }
  return std::nullopt;
}

double parse_real(std::string_view token, int line) {
  double value = 0.0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ParseError(line, "expected a number, got '" + std::string(token) + "'");
  if (!std::isfinite(value)) throw ParseError(line, "non-finite value '" + std::string(token) + "'");
  return value;
}

int parse_int(std::string_view token, int line, const char* what) {
  int value = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, std::string("expected integer ") + what + ", got '" + std::string(token) + "'");
  }
  return value;
}

Complex parse_entry(std::string_view token, int line, bool& has_imag) {
  const auto comma = token.find(',');
  if (comma == std::string_view::npos) {
    has_imag = false;
    return {parse_real(token, line), 0.0};
  }
  has_imag = true;
  return {parse_real(token.substr(0, comma), line), parse_real(token.substr(comma + 1), line)};
}

std::string format_entry(Field field, Complex value) {
  if (field == Field::Real) return format_double(value.real());
  return format_double(value.real()) + "," + format_double(value.imag());
}

std::ifstream open_input(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InvalidInput("cannot open '" + path + "'");
  return file;
}

template <typename Fn>
auto with_path(const std::string& path, Fn&& fn) {
  auto file = open_input(path);
  try {
    return fn(file);
  } catch (const ParseError& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

}  // namespace

ParseError::ParseError(int line, const std::string& message)
    : InvalidInput("line " + std::to_string(line) + ": " + message), line_(line) {}

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buffer, ptr);
}

MeasurementEnsemble read_matrix(std::istream& in) {
  int counter = 0;
  const auto header = next_line(in, counter);
  if (!header) throw ParseError(counter + 1, "missing header 'field m n'");
  if (header->tokens.size() != 3) throw ParseError(header->number, "header must be 'field m n'");
  Field field;
  try {
    field = parse_field(header->tokens[0]);
  } catch (const InvalidInput& e) {
    throw ParseError(header->number, e.what());
  }
  const int m = parse_int(header->tokens[1], header->number, "m");
  const int n = parse_int(header->tokens[2], header->number, "n");
  if (m < 1 || n < 1) throw ParseError(header->number, "m and n must be >= 1");

  Eigen::MatrixXcd entries(m, n);
  for (int i = 0; i < m; ++i) {
    const auto row = next_line(in, counter);
    if (!row) throw ParseError(counter + 1, "expected row " + std::to_string(i + 1) + " of " + std::to_string(m));
    if (static_cast<int>(row->tokens.size()) != n) {
      throw ParseError(row->number, "expected " + std::to_string(n) + " entries, found " +
                                        std::to_string(row->tokens.size()));
    }
    for (int j = 0; j < n; ++j) {
      bool has_imag = false;
      entries(i, j) = parse_entry(row->tokens[static_cast<std::size_t>(j)], row->number, has_imag);
      if (has_imag && field == Field::Real && entries(i, j).imag() != 0.0) {
        throw ParseError(row->number, "complex entry in a real matrix");
      }
    }
  }
  if (const auto extra = next_line(in, counter)) throw ParseError(extra->number, "unexpected content after matrix");
  return MeasurementEnsemble(field, std::move(entries));
}

void write_matrix(std::ostream& out, const MeasurementEnsemble& A) {
  out << to_string(A.field()) << ' ' << A.m() << ' ' << A.n() << '\n';
  for (int i = 0; i < A.m(); ++i) {
    for (int j = 0; j < A.n(); ++j) {
      if (j > 0) out << ' ';
      out << format_entry(A.field(), A.entries()(i, j));
    }
    out << '\n';
  }
}

SparseVector read_sparse_vector(std::istream& in, std::optional<Field> field) {
  int counter = 0;
  const auto header = next_line(in, counter);
  if (!header) throw ParseError(counter + 1, "missing length line");
  if (header->tokens.size() != 1) throw ParseError(header->number, "first line must hold n");
  const int n = parse_int(header->tokens[0], header->number, "n");
  if (n < 1) throw ParseError(header->number, "n must be >= 1");

  IndexSet support;
  std::vector<Complex> values;
  bool any_imag = false;
  while (const auto line = next_line(in, counter)) {
    if (line->tokens.size() != 2) throw ParseError(line->number, "expected 'index value'");
    const int index = parse_int(line->tokens[0], line->number, "index");
    if (index < 1 || index > n) throw ParseError(line->number, "index out of range 1.." + std::to_string(n));
    if (!support.empty() && index - 1 <= support.back()) {
      throw ParseError(line->number, "indices must be strictly increasing");
    }
    bool has_imag = false;
    const Complex value = parse_entry(line->tokens[1], line->number, has_imag);
    if (value == Complex(0.0, 0.0)) throw ParseError(line->number, "listed values must be nonzero");
    any_imag = any_imag || has_imag;
    if (has_imag && field == Field::Real && value.imag() != 0.0) {
      throw ParseError(line->number, "complex value in a real vector");
    }
    support.push_back(index - 1);
    values.push_back(value);
  }
  const Field resolved = field.value_or(any_imag ? Field::Complex : Field::Real);
  return SparseVector(resolved, n, std::move(support), std::move(values));
}

void write_sparse_vector(std::ostream& out, const SparseVector& x) {
  out << x.n() << '\n';
  for (std::size_t t = 0; t < x.support().size(); ++t) {
    out << x.support()[t] + 1 << ' ' << format_entry(x.field(), x.values()[t]) << '\n';
  }
}

MeasurementVector read_measurements(std::istream& in) {
  int counter = 0;
  std::vector<double> magnitudes;
  while (const auto line = next_line(in, counter)) {
    if (line->tokens.size() != 1) throw ParseError(line->number, "expected one magnitude per line");
    const double value = parse_real(line->tokens[0], line->number);
    if (value < 0.0) throw ParseError(line->number, "magnitudes must be nonnegative");
    magnitudes.push_back(value);
  }
  if (magnitudes.empty()) throw ParseError(counter + 1, "no magnitudes found");
  return MeasurementVector(std::move(magnitudes));
}

void write_measurements(std::ostream& out, const MeasurementVector& y) {
  for (double v : y.magnitudes()) out << format_double(v) << '\n';
}

MeasurementVector parse_measurements_inline(std::string_view text) {
  std::string normalized(text);
  for (char& c : normalized) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(normalized);
  std::vector<double> magnitudes;
  std::string token;
  while (in >> token) {
    const double value = parse_real(token, 1);
    if (value < 0.0) throw ParseError(1, "magnitudes must be nonnegative");
    magnitudes.push_back(value);
  }
  if (magnitudes.empty()) throw ParseError(1, "no magnitudes given");
  return MeasurementVector(std::move(magnitudes));
}

MeasurementEnsemble load_matrix(const std::string& path) {
  return with_path(path, [](std::istream& in) { return read_matrix(in); });
}

SparseVector load_sparse_vector(const std::string& path, std::optional<Field> field) {
  return with_path(path, [&](std::istream& in) { return read_sparse_vector(in, field); });
}

MeasurementVector load_measurements(const std::string& path) {
  return with_path(path, [](std::istream& in) { return read_measurements(in); });
}

}  // namespace sparse_pr
