#include "sbgm/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <utility>
#include <vector>

namespace sbgm::io {
namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> split_whitespace(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_index(std::string_view text, std::size_t& out) {
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

class LineReader {
 public:
  LineReader(std::istream& in, std::string_view source) : in_(in), source_(source) {}

  // Next line that is neither blank nor a '%' comment.
  bool next_content(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const std::string_view t = trim(line);
      if (t.empty() || t.front() == '%') continue;
      return true;
    }
    return false;
  }

  bool next_raw(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  [[noreturn]] void fail(std::size_t column, const std::string& message) const {
    throw ParseError(source_, line_no_, column, message);
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
};

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot open file");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

ParseError::ParseError(std::string source, std::size_t line, std::size_t column, const std::string& message)
    : Error(source + ":" + std::to_string(line) + (column > 0 ? ":" + std::to_string(column) : std::string()) + ": " +
            message),
      source_(std::move(source)),
      line_(line),
      column_(column) {}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

SymMatrix read_matrix_market(std::istream& in, std::string_view source) {
  LineReader reader(in, source);
  std::string line;
  if (!reader.next_raw(line)) reader.fail(0, "empty input, expected a %%MatrixMarket header");

  const auto header = split_whitespace(line);
  if (header.size() != 5 || lower(header[0].text) != "%%matrixmarket") {
    reader.fail(1, "expected header '%%MatrixMarket matrix <format> <field> <symmetry>'");
  }
  if (lower(header[1].text) != "matrix") reader.fail(header[1].column, "only 'matrix' objects are supported");
  const std::string format = lower(header[2].text);
  const std::string field = lower(header[3].text);
  const std::string symmetry = lower(header[4].text);
  if (format != "coordinate" && format != "array") reader.fail(header[2].column, "unknown format '" + format + "'");
  if (field != "real" && field != "integer" && field != "double") {
    reader.fail(header[3].column, "unsupported field '" + field + "' (need real or integer)");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    reader.fail(header[4].column, "unsupported symmetry '" + symmetry + "' (need general or symmetric)");
  }
  const bool symmetric = symmetry == "symmetric";

  if (!reader.next_content(line)) reader.fail(0, "missing size line");
  const auto size = split_whitespace(line);
  const std::size_t expected_fields = format == "coordinate" ? 3 : 2;
  if (size.size() != expected_fields) reader.fail(0, "size line needs " + std::to_string(expected_fields) + " fields");
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t count = 0;
  if (!parse_index(size[0].text, rows)) reader.fail(size[0].column, "bad row count");
  if (!parse_index(size[1].text, cols)) reader.fail(size[1].column, "bad column count");
  if (rows != cols) reader.fail(size[1].column, "matrix must be square");
  if (rows == 0) reader.fail(size[0].column, "matrix must be non-empty");
  if (format == "coordinate" && !parse_index(size[2].text, count)) reader.fail(size[2].column, "bad entry count");

  const auto p = static_cast<Eigen::Index>(rows);
  Matrix m = Matrix::Zero(p, p);

  if (format == "coordinate") {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t e = 0; e < count; ++e) {
      if (!reader.next_content(line)) {
        reader.fail(0, "expected " + std::to_string(count) + " entries, found " + std::to_string(e));
      }
      const auto tok = split_whitespace(line);
      if (tok.size() != 3) reader.fail(0, "coordinate entry needs 'row col value'");
      std::size_t i = 0;
      std::size_t j = 0;
      double v = 0.0;
      if (!parse_index(tok[0].text, i) || i < 1 || i > rows) reader.fail(tok[0].column, "row index out of range");
      if (!parse_index(tok[1].text, j) || j < 1 || j > cols) reader.fail(tok[1].column, "column index out of range");
      if (!parse_double(tok[2].text, v)) reader.fail(tok[2].column, "bad numeric value '" + std::string(tok[2].text) + "'");
      --i;
      --j;
      const auto key = symmetric ? std::make_pair(std::max(i, j), std::min(i, j)) : std::make_pair(i, j);
      if (!seen.insert(key).second) reader.fail(tok[0].column, "duplicate entry");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      if (symmetric) m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  } else {
    for (Eigen::Index j = 0; j < p; ++j) {
      for (Eigen::Index i = symmetric ? j : 0; i < p; ++i) {
        if (!reader.next_content(line)) reader.fail(0, "array data ended early");
        const auto tok = split_whitespace(line);
        if (tok.size() != 1) reader.fail(0, "array entry needs exactly one value");
        double v = 0.0;
        if (!parse_double(tok[0].text, v)) reader.fail(tok[0].column, "bad numeric value '" + std::string(tok[0].text) + "'");
        m(i, j) = v;
        if (symmetric) m(j, i) = v;
      }
    }
  }
  if (reader.next_content(line)) reader.fail(0, "unexpected data after the last entry");

  if (!symmetric) {
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1.0);
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ParseError(std::string(source), reader.line_no(), 0, "general matrix is not symmetric");
    }
  }
  return SymMatrix::symmetrized(m);
}

SymMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_matrix_market(in, path.string());
}

void write_matrix_market_coordinate(std::ostream& out, const SymMatrix& m, double drop_tol) {
  const std::size_t p = m.dim();
  auto keep = [&](double v) { return v != 0.0 && std::abs(v) >= drop_tol; };
  std::size_t nnz = 0;
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = j; i < p; ++i) nnz += keep(m(i, j));
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << p << ' ' << p << ' ' << nnz << '\n';
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = j; i < p; ++i) {
      if (keep(m(i, j))) out << i + 1 << ' ' << j + 1 << ' ' << format_double(m(i, j)) << '\n';
    }
  }
}

void write_matrix_market_coordinate(const std::filesystem::path& path, const SymMatrix& m, double drop_tol) {
  std::ofstream out = open_output(path);
  write_matrix_market_coordinate(out, m, drop_tol);
  finish_output(out, path);
}

void write_matrix_market_array(std::ostream& out, const SymMatrix& m) {
  const std::size_t p = m.dim();
  out << "%%MatrixMarket matrix array real symmetric\n";
  out << p << ' ' << p << '\n';
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = j; i < p; ++i) out << format_double(m(i, j)) << '\n';
  }
}

void write_matrix_market_array(const std::filesystem::path& path, const SymMatrix& m) {
  std::ofstream out = open_output(path);
  write_matrix_market_array(out, m);
  finish_output(out, path);
}

SampleMatrix read_samples_csv(std::istream& in, std::string_view source) {
  LineReader reader(in, source);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (reader.next_raw(line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::size_t stop = comma == std::string::npos ? line.size() : comma;
      const std::string_view field = trim(std::string_view(line).substr(start, stop - start));
      double v = 0.0;
      if (!parse_double(field, v)) {
        reader.fail(start + 1, field.empty() ? "empty field" : "bad numeric value '" + std::string(field) + "'");
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      reader.fail(0, "expected " + std::to_string(rows.front().size()) + " fields, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(std::string(source), reader.line_no(), 0, "no observations");

  SampleMatrix x{Matrix(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()))};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      x.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return x;
}

SampleMatrix read_samples_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_samples_csv(in, path.string());
}

void write_samples_csv(std::ostream& out, const SampleMatrix& x) {
  for (Eigen::Index r = 0; r < x.rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.rows.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_double(x.rows(r, c));
    }
    out << '\n';
  }
}

void write_samples_csv(const std::filesystem::path& path, const SampleMatrix& x) {
  std::ofstream out = open_output(path);
  write_samples_csv(out, x);
  finish_output(out, path);
}

}  // namespace sbgm::io
