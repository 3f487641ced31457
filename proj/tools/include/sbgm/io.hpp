#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "sbgm/datagen.hpp"
#include "sbgm/errors.hpp"
#include "sbgm/symmat.hpp"

namespace sbgm::io {

/// Malformed input. line/column are 1-based; column 0 means "whole line".
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, std::size_t column, const std::string& message);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string source_;
  std::size_t line_;
  std::size_t column_;
};

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Reads a square MatrixMarket matrix (coordinate or array; real or integer;
/// general or symmetric). General input must be symmetric.
SymMatrix read_matrix_market(std::istream& in, std::string_view source = "<stream>");
SymMatrix read_matrix_market(const std::filesystem::path& path);

/// `coordinate real symmetric`, lower triangle, 1-based, column-major order.
/// Zeros and entries with |v| < drop_tol are omitted.
void write_matrix_market_coordinate(std::ostream& out, const SymMatrix& m, double drop_tol = 1e-10);
void write_matrix_market_coordinate(const std::filesystem::path& path, const SymMatrix& m, double drop_tol = 1e-10);

/// `array real symmetric`: lower triangle in column-major order.
void write_matrix_market_array(std::ostream& out, const SymMatrix& m);
void write_matrix_market_array(const std::filesystem::path& path, const SymMatrix& m);

/// Headerless CSV, one observation per line, p comma-separated fields.
/// Blank lines are ignored.
SampleMatrix read_samples_csv(std::istream& in, std::string_view source = "<stream>");
SampleMatrix read_samples_csv(const std::filesystem::path& path);
void write_samples_csv(std::ostream& out, const SampleMatrix& x);
void write_samples_csv(const std::filesystem::path& path, const SampleMatrix& x);

}  // namespace sbgm::io
