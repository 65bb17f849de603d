#pragma once

#include "numrange/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace numrange::cli {

/// Malformed input. line/column are 1-based; 0 when the error is structural
/// rather than positional.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")" : what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// JSON matrix file: {"dim": d, "entries": [[re, im], ...] (row-major, d²
/// pairs), "label": ..., "source": ...}.
struct MatrixFile {
  MatrixC<double> matrix;
  std::string label;
  std::string source;
};

MatrixFile parse_matrix_json(const std::string& text);
MatrixFile read_matrix_file(const std::filesystem::path& path);

nlohmann::json to_json(const MatrixFile& file);
std::string serialize(const MatrixFile& file);
void write_matrix_file(const std::filesystem::path& path, const MatrixFile& file);

/// 64-bit FNV-1a over the IEEE bit patterns of the entries, row-major, hex.
std::string digest(const MatrixC<double>& m);

/// Nearest unitary in the polar sense: W·V† from the SVD U = W·Σ·V†.
MatrixC<double> polar_unitary(const MatrixC<double>& m);

}  // namespace numrange::cli
