#pragma once

// Matrix Market reader and writer for real square matrices. The reader
// accepts `matrix coordinate real|integer general|symmetric|skew-symmetric`
// and `matrix array real|integer general`, and densifies the result.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "polyexpm/dense_matrix.hpp"

namespace polyexpm {

class MatrixMarketError : public std::runtime_error {
 public:
  MatrixMarketError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

DenseMatrix parse_matrix_market(std::istream& is);
/// Throws std::runtime_error if the file cannot be opened.
DenseMatrix parse_matrix_market(const std::filesystem::path& path);

enum class MatrixMarketLayout { Coordinate, Array };

/// Writes a general real matrix; values use 17 significant digits so that
/// reading the file back reproduces every double exactly.
void write_matrix_market(const DenseMatrix& a, std::ostream& os,
                         MatrixMarketLayout layout = MatrixMarketLayout::Coordinate);
void write_matrix_market(const DenseMatrix& a, const std::filesystem::path& path,
                         MatrixMarketLayout layout = MatrixMarketLayout::Coordinate);

}  // namespace polyexpm
