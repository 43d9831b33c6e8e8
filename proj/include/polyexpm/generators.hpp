#pragma once

// Deterministic test-matrix generators and the built-in benchmark suite.
//
// Generator names:
//   randn                  Gaussian entries scaled by 1/sqrt(n)
//   jordan[:lambda]        lambda on the diagonal, ones above it (lambda = 1)
//   nilpotent              ones on the superdiagonal
//   diag-range[:lo:hi]     diagonal, evenly spaced over [lo, hi] (= [-1, 1])
//   scaled:<name>:<norm>   any of the above rescaled to the given 1-norm

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyexpm/dense_matrix.hpp"

namespace polyexpm {

class UnknownGeneratorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

DenseMatrix generate(const std::string& name, std::size_t n, std::uint64_t seed);

struct MatrixSource {
  std::string id;
  std::string origin;  // file path, or "generator seed=<s> n=<n>"
  DenseMatrix matrix;
};

MatrixSource generated_source(const std::string& name, std::size_t n, std::uint64_t seed);

/// Every *.mtx file in `dir`, sorted by file name; the id is the file name.
std::vector<MatrixSource> load_directory(const std::filesystem::path& dir);

/// Self-contained desk-scale suite: scaled Gaussian matrices over a sweep of
/// norms plus the structured generators.
std::vector<MatrixSource> builtin_suite();

}  // namespace polyexpm
