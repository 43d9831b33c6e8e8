#pragma once

// Extended-precision reference for e^x: scaling and squaring around a
// Taylor series summed until the next term is certainly below 2^-140 of the
// running sum. Shares nothing with the product-form evaluator beyond the
// DenseMatrix type.

#include <stdexcept>
#include <vector>

#include "polyexpm/dense_matrix.hpp"
#include "polyexpm/xp.hpp"

namespace polyexpm {

inline constexpr int kDefaultOracleBits = 192;
inline constexpr int kOracleTruncationExponent = 140;

class OracleOverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class XPMatrix {
 public:
  XPMatrix() = default;
  /// n x n zero matrix at the current default precision.
  explicit XPMatrix(std::size_t n);
  static XPMatrix identity(std::size_t n);
  /// Exact promotion of a double matrix to `bits` of precision.
  static XPMatrix from_double(const DenseMatrix& a, int bits);

  std::size_t n() const { return n_; }
  XPReal& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const XPReal& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  /// Round to nearest double; entries beyond the double range become +-inf.
  DenseMatrix to_double() const;
  int precision() const;

 private:
  std::size_t n_ = 0;
  std::vector<XPReal> data_;
};

XPMatrix operator*(const XPMatrix& a, const XPMatrix& b);
XPMatrix operator-(const XPMatrix& a, const XPMatrix& b);
XPMatrix operator-(const XPMatrix& a);
XPReal one_norm(const XPMatrix& a);

/// What the Taylor stage did, for inspection in tests.
struct TaylorTrace {
  int scaling_k = 0;
  int terms = 0;             // N: terms y^0 .. y^N were summed
  double scaled_norm = 0.0;  // ||y||_1 with y = x / 2^k
};

/// e^x at the precision of x's entries. Throws OracleOverflowError if the
/// extended exponent range is exceeded.
XPMatrix oracle_expm_xp(const XPMatrix& x, TaylorTrace* trace = nullptr);

/// e^x computed at `bits` and rounded to double.
DenseMatrix oracle_expm(const DenseMatrix& x, int bits = kDefaultOracleBits);

}  // namespace polyexpm
