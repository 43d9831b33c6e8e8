#pragma once

// Dense square matrices in double precision and the handful of kernels the
// evaluators are built from. Matrix-matrix products are the cost unit of the
// product-form evaluator, so every product can be tallied in a MulCounter.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace polyexpm {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DenseMatrix {
 public:
  DenseMatrix() = default;
  /// n x n zero matrix.
  explicit DenseMatrix(std::size_t n);
  /// Row-major initialisation; throws DimensionError unless the rows form a square.
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);
  /// Row-major data of length n*n.
  DenseMatrix(std::size_t n, std::vector<double> row_major);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> d);

  std::size_t n() const { return n_; }
  bool empty() const { return n_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool all_finite() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Number of matrix-matrix multiplications performed in one evaluation.
struct MulCounter {
  long count = 0;
  void tick() { ++count; }
};

DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b, MulCounter& counter);
/// Uncounted product, for callers outside the cost model.
DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b);

/// sum_i coeffs[i] * mats[i] + identity_coeff * I. Never multiplies matrices.
/// `n` gives the dimension when `mats` is empty.
DenseMatrix lincomb(std::span<const double> coeffs, std::span<const DenseMatrix* const> mats,
                    double identity_coeff, std::size_t n);
DenseMatrix lincomb(std::span<const double> coeffs, std::span<const DenseMatrix> mats,
                    double identity_coeff, std::size_t n);

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);
DenseMatrix operator-(const DenseMatrix& a);

/// Multiplies every entry by 2^e, exactly barring under/overflow.
DenseMatrix ldexp(const DenseMatrix& a, int e);

/// Maximum absolute column sum.
double one_norm(const DenseMatrix& a);

/// ||approx - exact||_1 / ||exact||_1. Throws std::domain_error for a
/// zero-norm reference. Non-finite entries propagate into the result;
/// callers decide how to report them.
double rel_error_1norm(const DenseMatrix& approx, const DenseMatrix& exact);

/// Smallest k >= 0 with norm / 2^k <= theta.
int scaling_exponent(double norm, double theta);

/// LU factorisation with partial pivoting, used by the rational baseline.
class LuFactorization {
 public:
  explicit LuFactorization(const DenseMatrix& a);

  bool singular() const { return singular_; }
  /// Solves A X = B column by column.
  DenseMatrix solve(const DenseMatrix& b) const;
  /// ||A||_1 * ||A^-1||_1, computed from the explicit inverse. Infinite when singular.
  double condition_1norm() const;

 private:
  std::size_t n_;
  std::vector<double> lu_;
  std::vector<std::size_t> perm_;
  double norm_a_;
  bool singular_ = false;
};

}  // namespace polyexpm
