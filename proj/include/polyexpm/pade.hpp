#pragma once

// Truncated Taylor series and the diagonal Pade approximant
//   Q_m(x) = R_m(x) / R_m(-x),   R_m(x) = sum_mu C(2m - mu, m) x^mu / mu!
// for scalars and matrices. The matrix form is the rational baseline the
// product-form evaluator is compared against; it evaluates powers explicitly
// and solves the denominator system with a partial-pivoting LU.

#include <stdexcept>
#include <vector>

#include "polyexpm/dense_matrix.hpp"

namespace polyexpm {

/// T_m(x) = sum_{mu=0}^{m} x^mu / mu!.
double taylor_eval(int m, double x);

struct PadeCoeffs {
  int m;
  std::vector<double> r;  // r[mu] = C(2m - mu, m) / mu!, rounded once
};

inline constexpr int kMaxPadeOrder = 16;

/// Throws std::out_of_range unless 1 <= m <= 16.
PadeCoeffs pade_coeffs(int m);

/// Q_m(x) for a scalar.
double pade_scalar(int m, double x);

/// Thrown when R_m(-x) is singular or too ill-conditioned for the solve to
/// mean anything (condition >= 1/eps).
class SingularDenominatorError : public std::runtime_error {
 public:
  SingularDenominatorError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

struct PadeResult {
  DenseMatrix value;
  double condition;  // 1-norm condition number of R_m(-x)
  long mm_count;
};

/// Q_m(x) for a matrix, no scaling.
PadeResult pade_expm(const DenseMatrix& x, int m);

/// Default baseline operating point used by the benchmark harness.
inline constexpr int kDefaultPadeOrder = 8;
inline constexpr double kDefaultPadeTheta = 11.0;

struct PadeReport {
  DenseMatrix result;
  double condition = 0.0;
  long mm_count = 0;
  int scaling_k = 0;
  bool overflow = false;
};

/// Scaling and squaring around pade_expm: x is scaled by 2^-k with the
/// smallest k such that ||x||_1 / 2^k <= theta, then squared k times.
/// SingularDenominatorError propagates.
PadeReport pade_expm_scaled(const DenseMatrix& x, int m = kDefaultPadeOrder, double theta = kDefaultPadeTheta);

}  // namespace polyexpm
