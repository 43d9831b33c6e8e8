#pragma once

// Matrix exponential from the product form
//
//   E_M(x) = alpha * prod_{i=1}^{m'} ( sum_{j=0}^{m} c_ij x^j ),
//
// with the powers x^2..x^m computed once (m - 1 products) and the factors
// chained (m' - 1 products): 2(sqrt(M) - 1) matrix multiplications in all.
// Inputs above the span theta are scaled by 2^-k and squared back k times.

#include <optional>

#include "polyexpm/coeffgen.hpp"
#include "polyexpm/dense_matrix.hpp"

namespace polyexpm {

struct EvalReport {
  DenseMatrix result;
  long mm_count = 0;
  int order_used = 0;  // M
  int scaling_k = 0;
  bool overflow = false;
};

/// Evaluates the product form at x with exactly m + m' - 2 counted
/// multiplications. ||x||_1 <= theta is the caller's business.
DenseMatrix eval_product(const DenseMatrix& x, const ParamTable& table, MulCounter& counter);

/// Scalar version of the same evaluation scheme (powers, then factor sums,
/// alpha folded into the first factor), used for span accuracy checks.
double eval_product_scalar(double x, const ParamTable& table);

/// The tables an evaluation may choose from.
struct TableSet {
  ParamTable m16;
  ParamTable m36;
  ParamTable m64;

  /// Tables built into the library.
  static const TableSet& shipped();
  /// expm_m16.tbl, expm_m36.tbl and expm_m64.tbl from a directory.
  static TableSet from_directory(const std::filesystem::path& dir);
};

enum class PlanOrder { M16, M36, M64 };

struct Plan {
  PlanOrder order;
  int scaling_k;
};

/// Norm-based order selection: M = 16 up to 1.5, M = 36 up to 9.75, M = 36
/// with the smallest scaling exponent k putting norm / 2^k <= 9.75 beyond.
/// Thresholds are inclusive.
Plan select_plan(double norm);

/// Same rule with the M = 64 double table (theta = 20.25) for every norm.
Plan select_plan_m64(double norm);

struct ExpmOptions {
  /// Use the M = 64 table in place of the default 16/36 rule.
  bool use_m64 = false;
  /// Evaluate with this single table (scaling to its theta) instead of a plan.
  std::optional<ParamTable> single_table;
  const TableSet* tables = nullptr;  // defaults to TableSet::shipped()
};

/// e^x with the product form, order selection and scaling and squaring.
/// Non-finite entries at any stage set `overflow` and stop the evaluation.
EvalReport expm(const DenseMatrix& x, const ExpmOptions& options = {});

}  // namespace polyexpm
