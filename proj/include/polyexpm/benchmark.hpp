#pragma once

// Benchmark runner: every source is evaluated by the product form, the Pade
// baseline and the extended-precision oracle; relative 1-norm errors against
// the oracle go into one ErrorRecord per matrix.
//
// Conventions: a method whose result overflows (or whose denominator solve
// fails) is recorded with error 1. CSV columns always hold the raw values;
// the optional plot columns carry log10 errors floored at -17, with overflow
// shown as 0.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "polyexpm/generators.hpp"
#include "polyexpm/oracle.hpp"
#include "polyexpm/pade.hpp"
#include "polyexpm/poly_expm.hpp"

namespace polyexpm {

struct ErrorRecord {
  std::string id;
  std::size_t n = 0;
  double norm1 = 0.0;
  double err_poly = 0.0;  // NaN when not run or no valid reference
  double err_pade = 0.0;
  bool overflow_poly = false;
  bool overflow_pade = false;
  long mm_count = 0;  // product-form multiplications
  int scaling_k = 0;  // product-form scaling exponent
  double pade_condition = 0.0;
};

struct BenchOptions {
  /// Any of "poly", "pade:<m>" (and "pade" for the default order).
  std::vector<std::string> methods{"poly", "pade:8"};
  double pade_theta = kDefaultPadeTheta;
  int oracle_bits = kDefaultOracleBits;
  int jobs = 1;
  ExpmOptions expm;
};

/// Records come back in input order whatever the number of jobs.
std::vector<ErrorRecord> run_benchmark(const std::vector<MatrixSource>& sources, const BenchOptions& options = {});

/// Evaluates one matrix; exposed for tests.
ErrorRecord benchmark_one(const MatrixSource& source, const BenchOptions& options);

inline constexpr double kPlotErrorFloor = 1e-17;

/// log10 of an error for plotting: floored at -17, overflow -> 0.
double plot_log10_error(double err, bool overflow);

void emit_csv(const std::vector<ErrorRecord>& records, std::ostream& os, bool plot_clamp = false);
/// Throws std::runtime_error if the path cannot be written.
void emit_csv(const std::vector<ErrorRecord>& records, const std::filesystem::path& path, bool plot_clamp = false);

/// Records sorted by ascending norm1 (stable).
std::vector<ErrorRecord> sort_by_norm(std::vector<ErrorRecord> records);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace polyexpm
