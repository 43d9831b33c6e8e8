#pragma once

// Generation of the product-form parameters of E_M(x).
//
// The pipeline is
//   derive_monomial  : spectral solve of dF/dt = F on [-theta, theta] with
//                      F(-theta) = e^-theta, expanded into monomials of x
//   find_roots       : all M complex roots, conjugate pairs matched exactly
//   group_factors    : conjugate pairs -> real quadratics -> m' monic
//                      factors of degree m
// followed by packing into a ParamTable and writing it in the
// `POLYEXPM-TABLE v1` text format with hexadecimal floating-point literals.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "polyexpm/xp.hpp"

namespace polyexpm {

inline constexpr int kDefaultGenerationBits = 240;

class RootFindingError : public std::runtime_error {
 public:
  RootFindingError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class InsufficientPrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TableFormatError : public std::runtime_error {
 public:
  TableFormatError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// E(x) = sum_mu a[mu] x^mu in extended precision.
struct MonomialPoly {
  std::vector<XPReal> a;

  int degree() const { return static_cast<int>(a.size()) - 1; }
  const XPReal& leading() const { return a.back(); }
  XPReal eval(const XPReal& x) const;
  XPComplex eval(const XPComplex& z) const;
};

/// Expands the spectral solution for e^x on [-theta, theta] with M basis
/// functions into monomials of x. Runs entirely at `precision_bits`.
MonomialPoly derive_monomial(int M, double theta, int precision_bits = kDefaultGenerationBits);

/// All roots of p, computed by Aberth-Ehrlich iteration with Newton
/// polishing at the precision of p's coefficients. Non-real roots come in
/// exact conjugate pairs. Sorted by modulus, then real part, then imaginary
/// part. Throws RootFindingError when the residual bound is not met.
std::vector<XPComplex> find_roots(const MonomialPoly& p);

/// Monic real quadratic x^2 + c1 x + c0.
struct Quadratic {
  XPReal c0;
  XPReal c1;
};

struct Factorization {
  /// Quadratics in ascending order of |c0| (the squared root modulus).
  std::vector<Quadratic> quadratics;
  /// groups[i] lists the quadratic indices multiplied into factor i.
  std::vector<std::vector<int>> groups;
  /// rows[i][j]: coefficient of x^j in factor i; rows[i][m] == 1.
  std::vector<std::vector<XPReal>> rows;
};

/// Fuses conjugate pairs (and adjacent real roots) into real quadratics and
/// combines them into monic factors of degree m. Without an explicit
/// grouping the quadratics are dealt out by ascending modulus in a
/// back-and-forth order, which for two quadratics per factor pairs the
/// smallest with the largest.
Factorization group_factors(const std::vector<XPComplex>& roots, int m,
                            const std::optional<std::vector<std::vector<int>>>& grouping = std::nullopt);

/// Regroups and reorders the quadratics so that factor i matches
/// reference[i] (coefficients c_{i,0..m}). Throws FactorizationError if a
/// row has no match within `rel_tol`.
Factorization match_reference(const Factorization& f, int m, const std::vector<std::vector<double>>& reference,
                              double rel_tol = 1e-12);

/// Published M = 16, theta = 1.5 factor rows c_{i,0..4}, if (M, theta) is that case.
std::optional<std::vector<std::vector<double>>> published_factor_rows(int M, double theta);

/// Machine precision a (M, theta) row of the order table targets: 2^-112
/// for (64, 12), 2^-52 otherwise.
double default_eps_target(int M, double theta);

/// Parameters of E_M(x) = alpha * prod_i sum_j c[i][j] x^j in extended precision.
struct XPParamTable {
  int M = 0;
  int m = 0;
  int m_prime = 0;
  XPReal theta;
  double eps_target = 0.0;
  XPReal alpha;
  std::vector<std::vector<XPReal>> c;
  int precision_bits = 0;
  std::vector<std::vector<int>> groups;  // provenance only; not read back

  XPReal eval(const XPReal& x) const;
};

/// The same parameters rounded to double, as consumed by the evaluator.
struct ParamTable {
  int M = 0;
  int m = 0;
  int m_prime = 0;
  double theta = 0.0;
  double eps_target = 0.0;
  double alpha = 0.0;
  std::vector<std::vector<double>> c;
  int precision_bits = 0;

  friend bool operator==(const ParamTable&, const ParamTable&) = default;
};

ParamTable to_double(const XPParamTable& t);

/// Full pipeline for one order: derive, root, group (matching the published
/// rows when they exist), pack. m = m' = sqrt(M).
XPParamTable generate_table(int M, double theta, int precision_bits = kDefaultGenerationBits,
                            std::optional<double> eps_target = std::nullopt);

/// Writes the table file. Tables targeting double precision are written
/// with coefficients rounded to 53 bits; finer targets keep full precision.
void emit_table(const XPParamTable& t, std::ostream& os);
void emit_table(const XPParamTable& t, const std::filesystem::path& path);
void emit_table(const ParamTable& t, std::ostream& os);
void emit_table(const ParamTable& t, const std::filesystem::path& path);
std::string table_text(const XPParamTable& t);

ParamTable load_table(std::istream& is);
ParamTable load_table(const std::filesystem::path& path);
XPParamTable load_table_xp(std::istream& is);
XPParamTable load_table_xp(const std::filesystem::path& path);

enum class TableId { M16, M36, M64, M64Quad };

/// File name a table is stored under, e.g. "expm_m16.tbl".
std::string table_file_name(TableId id);

/// Tables built into the library (parsed once, thread-safe).
const ParamTable& shipped_table(TableId id);
const XPParamTable& shipped_table_xp(TableId id);
/// Raw text of a built-in table file.
std::string_view shipped_table_text(TableId id);

}  // namespace polyexpm
