#pragma once

// Extended-precision real and complex scalars backed by MPFR.
//
// Every XPReal carries its own significand width. New values default to the
// precision of the innermost ScopedPrecision on the calling thread, so a
// generation run or oracle call fixes its working precision once at entry
// and the arithmetic below follows it. Binary operations round to the wider
// of the two operand precisions.

#include <mpfr.h>

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

namespace polyexpm {

/// Working precision (bits) used for freshly constructed XPReal values.
int default_precision();

/// RAII guard that sets the thread's default XPReal precision.
class ScopedPrecision {
 public:
  explicit ScopedPrecision(int bits);
  ~ScopedPrecision();
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  int saved_;
};

class XPReal {
 public:
  XPReal();
  XPReal(double v);  // NOLINT: implicit, exact for precision >= 53
  XPReal(int v);     // NOLINT
  XPReal(long v);    // NOLINT
  XPReal(double v, int bits);

  /// Parses decimal or C99 hexadecimal ("0x1.8p+0") text. Throws
  /// std::invalid_argument if the whole string is not consumed.
  static XPReal parse(std::string_view text, int bits);

  XPReal(const XPReal& other);
  XPReal(XPReal&& other) noexcept;
  XPReal& operator=(const XPReal& other);
  XPReal& operator=(XPReal&& other) noexcept;
  ~XPReal();

  int precision() const { return static_cast<int>(mpfr_get_prec(v_)); }
  /// Rounds the value in place to a new precision.
  void set_precision(int bits);

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  /// Exact hexadecimal rendering, e.g. "0x1.be5p-45".
  std::string to_hex() const;
  /// Decimal rendering with the requested number of significant digits.
  std::string to_string(int digits) const;

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  XPReal& operator+=(const XPReal& o);
  XPReal& operator-=(const XPReal& o);
  XPReal& operator*=(const XPReal& o);
  XPReal& operator/=(const XPReal& o);

  friend XPReal operator+(const XPReal& a, const XPReal& b);
  friend XPReal operator-(const XPReal& a, const XPReal& b);
  friend XPReal operator*(const XPReal& a, const XPReal& b);
  friend XPReal operator/(const XPReal& a, const XPReal& b);
  friend XPReal operator-(const XPReal& a);

  friend bool operator==(const XPReal& a, const XPReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const XPReal& a, const XPReal& b);

 private:
  explicit XPReal(int bits, std::nullptr_t);  // uninitialised value of given precision
  mpfr_t v_;
};

XPReal abs(const XPReal& x);
XPReal sqrt(const XPReal& x);
XPReal exp(const XPReal& x);
XPReal log2(const XPReal& x);
/// x * 2^e, exact.
XPReal ldexp(const XPReal& x, long e);
XPReal pow(const XPReal& x, int n);
XPReal max(const XPReal& a, const XPReal& b);
/// The constant e at the current default precision.
XPReal euler_e();

std::ostream& operator<<(std::ostream& os, const XPReal& x);

struct XPComplex {
  XPReal re;
  XPReal im;

  XPComplex() = default;
  XPComplex(XPReal r, XPReal i) : re(std::move(r)), im(std::move(i)) {}

  friend XPComplex operator+(const XPComplex& a, const XPComplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend XPComplex operator-(const XPComplex& a, const XPComplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend XPComplex operator*(const XPComplex& a, const XPComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend XPComplex operator*(const XPComplex& a, const XPReal& s) { return {a.re * s, a.im * s}; }
  friend XPComplex operator/(const XPComplex& a, const XPComplex& b);
  friend XPComplex operator-(const XPComplex& a) { return {-a.re, -a.im}; }
};

XPComplex conj(const XPComplex& z);
XPReal abs(const XPComplex& z);
/// |z|^2 without the square root.
XPReal norm(const XPComplex& z);

}  // namespace polyexpm
