#include "polyexpm/xp.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

namespace polyexpm {

namespace {

thread_local int g_precision = 256;

mpfr_prec_t wider(const XPReal& a, const XPReal& b) {
  return std::max(mpfr_get_prec(a.get()), mpfr_get_prec(b.get()));
}

}  // namespace

int default_precision() { return g_precision; }

ScopedPrecision::ScopedPrecision(int bits) : saved_(g_precision) {
  if (bits < MPFR_PREC_MIN || bits > 1 << 20) throw std::invalid_argument("ScopedPrecision: bad precision");
  g_precision = bits;
}

ScopedPrecision::~ScopedPrecision() { g_precision = saved_; }

XPReal::XPReal(int bits, std::nullptr_t) { mpfr_init2(v_, bits); }

XPReal::XPReal() : XPReal(g_precision, nullptr) { mpfr_set_zero(v_, 1); }

XPReal::XPReal(double v) : XPReal(std::max(g_precision, 53), nullptr) { mpfr_set_d(v_, v, MPFR_RNDN); }

XPReal::XPReal(int v) : XPReal(g_precision, nullptr) { mpfr_set_si(v_, v, MPFR_RNDN); }

XPReal::XPReal(long v) : XPReal(g_precision, nullptr) { mpfr_set_si(v_, v, MPFR_RNDN); }

XPReal::XPReal(double v, int bits) : XPReal(bits, nullptr) { mpfr_set_d(v_, v, MPFR_RNDN); }

XPReal XPReal::parse(std::string_view text, int bits) {
  std::string s(text);
  XPReal r(bits, nullptr);
  char* end = nullptr;
  mpfr_strtofr(r.v_, s.c_str(), &end, 0, MPFR_RNDN);
  if (s.empty() || end != s.c_str() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return r;
}

XPReal::XPReal(const XPReal& other) : XPReal(static_cast<int>(mpfr_get_prec(other.v_)), nullptr) {
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

XPReal::XPReal(XPReal&& other) noexcept : XPReal(static_cast<int>(mpfr_get_prec(other.v_)), nullptr) {
  mpfr_swap(v_, other.v_);
}

XPReal& XPReal::operator=(const XPReal& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

XPReal& XPReal::operator=(XPReal&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

XPReal::~XPReal() { mpfr_clear(v_); }

void XPReal::set_precision(int bits) { mpfr_prec_round(v_, bits, MPFR_RNDN); }

std::string XPReal::to_hex() const {
  char* buf = nullptr;
  if (mpfr_asprintf(&buf, "%Ra", v_) < 0) throw std::runtime_error("mpfr_asprintf failed");
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

std::string XPReal::to_string(int digits) const {
  char* buf = nullptr;
  if (mpfr_asprintf(&buf, "%.*Re", digits - 1, v_) < 0) throw std::runtime_error("mpfr_asprintf failed");
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

XPReal& XPReal::operator+=(const XPReal& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

XPReal& XPReal::operator-=(const XPReal& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

XPReal& XPReal::operator*=(const XPReal& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

XPReal& XPReal::operator/=(const XPReal& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

XPReal operator+(const XPReal& a, const XPReal& b) {
  XPReal r(static_cast<int>(wider(a, b)), nullptr);
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

XPReal operator-(const XPReal& a, const XPReal& b) {
  XPReal r(static_cast<int>(wider(a, b)), nullptr);
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

XPReal operator*(const XPReal& a, const XPReal& b) {
  XPReal r(static_cast<int>(wider(a, b)), nullptr);
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

XPReal operator/(const XPReal& a, const XPReal& b) {
  XPReal r(static_cast<int>(wider(a, b)), nullptr);
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

XPReal operator-(const XPReal& a) {
  XPReal r(a);
  mpfr_neg(r.v_, r.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const XPReal& a, const XPReal& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.v_, b.v_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

XPReal abs(const XPReal& x) {
  XPReal r(x);
  mpfr_abs(r.get(), r.get(), MPFR_RNDN);
  return r;
}

XPReal sqrt(const XPReal& x) {
  XPReal r(x);
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

XPReal exp(const XPReal& x) {
  XPReal r(x);
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}

XPReal log2(const XPReal& x) {
  XPReal r(x);
  mpfr_log2(r.get(), x.get(), MPFR_RNDN);
  return r;
}

XPReal ldexp(const XPReal& x, long e) {
  XPReal r(x);
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

XPReal pow(const XPReal& x, int n) {
  XPReal r(x);
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

XPReal max(const XPReal& a, const XPReal& b) { return a < b ? b : a; }

XPReal euler_e() {
  XPReal one(1);
  return exp(one);
}

std::ostream& operator<<(std::ostream& os, const XPReal& x) { return os << x.to_string(40); }

XPComplex operator/(const XPComplex& a, const XPComplex& b) {
  // Smith's algorithm keeps the intermediate magnitudes bounded.
  if (abs(b.re) >= abs(b.im)) {
    const XPReal r = b.im / b.re;
    const XPReal d = b.re + b.im * r;
    return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
  }
  const XPReal r = b.re / b.im;
  const XPReal d = b.re * r + b.im;
  return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
}

XPComplex conj(const XPComplex& z) { return {z.re, -z.im}; }

XPReal norm(const XPComplex& z) { return z.re * z.re + z.im * z.im; }

XPReal abs(const XPComplex& z) {
  XPReal r(z.re);
  mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
  return r;
}

}  // namespace polyexpm
