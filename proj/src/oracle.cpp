#include "polyexpm/oracle.hpp"

#include <algorithm>

namespace polyexpm {

XPMatrix::XPMatrix(std::size_t n) : n_(n), data_(n * n) {}

XPMatrix XPMatrix::identity(std::size_t n) {
  XPMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = XPReal(1);
  return m;
}

XPMatrix XPMatrix::from_double(const DenseMatrix& a, int bits) {
  ScopedPrecision scope(bits);
  XPMatrix m(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) m(i, j) = XPReal(a(i, j), bits);
  return m;
}

DenseMatrix XPMatrix::to_double() const {
  DenseMatrix out(n_);
  auto dst = out.data();
  for (std::size_t k = 0; k < data_.size(); ++k) dst[k] = data_[k].to_double();
  return out;
}

int XPMatrix::precision() const {
  int p = default_precision();
  if (!data_.empty()) {
    p = 0;
    for (const auto& v : data_) p = std::max(p, v.precision());
  }
  return p;
}

XPMatrix operator*(const XPMatrix& a, const XPMatrix& b) {
  if (a.n() != b.n()) throw DimensionError("XPMatrix product: dimension mismatch");
  const std::size_t n = a.n();
  ScopedPrecision scope(std::max(a.precision(), b.precision()));
  XPMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      mpfr_ptr acc = c(i, j).get();
      for (std::size_t k = 0; k < n; ++k) {
        if (mpfr_zero_p(a(i, k).get()) || mpfr_zero_p(b(k, j).get())) continue;
        mpfr_fma(acc, a(i, k).get(), b(k, j).get(), acc, MPFR_RNDN);
      }
    }
  }
  return c;
}

XPMatrix operator-(const XPMatrix& a, const XPMatrix& b) {
  if (a.n() != b.n()) throw DimensionError("XPMatrix difference: dimension mismatch");
  ScopedPrecision scope(std::max(a.precision(), b.precision()));
  XPMatrix c(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

XPMatrix operator-(const XPMatrix& a) {
  XPMatrix c = a;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) c(i, j) = -a(i, j);
  return c;
}

XPReal one_norm(const XPMatrix& a) {
  ScopedPrecision scope(a.precision());
  XPReal best(0);
  for (std::size_t j = 0; j < a.n(); ++j) {
    XPReal col(0);
    for (std::size_t i = 0; i < a.n(); ++i) col += abs(a(i, j));
    best = max(best, col);
  }
  return best;
}

XPMatrix oracle_expm_xp(const XPMatrix& x, TaylorTrace* trace) {
  const std::size_t n = x.n();
  ScopedPrecision scope(x.precision());

  // Scale so that ||y||_1 <= 1/2.
  const XPReal norm = one_norm(x);
  if (!norm.is_finite()) throw OracleOverflowError("oracle_expm: non-finite input");
  int k = 0;
  while (ldexp(norm, -k) > XPReal(0.5)) ++k;
  XPMatrix y = x;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mpfr_mul_2si(y(i, j).get(), y(i, j).get(), -k, MPFR_RNDN);
  const XPReal ynorm = ldexp(norm, -k);

  // Sum y^j / j! until ||y||^(N+1) / (N+1)!, which bounds the next term,
  // drops below 2^-140 ||S||.
  XPMatrix sum = XPMatrix::identity(n);
  XPMatrix term = XPMatrix::identity(n);
  XPReal bound(1);  // ||y||^N / N!
  int N = 0;
  const XPReal cutoff = ldexp(XPReal(1), -kOracleTruncationExponent);
  while (true) {
    const XPReal next_bound = bound * ynorm / XPReal(N + 1);
    if (next_bound <= cutoff * one_norm(sum)) break;
    ++N;
    term = term * y;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        mpfr_div_ui(term(i, j).get(), term(i, j).get(), static_cast<unsigned long>(N), MPFR_RNDN);
        mpfr_add(sum(i, j).get(), sum(i, j).get(), term(i, j).get(), MPFR_RNDN);
      }
    }
    bound = next_bound;
  }
  if (trace) *trace = {k, N, ynorm.to_double()};

  for (int s = 0; s < k; ++s) sum = sum * sum;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!sum(i, j).is_finite()) throw OracleOverflowError("oracle_expm: extended exponent range exceeded");
  return sum;
}

DenseMatrix oracle_expm(const DenseMatrix& x, int bits) {
  if (!x.all_finite()) throw std::invalid_argument("oracle_expm: non-finite input");
  return oracle_expm_xp(XPMatrix::from_double(x, bits)).to_double();
}

}  // namespace polyexpm
