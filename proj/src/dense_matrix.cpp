#include "polyexpm/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace polyexpm {

namespace {

void require_same(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
  if (a.n() != b.n()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a.n()) + " vs " +
                         std::to_string(b.n()) + ")");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
  data_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) throw DimensionError("DenseMatrix: rows do not form a square matrix");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

DenseMatrix::DenseMatrix(std::size_t n, std::vector<double> row_major) : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n * n) throw DimensionError("DenseMatrix: data length is not n*n");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
  DenseMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b, MulCounter& counter) {
  DenseMatrix c = mat_mul(a, b);
  counter.tick();
  return c;
}

DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b) {
  require_same(a, b, "mat_mul");
  const std::size_t n = a.n();
  DenseMatrix c(n);
  // i-k-j order streams rows of b and c.
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = &c(i, 0);
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* bk = b.data().data() + k * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

DenseMatrix lincomb(std::span<const double> coeffs, std::span<const DenseMatrix* const> mats,
                    double identity_coeff, std::size_t n) {
  if (coeffs.size() != mats.size()) throw DimensionError("lincomb: coefficient and matrix counts differ");
  DenseMatrix out(n);
  for (std::size_t t = 0; t < mats.size(); ++t) {
    const DenseMatrix& m = *mats[t];
    if (m.n() != n) throw DimensionError("lincomb: dimension mismatch");
    const double c = coeffs[t];
    auto dst = out.data();
    auto src = m.data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += c * src[k];
  }
  for (std::size_t i = 0; i < n; ++i) out(i, i) += identity_coeff;
  return out;
}

DenseMatrix lincomb(std::span<const double> coeffs, std::span<const DenseMatrix> mats, double identity_coeff,
                    std::size_t n) {
  std::vector<const DenseMatrix*> ptrs;
  ptrs.reserve(mats.size());
  for (const auto& m : mats) ptrs.push_back(&m);
  return lincomb(coeffs, std::span<const DenseMatrix* const>(ptrs), identity_coeff, n);
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require_same(a, b, "operator+");
  DenseMatrix c = a;
  auto dst = c.data();
  auto src = b.data();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require_same(a, b, "operator-");
  DenseMatrix c = a;
  auto dst = c.data();
  auto src = b.data();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] -= src[k];
  return c;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix c = a;
  for (double& v : c.data()) v *= s;
  return c;
}

DenseMatrix operator-(const DenseMatrix& a) { return -1.0 * a; }

DenseMatrix ldexp(const DenseMatrix& a, int e) {
  DenseMatrix c = a;
  for (double& v : c.data()) v = std::ldexp(v, e);
  return c;
}

double one_norm(const DenseMatrix& a) {
  const std::size_t n = a.n();
  std::vector<double> col(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) col[j] += std::abs(a(i, j));
  double best = 0.0;
  for (double c : col) {
    if (std::isnan(c)) return c;
    best = std::max(best, c);
  }
  return best;
}

double rel_error_1norm(const DenseMatrix& approx, const DenseMatrix& exact) {
  require_same(approx, exact, "rel_error_1norm");
  const double denom = one_norm(exact);
  if (!(denom > 0.0)) throw std::domain_error("rel_error_1norm: reference has zero norm");
  return one_norm(approx - exact) / denom;
}

int scaling_exponent(double norm, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("scaling_exponent: theta must be positive");
  if (std::isnan(norm)) throw std::invalid_argument("scaling_exponent: NaN norm");
  if (!(norm > theta)) return 0;
  if (std::isinf(norm)) throw std::invalid_argument("scaling_exponent: infinite norm");
  int k = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta))));
  // log2 can be off by one near powers of two; settle on the exact minimum.
  while (std::ldexp(norm, -k) > theta) ++k;
  while (k > 0 && std::ldexp(norm, -(k - 1)) <= theta) --k;
  return k;
}

LuFactorization::LuFactorization(const DenseMatrix& a)
    : n_(a.n()), lu_(a.data().begin(), a.data().end()), perm_(a.n()), norm_a_(one_norm(a)) {
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_[i * n + k]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (!(best > 0.0) || !std::isfinite(best)) {
      singular_ = true;
      return;
    }
    if (piv != k) {
      std::swap_ranges(lu_.begin() + k * n, lu_.begin() + (k + 1) * n, lu_.begin() + piv * n);
      std::swap(perm_[k], perm_[piv]);
    }
    const double d = lu_[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = lu_[i * n + k] / d;
      lu_[i * n + k] = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_[i * n + j] -= l * lu_[k * n + j];
    }
  }
}

DenseMatrix LuFactorization::solve(const DenseMatrix& b) const {
  if (singular_) throw std::domain_error("LuFactorization::solve: singular matrix");
  if (b.n() != n_) throw DimensionError("LuFactorization::solve: dimension mismatch");
  const std::size_t n = n_;
  DenseMatrix x(n);
  std::vector<double> col(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) col[i] = b(perm_[i], c);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < i; ++k) col[i] -= lu_[i * n + k] * col[k];
    for (std::size_t ii = n; ii-- > 0;) {
      for (std::size_t k = ii + 1; k < n; ++k) col[ii] -= lu_[ii * n + k] * col[k];
      col[ii] /= lu_[ii * n + ii];
    }
    for (std::size_t i = 0; i < n; ++i) x(i, c) = col[i];
  }
  return x;
}

double LuFactorization::condition_1norm() const {
  if (singular_) return std::numeric_limits<double>::infinity();
  const double inv_norm = one_norm(solve(DenseMatrix::identity(n_)));
  if (!std::isfinite(inv_norm)) return std::numeric_limits<double>::infinity();
  return norm_a_ * inv_norm;
}

}  // namespace polyexpm
