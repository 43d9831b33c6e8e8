#pragma once

// Gaussian elimination with partial pivoting for the small systems of the
// spectral solver. Works for double and XPReal alike.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace polyexpm {

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves A x = b for a row-major n x n matrix.
template <class T>
std::vector<T> solve_dense(std::vector<T> a, std::vector<T> b) {
  using std::abs;
  const std::size_t n = b.size();
  if (a.size() != n * n) throw std::invalid_argument("solve_dense: shape mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    T best = abs(a[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      T v = abs(a[i * n + k]);
      if (v > best) {
        best = std::move(v);
        piv = i;
      }
    }
    if (!(best > T(0))) throw SingularSystemError("solve_dense: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i * n + k] == T(0)) continue;
      const T l = a[i * n + k] / a[k * n + k];
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= l * a[k * n + j];
      b[i] -= l * b[k];
    }
  }
  std::vector<T> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    T s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a[ii * n + j] * x[j];
    x[ii] = s / a[ii * n + ii];
  }
  return x;
}

}  // namespace polyexpm
