#include "polyexpm/pade.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace polyexpm {

namespace {

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

double poly_eval(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

double taylor_eval(int m, double x) {
  if (m < 0) throw std::invalid_argument("taylor_eval: negative order");
  double term = 1.0;
  double sum = 1.0;
  for (int mu = 1; mu <= m; ++mu) {
    term *= x / mu;
    sum += term;
  }
  return sum;
}

PadeCoeffs pade_coeffs(int m) {
  if (m < 1 || m > kMaxPadeOrder) throw std::out_of_range("pade_coeffs: order must be in [1, 16]");
  PadeCoeffs pc{m, std::vector<double>(m + 1)};
  // Both integers are below 2^53, so the quotient is a single correctly rounded division.
  for (int mu = 0; mu <= m; ++mu)
    pc.r[mu] = static_cast<double>(binomial(2 * m - mu, m)) / static_cast<double>(factorial(mu));
  return pc;
}

double pade_scalar(int m, double x) {
  const PadeCoeffs pc = pade_coeffs(m);
  return poly_eval(pc.r, x) / poly_eval(pc.r, -x);
}

PadeResult pade_expm(const DenseMatrix& x, int m) {
  const PadeCoeffs pc = pade_coeffs(m);
  const std::size_t n = x.n();
  MulCounter counter;
  std::vector<DenseMatrix> powers{x};
  for (int j = 2; j <= m; ++j) powers.push_back(mat_mul(powers.back(), x, counter));

  std::vector<double> num(pc.r.begin() + 1, pc.r.end());
  std::vector<double> den = num;
  for (std::size_t j = 0; j < den.size(); j += 2) den[j] = -den[j];  // odd powers flip sign
  const DenseMatrix numerator = lincomb(num, std::span<const DenseMatrix>(powers), pc.r[0], n);
  const DenseMatrix denominator = lincomb(den, std::span<const DenseMatrix>(powers), pc.r[0], n);

  const LuFactorization lu(denominator);
  const double cond = lu.condition_1norm();
  if (lu.singular() || !(cond < 1.0 / std::numeric_limits<double>::epsilon())) {
    throw SingularDenominatorError("pade_expm: denominator R_m(-x) is numerically singular (cond1 = " +
                                       std::to_string(cond) + ")",
                                   cond);
  }
  return {lu.solve(numerator), cond, counter.count};
}

PadeReport pade_expm_scaled(const DenseMatrix& x, int m, double theta) {
  const int k = scaling_exponent(one_norm(x), theta);
  PadeResult base = pade_expm(ldexp(x, -k), m);
  PadeReport rep{std::move(base.value), base.condition, base.mm_count, k, false};
  if (!rep.result.all_finite()) {
    rep.overflow = true;
    return rep;
  }
  MulCounter counter;
  for (int s = 0; s < k; ++s) {
    rep.result = mat_mul(rep.result, rep.result, counter);
    if (!rep.result.all_finite()) {
      rep.overflow = true;
      break;
    }
  }
  rep.mm_count += counter.count;
  return rep;
}

}  // namespace polyexpm
