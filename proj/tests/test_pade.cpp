#include <doctest.h>

#include <cmath>
#include <vector>

#include "polyexpm/coeffgen.hpp"
#include "polyexpm/oracle.hpp"
#include "polyexpm/pade.hpp"
#include "polyexpm/spectral.hpp"
#include "polyexpm/xp.hpp"
#include "test_support.hpp"

using namespace polyexpm;

namespace {

// Q_m(x) in extended precision from the exact coefficients.
XPReal pade_xp(int m, const XPReal& x) {
  const auto pc = pade_coeffs(m);
  XPReal num(0), den(0);
  for (int mu = m; mu >= 0; --mu) {
    num = num * x + XPReal(pc.r[mu]);
    den = den * (-x) + XPReal(pc.r[mu]);
  }
  return num / den;
}

}  // namespace

TEST_CASE("taylor partial sums") {
  CHECK(taylor_eval(0, 3.7) == 1.0);
  CHECK(taylor_eval(2, 1.0) == 2.5);
  const double t10 = taylor_eval(10, 1.0);
  // The truncation error is 2.73e-8 in absolute terms, 1.0e-8 relative to e.
  CHECK(std::abs(t10 - std::exp(1.0)) == doctest::Approx(2.731266e-8).epsilon(1e-5));
  CHECK(std::abs(t10 - std::exp(1.0)) / std::exp(1.0) == doctest::Approx(1.00478e-8).epsilon(1e-4));
  CHECK_THROWS_AS(taylor_eval(-1, 1.0), std::invalid_argument);
}

TEST_CASE("pade coefficients") {
  CHECK(pade_coeffs(1).r == std::vector<double>{2, 1});
  CHECK(pade_coeffs(2).r == std::vector<double>{6, 3, 0.5});
  CHECK_THROWS_AS(pade_coeffs(0), std::out_of_range);
  CHECK_THROWS_AS(pade_coeffs(17), std::out_of_range);

  ScopedPrecision p(256);
  for (int m = 1; m <= 16; ++m) {
    const auto pc = pade_coeffs(m);
    REQUIRE(pc.r.size() == static_cast<std::size_t>(m + 1));
    // binom(2m - mu, m) / mu! built up as an exact rational in 256 bits.
    for (int mu = 0; mu <= m; ++mu) {
      XPReal num(1), den(1);
      for (int i = 1; i <= m; ++i) {
        num *= XPReal(2 * m - mu - m + i);
        den *= XPReal(i);
      }
      for (int i = 2; i <= mu; ++i) den *= XPReal(i);
      CHECK(pc.r[mu] == (num / den).to_double());
    }
    long double c = 1;
    for (int i = 1; i <= m; ++i) c = c * (m + i) / i;
    CHECK(pc.r[0] == static_cast<double>(c));
  }
}

TEST_CASE("scalar Q1") {
  for (double x : {-0.5, 0.25, 1.0}) CHECK(pade_scalar(1, x) == doctest::Approx((2 + x) / (2 - x)).epsilon(1e-15));
}

TEST_CASE("matrix pade basics") {
  const auto zero = pade_expm(DenseMatrix(3), 8);
  CHECK(zero.value == DenseMatrix::identity(3));
  CHECK(zero.mm_count == 7);

  for (double c : {-2.0, 0.5, 3.0}) {
    const auto one = pade_expm(DenseMatrix{{c}}, 6);
    CHECK(one.value(0, 0) == doctest::Approx(pade_scalar(6, c)).epsilon(1e-15));
  }

  const auto d = pade_expm(DenseMatrix{{0.3, 0}, {0, 0.3}}, 5);
  const double prop = spectral::propagate_elements(-0.3, 1, 5, 1.0);
  CHECK(std::abs(d.value(0, 0) - prop) <= 1e-13);
  CHECK(std::abs(d.value(1, 1) - prop) <= 1e-13);
  CHECK(d.value(0, 1) == 0.0);
}

TEST_CASE("reciprocal symmetry") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto x = testing::random_matrix(6, seed, 0.5);
    for (int m : {3, 5, 8}) {
      const auto a = pade_expm(x, m).value;
      const auto b = pade_expm(-x, m).value;
      CHECK(one_norm(mat_mul(a, b) - DenseMatrix::identity(6)) <= 1e-12);
    }
  }
}

TEST_CASE("singular denominator") {
  // R_1(-x) = 2I - x
  try {
    pade_expm(DenseMatrix{{2, 0}, {0, 1}}, 1);
    FAIL("expected SingularDenominatorError");
  } catch (const SingularDenominatorError& e) {
    CHECK(std::isinf(e.condition()));
  }
  const auto near = pade_expm(DenseMatrix{{2 - 1e-9, 0}, {0, 1}}, 1);
  CHECK(near.condition > 5e8);
}

TEST_CASE("scaled pade") {
  const auto small = pade_expm_scaled(testing::random_matrix(5, 3, 2.0));
  CHECK(small.scaling_k == 0);
  CHECK(small.mm_count == 7);
  const auto x = testing::random_matrix(5, 4, 40.0);
  const auto big = pade_expm_scaled(x, 8, 11.0);
  CHECK(big.scaling_k == 2);
  CHECK(big.mm_count == 9);
  const auto over = pade_expm_scaled(DenseMatrix{{800, 0}, {0, 800}});
  CHECK(over.overflow);
}

TEST_CASE("error shape against the spectral polynomial on [-1, 1]") {
  ScopedPrecision p(200);
  const MonomialPoly e10 = derive_monomial(10, 1.0, 200);
  std::vector<double> err_q, err_e;
  for (int i = 0; i <= 200; ++i) {
    const XPReal x = XPReal(-1) + XPReal(i) / XPReal(100);
    const XPReal ex = exp(x);
    err_q.push_back(((pade_xp(5, x) - ex) / ex).to_double());
    err_e.push_back(((e10.eval(x) - ex) / ex).to_double());
  }
  auto max_abs = [](const std::vector<double>& v) {
    double m = 0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
  };
  const double mq = max_abs(err_q), me = max_abs(err_e);
  CHECK(mq / me < 100.0);
  CHECK(me / mq < 100.0);

  // Q5: minimal at 0, largest at the ends, monotone in |x|.
  CHECK(std::abs(err_q[100]) < 1e-30);
  CHECK(std::max(std::abs(err_q[0]), std::abs(err_q[200])) == mq);
  for (int i = 101; i <= 200; ++i) CHECK(std::abs(err_q[i]) >= std::abs(err_q[i - 1]));

  // E10: error spread over the interval, many sign changes, interior peaks
  // of the same order as the ends.
  int sign_changes = 0;
  for (int i = 1; i <= 200; ++i)
    if ((err_e[i] > 0) != (err_e[i - 1] > 0)) ++sign_changes;
  CHECK(sign_changes >= 8);
  double interior = 0;
  for (int i = 50; i <= 150; ++i) interior = std::max(interior, std::abs(err_e[i]));
  CHECK(interior > 0.01 * me);
}
