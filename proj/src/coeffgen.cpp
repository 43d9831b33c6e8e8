#include "polyexpm/coeffgen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "polyexpm/small_solve.hpp"
#include "polyexpm/spectral.hpp"

namespace polyexpm {

namespace {

int exact_sqrt(int M) {
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(M))));
  return r * r == M ? r : -1;
}

XPReal max_abs(const std::vector<XPReal>& v) {
  XPReal best(0);
  for (const auto& x : v) best = max(best, abs(x));
  return best;
}

// p(z) and p'(z) by Horner's rule.
void eval_with_derivative(const std::vector<XPReal>& a, const XPComplex& z, XPComplex& p, XPComplex& dp) {
  p = XPComplex(a.back(), XPReal(0));
  dp = XPComplex(XPReal(0), XPReal(0));
  for (std::size_t k = a.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + XPComplex(a[k], XPReal(0));
  }
}

bool root_less(const XPComplex& x, const XPComplex& y) {
  const XPReal nx = norm(x);
  const XPReal ny = norm(y);
  if (nx != ny) return nx < ny;
  if (x.re != y.re) return x.re < y.re;
  return x.im < y.im;
}

std::vector<XPReal> expand_group(const std::vector<Quadratic>& quads, const std::vector<int>& group) {
  std::vector<XPReal> poly{XPReal(1)};
  for (int q : group) {
    const Quadratic& f = quads.at(static_cast<std::size_t>(q));
    std::vector<XPReal> next(poly.size() + 2, XPReal(0));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i] * f.c0;
      next[i + 1] += poly[i] * f.c1;
      next[i + 2] += poly[i];
    }
    poly = std::move(next);
  }
  return poly;
}

}  // namespace

XPReal MonomialPoly::eval(const XPReal& x) const {
  XPReal acc = a.back();
  for (std::size_t k = a.size() - 1; k-- > 0;) acc = acc * x + a[k];
  return acc;
}

XPComplex MonomialPoly::eval(const XPComplex& z) const {
  XPComplex acc(a.back(), XPReal(0));
  for (std::size_t k = a.size() - 1; k-- > 0;) acc = acc * z + XPComplex(a[k], XPReal(0));
  return acc;
}

MonomialPoly derive_monomial(int M, double theta, int precision_bits) {
  if (M < 2) throw std::invalid_argument("derive_monomial: requires M >= 2");
  if (!(theta > 0.0)) throw std::invalid_argument("derive_monomial: requires theta > 0");
  ScopedPrecision scope(precision_bits);

  const XPReal th(theta);
  const spectral::Problem<XPReal> prob{XPReal(-1), XPReal(0), -th, th, exp(-th), M};
  const spectral::System<XPReal> sys = spectral::assemble_system(prob);
  const std::vector<XPReal> B = solve_dense(sys.omega, sys.gamma);

  // Residual of the linear solve.
  XPReal resid(0);
  for (int nu = 0; nu < M; ++nu) {
    XPReal r = -sys.gamma[nu];
    for (int mu = 0; mu < M; ++mu) r += sys.at(nu, mu) * B[mu];
    resid = max(resid, abs(r));
  }
  const XPReal scale = max_abs(sys.omega) * max_abs(B) + max_abs(sys.gamma);
  if (resid > ldexp(scale, -(precision_bits - 24))) {
    throw InsufficientPrecisionError("derive_monomial: linear solve residual " + resid.to_string(6) +
                                     " too large for " + std::to_string(precision_bits) + " bits");
  }

  // sum_mu s_mu(tau) B_mu + F(-1) in powers of tau.
  const auto s = spectral::s_monomials<XPReal>(M);
  std::vector<XPReal> tau_coeffs(M + 1, XPReal(0));
  tau_coeffs[0] = prob.f_init;
  for (int mu = 0; mu < M; ++mu)
    for (std::size_t i = 0; i < s[mu].size(); ++i) tau_coeffs[i] += s[mu][i] * B[mu];

  // The expansion must still honour F(-1) = f_init and F(+1) = 2 B_0 + f_init;
  // cancellation among the Legendre monomials shows up here first.
  XPReal at_plus(0);
  XPReal at_minus(0);
  for (int i = 0; i <= M; ++i) {
    at_plus += tau_coeffs[i];
    at_minus += (i % 2 == 0) ? tau_coeffs[i] : -tau_coeffs[i];
  }
  const XPReal endpoint = XPReal(2) * B[0] + prob.f_init;
  const XPReal tol = ldexp(XPReal(1), -(precision_bits / 2));
  if (abs(at_plus - endpoint) > tol * abs(endpoint) || abs(at_minus - prob.f_init) > tol * abs(prob.f_init)) {
    throw InsufficientPrecisionError("derive_monomial: monomial expansion lost too many digits at " +
                                     std::to_string(precision_bits) + " bits");
  }

  MonomialPoly out;
  out.a.reserve(M + 1);
  XPReal th_pow(1);
  for (int i = 0; i <= M; ++i) {
    out.a.push_back(tau_coeffs[i] / th_pow);
    th_pow *= th;
  }
  return out;
}

std::vector<XPComplex> find_roots(const MonomialPoly& p) {
  const int N = p.degree();
  if (N < 1) throw std::invalid_argument("find_roots: degree must be at least 1");
  if (p.leading().is_zero()) throw std::invalid_argument("find_roots: leading coefficient is zero");
  const int bits = p.leading().precision();
  ScopedPrecision scope(bits);

  std::vector<XPReal> monic;
  monic.reserve(p.a.size());
  for (const auto& c : p.a) monic.push_back(c / p.leading());

  // Start on a circle whose radius is the geometric mean of the root moduli.
  double radius = 1.0;
  if (!monic.front().is_zero()) {
    const XPReal lg = log2(abs(monic.front()));
    radius = std::exp2(lg.to_double() / N);
  }
  std::vector<XPComplex> z;
  z.reserve(N);
  for (int k = 0; k < N; ++k) {
    const double ang = 2.0 * std::numbers::pi * k / N + 0.4;
    z.emplace_back(XPReal(radius * std::cos(ang)), XPReal(radius * std::sin(ang)));
  }

  // Aberth-Ehrlich, Gauss-Seidel style.
  const XPReal stop = ldexp(XPReal(1), -(bits - 8));
  const int max_iter = 100 + 20 * N;
  bool converged = false;
  XPComplex pv, dpv;
  for (int iter = 0; iter < max_iter && !converged; ++iter) {
    converged = true;
    for (int k = 0; k < N; ++k) {
      eval_with_derivative(monic, z[k], pv, dpv);
      if (pv.re.is_zero() && pv.im.is_zero()) continue;
      const XPComplex ratio = pv / dpv;
      XPComplex sum(XPReal(0), XPReal(0));
      for (int j = 0; j < N; ++j) {
        if (j == k) continue;
        sum = sum + XPComplex(XPReal(1), XPReal(0)) / (z[k] - z[j]);
      }
      const XPComplex w = ratio / (XPComplex(XPReal(1), XPReal(0)) - ratio * sum);
      z[k] = z[k] - w;
      if (abs(w) > stop * max(XPReal(1), abs(z[k]))) converged = false;
    }
  }

  // Classify, then make conjugate pairs exact.
  const XPReal real_tol = ldexp(XPReal(1), -(bits / 2));
  std::vector<XPComplex> reals, upper, lower;
  for (auto& r : z) {
    if (abs(r.im) <= real_tol * max(XPReal(1), abs(r.re))) {
      reals.emplace_back(r.re, XPReal(0));
    } else if (r.im.sign() > 0) {
      upper.push_back(r);
    } else {
      lower.push_back(r);
    }
  }
  if (upper.size() != lower.size()) {
    throw RootFindingError("find_roots: complex roots do not pair into conjugates", 0.0);
  }
  std::vector<XPComplex> roots;
  roots.reserve(N);
  std::vector<bool> used(lower.size(), false);
  for (const auto& u : upper) {
    std::size_t best = lower.size();
    XPReal best_d(0);
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (used[j]) continue;
      const XPReal d = abs(conj(lower[j]) - u);
      if (best == lower.size() || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    used[best] = true;
    XPComplex mid((u.re + lower[best].re) / XPReal(2), (u.im - lower[best].im) / XPReal(2));
    // Newton polish.
    for (int it = 0; it < 3; ++it) {
      eval_with_derivative(monic, mid, pv, dpv);
      if (pv.re.is_zero() && pv.im.is_zero()) break;
      mid = mid - pv / dpv;
    }
    roots.push_back(mid);
    roots.push_back(conj(mid));
  }
  for (auto& r : reals) {
    for (int it = 0; it < 3; ++it) {
      eval_with_derivative(monic, r, pv, dpv);
      if (pv.re.is_zero()) break;
      r = XPComplex(r.re - pv.re / dpv.re, XPReal(0));
    }
    roots.push_back(r);
  }

  // |p(r)| <= 2^-(bits/2) max|a| max(1,|r|)^N for every root.
  const XPReal amax = max_abs(p.a);
  for (const auto& r : roots) {
    const XPReal resid = abs(p.eval(r));
    const XPReal bound = ldexp(amax, -(bits / 2)) * pow(max(XPReal(1), abs(r)), N);
    if (resid > bound || !resid.is_finite()) {
      throw RootFindingError("find_roots: residual " + resid.to_string(6) + " exceeds bound " + bound.to_string(6),
                             resid.to_double());
    }
  }
  std::sort(roots.begin(), roots.end(), root_less);
  return roots;
}

Factorization group_factors(const std::vector<XPComplex>& roots, int m,
                            const std::optional<std::vector<std::vector<int>>>& grouping) {
  const int M = static_cast<int>(roots.size());
  if (m < 2 || m % 2 != 0) throw FactorizationError("group_factors: factor degree must be even");
  if (M % m != 0) throw FactorizationError("group_factors: root count is not a multiple of the factor degree");

  Factorization f;
  std::vector<XPReal> reals;
  for (const auto& r : roots) {
    if (r.im.is_zero()) {
      reals.push_back(r.re);
    } else if (r.im.sign() > 0) {
      f.quadratics.push_back({norm(r), XPReal(-2) * r.re});
    }
  }
  if (reals.size() % 2 != 0) throw FactorizationError("group_factors: odd number of real roots cannot be paired");
  if (f.quadratics.size() * 2 + reals.size() != roots.size()) {
    throw FactorizationError("group_factors: non-real roots are not closed under conjugation");
  }
  std::sort(reals.begin(), reals.end());
  for (std::size_t i = 0; i < reals.size(); i += 2)
    f.quadratics.push_back({reals[i] * reals[i + 1], -(reals[i] + reals[i + 1])});
  std::stable_sort(f.quadratics.begin(), f.quadratics.end(), [](const Quadratic& a, const Quadratic& b) {
    const XPReal ma = abs(a.c0);
    const XPReal mb = abs(b.c0);
    if (ma != mb) return ma < mb;
    return a.c1 < b.c1;
  });

  const int per = m / 2;
  const int factors = M / m;
  if (grouping) {
    f.groups = *grouping;
    std::vector<int> seen(f.quadratics.size(), 0);
    if (static_cast<int>(f.groups.size()) != factors) throw FactorizationError("group_factors: wrong group count");
    for (const auto& g : f.groups) {
      if (static_cast<int>(g.size()) != per) throw FactorizationError("group_factors: wrong group size");
      for (int q : g) {
        if (q < 0 || q >= static_cast<int>(seen.size()) || seen[q]++)
          throw FactorizationError("group_factors: grouping is not a partition of the quadratics");
      }
    }
  } else {
    f.groups.assign(factors, {});
    int next = 0;
    for (int round = 0; round < per; ++round) {
      for (int g = 0; g < factors; ++g) {
        const int slot = (round % 2 == 0) ? g : factors - 1 - g;
        f.groups[slot].push_back(next++);
      }
    }
  }
  for (const auto& g : f.groups) f.rows.push_back(expand_group(f.quadratics, g));
  return f;
}

Factorization match_reference(const Factorization& f, int m, const std::vector<std::vector<double>>& reference,
                              double rel_tol) {
  const int per = m / 2;
  Factorization out;
  out.quadratics = f.quadratics;
  std::vector<bool> used(f.quadratics.size(), false);
  for (const auto& ref : reference) {
    if (static_cast<int>(ref.size()) != m + 1) throw FactorizationError("match_reference: reference row length");
    double best_err = INFINITY;
    std::vector<int> best_group;
    std::vector<int> current;
    std::function<void(int)> search = [&](int start) {
      if (static_cast<int>(current.size()) == per) {
        const auto row = expand_group(f.quadratics, current);
        double err = 0.0;
        for (int j = 0; j <= m; ++j) {
          const double d = std::abs((row[j] - XPReal(ref[j])).to_double());
          err = std::max(err, ref[j] != 0.0 ? d / std::abs(ref[j]) : d);
        }
        if (err < best_err) {
          best_err = err;
          best_group = current;
        }
        return;
      }
      for (int q = start; q < static_cast<int>(f.quadratics.size()); ++q) {
        if (used[q]) continue;
        current.push_back(q);
        search(q + 1);
        current.pop_back();
      }
    };
    search(0);
    if (best_group.empty() || !(best_err <= rel_tol)) {
      throw FactorizationError("match_reference: no grouping reproduces reference row (best relative error " +
                               std::to_string(best_err) + ")");
    }
    for (int q : best_group) used[q] = true;
    out.groups.push_back(best_group);
    out.rows.push_back(expand_group(f.quadratics, best_group));
  }
  return out;
}

std::optional<std::vector<std::vector<double>>> published_factor_rows(int M, double theta) {
  if (M != 16 || theta != 1.5) return std::nullopt;
  return std::vector<std::vector<double>>{
      {3599.994262347704951, 862.0738730089864644, -14.86233950714664427, -4.881331340410683266, 1.0},
      {1693.461215815646064, 430.8068649851425321, 77.58934041908401266, 7.763092503482958289, 1.0},
      {1478.920917621023984, 387.7896702475912482, 98.78409444643527097, 9.794888991082968084, 1.0},
      {2237.981769593417334, 545.9089563171489062, 37.31797993128430013, 3.323349845844756893, 1.0},
  };
}

double default_eps_target(int M, double theta) { return (M == 64 && theta == 12.0) ? 0x1p-112 : 0x1p-52; }

XPReal XPParamTable::eval(const XPReal& x) const {
  XPReal acc = alpha;
  for (const auto& row : c) {
    XPReal f = row.back();
    for (std::size_t j = row.size() - 1; j-- > 0;) f = f * x + row[j];
    acc *= f;
  }
  return acc;
}

ParamTable to_double(const XPParamTable& t) {
  ParamTable d;
  d.M = t.M;
  d.m = t.m;
  d.m_prime = t.m_prime;
  d.theta = t.theta.to_double();
  d.eps_target = t.eps_target;
  d.alpha = t.alpha.to_double();
  d.precision_bits = t.precision_bits;
  for (const auto& row : t.c) {
    std::vector<double> r;
    r.reserve(row.size());
    for (const auto& v : row) r.push_back(v.to_double());
    d.c.push_back(std::move(r));
  }
  return d;
}

XPParamTable generate_table(int M, double theta, int precision_bits, std::optional<double> eps_target) {
  const int m = exact_sqrt(M);
  if (m < 2 || m % 2 != 0) throw std::invalid_argument("generate_table: M must be the square of an even integer");
  ScopedPrecision scope(precision_bits);

  const MonomialPoly poly = derive_monomial(M, theta, precision_bits);
  const std::vector<XPComplex> roots = find_roots(poly);
  Factorization f = group_factors(roots, m);
  if (auto ref = published_factor_rows(M, theta)) f = match_reference(f, m, *ref);

  XPParamTable t;
  t.M = M;
  t.m = m;
  t.m_prime = M / m;
  t.theta = XPReal(theta);
  t.eps_target = eps_target.value_or(default_eps_target(M, theta));
  t.alpha = poly.leading();
  t.c = std::move(f.rows);
  t.precision_bits = precision_bits;
  t.groups = std::move(f.groups);
  return t;
}

}  // namespace polyexpm
