#pragma once

// Legendre-spectral solver for the first-order initial value problem
//
//     dF/dt + p F = q,   t1 <= t <= t2,   F(t1) given,
//
// with constant p and q. On the reference element tau in [-1, 1] the
// solution is expanded as F(tau) = sum_mu s_mu(tau) B_mu + F(-1), where
// s_mu is the integral of the Legendre polynomial P_mu from -1. Projecting
// onto P_nu gives a tridiagonal system Omega B = Gamma; the value at the
// right end of the element is 2 B_0 + F(-1).
//
// Everything here is templated on the scalar so coefficient generation can
// run the same code in extended precision.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "polyexpm/small_solve.hpp"

namespace polyexpm::spectral {

/// Legendre polynomial P_n(tau) by the three-term recurrence.
template <class T>
T legendre(int n, const T& tau) {
  if (n < 0) throw std::invalid_argument("legendre: negative degree");
  if (n == 0) return T(1);
  T prev(1);
  T cur = tau;
  for (int k = 1; k < n; ++k) {
    T next = (T(2 * k + 1) * tau * cur - T(k) * prev) / T(k + 1);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// s_mu(tau) = integral of P_mu from -1 to tau, via the s-recurrence
///   s_mu = [(2mu - 1) tau s_{mu-1} - (mu - 2) s_{mu-2}] / (mu + 1),
/// seeded with s_0 = 1 + tau and s_1 = (tau^2 - 1)/2.
template <class T>
T s_eval(int mu, const T& tau) {
  if (mu < 0) throw std::invalid_argument("s_eval: negative index");
  T s0 = T(1) + tau;
  if (mu == 0) return s0;
  T s1 = (tau * tau - T(1)) / T(2);
  for (int k = 2; k <= mu; ++k) {
    T next = (T(2 * k - 1) * tau * s1 - T(k - 2) * s0) / T(k + 1);
    s0 = std::move(s1);
    s1 = std::move(next);
  }
  return s1;
}

/// s_mu via the difference form (P_{mu+1} - P_{mu-1}) / (2 mu + 1), mu >= 1.
template <class T>
T s_eval_difference(int mu, const T& tau) {
  if (mu < 1) throw std::invalid_argument("s_eval_difference: requires mu >= 1");
  return (legendre(mu + 1, tau) - legendre(mu - 1, tau)) / T(2 * mu + 1);
}

/// Monomial coefficients (ascending powers of tau) of s_0 .. s_{count-1},
/// generated with the same recurrence as s_eval.
template <class T>
std::vector<std::vector<T>> s_monomials(int count) {
  std::vector<std::vector<T>> out;
  if (count <= 0) return out;
  out.push_back({T(1), T(1)});
  if (count == 1) return out;
  out.push_back({T(-1) / T(2), T(0), T(1) / T(2)});
  for (int mu = 2; mu < count; ++mu) {
    std::vector<T> next(mu + 2, T(0));
    const auto& a = out[mu - 1];
    const auto& b = out[mu - 2];
    const T ka(2 * mu - 1);
    const T kb(mu - 2);
    for (std::size_t i = 0; i < a.size(); ++i) next[i + 1] += ka * a[i];
    for (std::size_t i = 0; i < b.size(); ++i) next[i] -= kb * b[i];
    for (auto& c : next) c /= T(mu + 1);
    out.push_back(std::move(next));
  }
  return out;
}

/// integral_{-1}^{1} P_nu P_mu dtau.
template <class T>
T legendre_gram(int nu, int mu) {
  return nu == mu ? T(2) / T(2 * nu + 1) : T(0);
}

/// integral_{-1}^{1} P_nu s_mu dtau, from s_0 = P_0 + P_1 and the
/// difference form for mu >= 1.
template <class T>
T legendre_s_integral(int nu, int mu) {
  if (mu == 0) {
    if (nu == 0) return T(2);
    if (nu == 1) return T(2) / T(3);
    return T(0);
  }
  if (nu == mu + 1) return T(2) / (T(2 * nu + 1) * T(2 * mu + 1));
  if (nu == mu - 1) return T(-2) / (T(2 * nu + 1) * T(2 * mu + 1));
  return T(0);
}

template <class T>
struct Problem {
  T p_const;
  T q_const;
  T t1;
  T t2;
  T f_init;
  int basis_count;  // M

  void validate() const {
    if (!(t2 > t1)) throw std::invalid_argument("spectral::Problem: requires t2 > t1");
    if (basis_count < 1) throw std::invalid_argument("spectral::Problem: requires M >= 1");
  }
};

template <class T>
struct System {
  int size;
  std::vector<T> omega;  // row-major size x size
  std::vector<T> gamma;

  const T& at(int nu, int mu) const { return omega[static_cast<std::size_t>(nu) * size + mu]; }
};

template <class T>
struct Solution {
  std::vector<T> B;
  T f_init;

  /// F(+1) = 2 B_0 + F(-1).
  T endpoint() const { return T(2) * B.front() + f_init; }

  /// F(tau) = sum_mu s_mu(tau) B_mu + F(-1).
  T evaluate(const T& tau) const {
    T acc = f_init;
    for (std::size_t mu = 0; mu < B.size(); ++mu) acc += s_eval(static_cast<int>(mu), tau) * B[mu];
    return acc;
  }
};

template <class T>
System<T> assemble_system(const Problem<T>& prob) {
  prob.validate();
  const int M = prob.basis_count;
  System<T> sys{M, std::vector<T>(static_cast<std::size_t>(M) * M, T(0)), std::vector<T>(M, T(0))};
  const T deriv_scale = T(2) / (prob.t2 - prob.t1);
  for (int nu = 0; nu < M; ++nu) {
    // Omega is tridiagonal for constant p.
    for (int mu = std::max(0, nu - 1); mu <= std::min(M - 1, nu + 1); ++mu) {
      sys.omega[static_cast<std::size_t>(nu) * M + mu] =
          deriv_scale * legendre_gram<T>(nu, mu) + prob.p_const * legendre_s_integral<T>(nu, mu);
    }
  }
  sys.gamma[0] = T(2) * (prob.q_const - prob.p_const * prob.f_init);
  return sys;
}

template <class T>
Solution<T> solve_element(const Problem<T>& prob) {
  System<T> sys = assemble_system(prob);
  return {solve_dense(std::move(sys.omega), std::move(sys.gamma)), prob.f_init};
}

/// Chains `elements` uniform elements over [0, t_end] starting from F(0) = 1,
/// feeding each element's endpoint value into the next. Returns F(t_end).
template <class T>
T propagate_elements(const T& p, int elements, int basis_count, const T& t_end) {
  if (elements < 1) throw std::invalid_argument("propagate_elements: requires k >= 1");
  T f(1);
  for (int e = 0; e < elements; ++e) {
    const T t1 = t_end * T(e) / T(elements);
    const T t2 = t_end * T(e + 1) / T(elements);
    f = solve_element(Problem<T>{p, T(0), t1, t2, f, basis_count}).endpoint();
  }
  return f;
}

}  // namespace polyexpm::spectral
