#pragma once

#include <algorithm>
#include <vector>

#include "ebdl/algebra/poly.hpp"

namespace ebdl {

template <class F>
typename F::Elem field_pow(const F& f, typename F::Elem a, u128 e) {
  auto r = f.one();
  while (e) {
    if (e & 1) r = f.mul(r, a);
    e >>= 1;
    if (e) a = f.mul(a, a);
  }
  return r;
}

// a^(1/p) in a finite field of order Q = p^n.
template <class F>
typename F::Elem field_pth_root(const F& f, const typename F::Elem& a) {
  return field_pow(f, a, f.order() / f.characteristic());
}

// X^(Q^i) mod f for i = 0..n, where Q is the field order.
template <class F>
std::vector<Poly<F>> frobenius_powers(const Poly<F>& f, int n) {
  const F& fl = *f.field;
  std::vector<Poly<F>> out;
  out.push_back(Poly<F>::x(fl) % f);
  if (n >= 1) out.push_back(powmod(Poly<F>::x(fl), fl.order(), f));
  for (int i = 2; i <= n; ++i) out.push_back(compose_mod(out.back(), out[1], f));
  return out;
}

// Rabin's irreducibility test.
template <class F>
bool is_irreducible(const Poly<F>& f) {
  const int n = f.deg();
  if (n <= 0) return false;
  if (n == 1) return true;
  auto fm = monic(f);
  auto pw = frobenius_powers(fm, n);
  const Poly<F> x = Poly<F>::x(*f.field);
  if (pw[n] != x % fm) return false;
  for (u64 r : prime_divisors(static_cast<u64>(n))) {
    auto g = gcd(fm, pw[n / r] - x);
    if (g.deg() != 0) return false;
  }
  return true;
}

// Squarefree decomposition of a nonzero polynomial: monic coprime factors
// with multiplicities, product = monic(f).
template <class F>
std::vector<std::pair<Poly<F>, int>> squarefree_decomposition(const Poly<F>& f0) {
  const F& fl = *f0.field;
  if (f0.is_zero()) throw Error(Errc::ZeroPolynomial, "squarefree decomposition of zero");
  std::vector<std::pair<Poly<F>, int>> out;
  Poly<F> f = monic(f0);
  if (f.deg() == 0) return out;
  Poly<F> c = gcd(f, derivative(f));
  Poly<F> w = f / c;
  int i = 1;
  while (w.deg() > 0) {
    Poly<F> y = gcd(w, c);
    Poly<F> fac = w / y;
    if (fac.deg() > 0) out.emplace_back(monic(fac), i);
    w = y;
    c = c / y;
    ++i;
  }
  if (c.deg() > 0) {
    const u32 p = fl.characteristic();
    std::vector<typename F::Elem> r(c.deg() / p + 1, fl.zero());
    for (int j = 0; j <= c.deg(); j += static_cast<int>(p)) r[j / p] = field_pth_root(fl, c.c[j]);
    for (auto& [g, m] : squarefree_decomposition(Poly<F>(fl, std::move(r)))) out.emplace_back(g, m * static_cast<int>(p));
  }
  return out;
}

// Distinct-degree factorization of a monic squarefree polynomial.
template <class F>
std::vector<std::pair<Poly<F>, int>> distinct_degree(const Poly<F>& f) {
  const F& fl = *f.field;
  std::vector<std::pair<Poly<F>, int>> out;
  Poly<F> rest = f;
  const Poly<F> x = Poly<F>::x(fl);
  Poly<F> h = x % rest;
  for (int i = 1; rest.deg() >= 2 * i; ++i) {
    h = powmod(h, fl.order(), rest);
    Poly<F> g = gcd(rest, h - x);
    if (g.deg() > 0) {
      out.emplace_back(g, i);
      rest = rest / g;
      h = h % rest;
    }
  }
  if (rest.deg() > 0) out.emplace_back(rest, rest.deg());
  return out;
}

// Splits a monic squarefree f whose irreducible factors all have degree d.
// Odd characteristic only.
template <class F>
void equal_degree(const Poly<F>& f, int d, Rng& rng, std::vector<Poly<F>>& out) {
  const F& fl = *f.field;
  const int n = f.deg();
  if (n == d) {
    out.push_back(f);
    return;
  }
  const u128 half = (fl.order() - 1) / 2;
  const Poly<F> one = Poly<F>::constant(fl, fl.one());
  for (;;) {
    std::vector<typename F::Elem> rc(n);
    for (auto& e : rc) e = fl.random(rng);
    Poly<F> a(fl, std::move(rc));
    if (a.deg() < 1) continue;
    // a^((Q^d - 1)/2) = (a^(1 + Q + ... + Q^(d-1)))^((Q-1)/2)
    Poly<F> t = a, s = a;
    for (int i = 1; i < d; ++i) {
      t = powmod(t, fl.order(), f);
      s = mulmod(s, t, f);
    }
    Poly<F> b = powmod(s, half, f);
    Poly<F> g = gcd(f, b - one);
    if (g.deg() > 0 && g.deg() < n) {
      equal_degree(g, d, rng, out);
      equal_degree(f / g, d, rng, out);
      return;
    }
  }
}

template <class F>
void sort_factors(std::vector<std::pair<Poly<F>, int>>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return poly_less(a.first, b.first);
    return a.second < b.second;
  });
}

// Full factorization into monic irreducibles with multiplicities, sorted by
// (degree, coefficients). The leading coefficient of f is dropped.
template <class F>
std::vector<std::pair<Poly<F>, int>> poly_factor(const Poly<F>& f, Rng& rng) {
  if (f.is_zero()) throw Error(Errc::ZeroPolynomial, "cannot factor the zero polynomial");
  std::vector<std::pair<Poly<F>, int>> out;
  for (auto& [sq, mult] : squarefree_decomposition(f)) {
    for (auto& [g, d] : distinct_degree(sq)) {
      std::vector<Poly<F>> parts;
      equal_degree(g, d, rng, parts);
      for (auto& p : parts) out.emplace_back(p, mult);
    }
  }
  sort_factors(out);
  return out;
}

template <class F>
std::vector<std::pair<Poly<F>, int>> poly_factor(const Poly<F>& f, u64 seed = 0) {
  Rng rng(seed);
  return poly_factor(f, rng);
}

// Distinct roots in the coefficient field, sorted.
template <class F>
std::vector<typename F::Elem> poly_roots(const Poly<F>& f, Rng& rng) {
  const F& fl = *f.field;
  std::vector<typename F::Elem> out;
  if (f.deg() <= 0) return out;
  Poly<F> fm = monic(f);
  const Poly<F> x = Poly<F>::x(fl);
  Poly<F> g = gcd(fm, powmod(x, fl.order(), fm) - x);
  if (g.deg() <= 0) return out;
  std::vector<Poly<F>> lin;
  equal_degree(g, 1, rng, lin);
  for (auto& l : lin) out.push_back(fl.neg(l.c[0]));
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return fl.less(a, b); });
  return out;
}

// True when every irreducible factor of f has degree <= bound.
template <class F>
bool is_smooth(const Poly<F>& f, int bound) {
  const F& fl = *f.field;
  if (f.is_zero()) throw Error(Errc::ZeroPolynomial, "smoothness of zero");
  Poly<F> g = monic(f);
  const Poly<F> x = Poly<F>::x(fl);
  Poly<F> h = x % g;
  for (int i = 1; i <= bound && g.deg() > 0; ++i) {
    if (g.deg() <= bound) return true;
    h = powmod(h, fl.order(), g);
    for (;;) {
      Poly<F> d = gcd(g, h - x);
      if (d.deg() <= 0) break;
      g = g / d;
      if (g.deg() <= 0) break;
      h = h % g;
    }
  }
  return g.deg() <= bound;
}

// Uniformly random monic polynomial of exact degree n.
template <class F>
Poly<F> random_monic(const F& fl, int n, Rng& rng) {
  std::vector<typename F::Elem> c(n + 1);
  for (int i = 0; i < n; ++i) c[i] = fl.random(rng);
  c[n] = fl.one();
  return Poly<F>(fl, std::move(c));
}

// First monic irreducible of degree n in odometer order (constant term
// varying fastest).
template <class F>
Poly<F> first_irreducible(const F& fl, int n) {
  std::vector<u64> idx(n, 0);
  for (;;) {
    std::vector<typename F::Elem> c(n + 1);
    for (int i = 0; i < n; ++i) c[i] = fl.from_index(idx[i]);
    c[n] = fl.one();
    Poly<F> f(fl, std::move(c));
    if (is_irreducible(f)) return f;
    int i = 0;
    while (i < n && ++idx[i] == static_cast<u64>(fl.order())) idx[i++] = 0;
    if (i == n) throw Error(Errc::SearchExhausted, "no irreducible polynomial found");
  }
}

}  // namespace ebdl
