#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ebdl/algebra/fq.hpp"

namespace ebdl {

// Dense univariate polynomial over a field F; c[i] is the coefficient of X^i
// and the top coefficient is nonzero (zero polynomial = empty vector, deg -1).
template <class F>
struct Poly {
  using Elem = typename F::Elem;
  const F* field = nullptr;
  std::vector<Elem> c;

  Poly() = default;
  explicit Poly(const F& f) : field(&f) {}
  Poly(const F& f, std::vector<Elem> coeffs) : field(&f), c(std::move(coeffs)) { trim(); }

  static Poly constant(const F& f, const Elem& a) { return Poly(f, std::vector<Elem>{a}); }
  static Poly monomial(const F& f, const Elem& a, int n) {
    std::vector<Elem> v(n + 1, f.zero());
    v[n] = a;
    return Poly(f, std::move(v));
  }
  static Poly x(const F& f) { return monomial(f, f.one(), 1); }
  // X - a
  static Poly linear(const F& f, const Elem& a) { return Poly(f, {f.neg(a), f.one()}); }

  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool is_one() const { return c.size() == 1 && field->eq(c[0], field->one()); }
  const Elem& lead() const { return c.back(); }
  Elem coef(int i) const { return i >= 0 && i < static_cast<int>(c.size()) ? c[i] : field->zero(); }
  bool is_monic() const { return !c.empty() && field->eq(c.back(), field->one()); }

  void trim() {
    while (!c.empty() && field->is_zero(c.back())) c.pop_back();
  }

  bool operator==(const Poly& o) const {
    if (c.size() != o.c.size()) return false;
    for (size_t i = 0; i < c.size(); ++i)
      if (!field->eq(c[i], o.c[i])) return false;
    return true;
  }
  bool operator!=(const Poly& o) const { return !(*this == o); }
};

// Order by degree, then coefficients from the constant term upward.
template <class F>
bool poly_less(const Poly<F>& a, const Poly<F>& b) {
  if (a.deg() != b.deg()) return a.deg() < b.deg();
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.field->less(a.c[i], b.c[i])) return true;
    if (a.field->less(b.c[i], a.c[i])) return false;
  }
  return false;
}

template <class F>
Poly<F> operator+(const Poly<F>& a, const Poly<F>& b) {
  const F& f = *(a.field ? a.field : b.field);
  std::vector<typename F::Elem> r(std::max(a.c.size(), b.c.size()), f.zero());
  for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r[i] = f.add(r[i], b.c[i]);
  return Poly<F>(f, std::move(r));
}

template <class F>
Poly<F> operator-(const Poly<F>& a) {
  Poly<F> r = a;
  for (auto& x : r.c) x = a.field->neg(x);
  return r;
}

template <class F>
Poly<F> operator-(const Poly<F>& a, const Poly<F>& b) {
  const F& f = *(a.field ? a.field : b.field);
  std::vector<typename F::Elem> r(std::max(a.c.size(), b.c.size()), f.zero());
  for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r[i] = f.sub(r[i], b.c[i]);
  return Poly<F>(f, std::move(r));
}

template <class F>
Poly<F> operator*(const Poly<F>& a, const Poly<F>& b) {
  const F& f = *(a.field ? a.field : b.field);
  if (a.is_zero() || b.is_zero()) return Poly<F>(f);
  std::vector<typename F::Elem> r(a.c.size() + b.c.size() - 1, f.zero());
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (f.is_zero(a.c[i])) continue;
    for (size_t j = 0; j < b.c.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a.c[i], b.c[j]));
  }
  return Poly<F>(f, std::move(r));
}

template <class F>
Poly<F> scale(const Poly<F>& a, const typename F::Elem& s) {
  Poly<F> r = a;
  for (auto& x : r.c) x = a.field->mul(x, s);
  r.trim();
  return r;
}

template <class F>
Poly<F> shift_up(const Poly<F>& a, int n) {
  if (a.is_zero()) return a;
  Poly<F> r(*a.field);
  r.c.assign(n, a.field->zero());
  r.c.insert(r.c.end(), a.c.begin(), a.c.end());
  return r;
}

template <class F>
Poly<F> monic(const Poly<F>& a) {
  if (a.is_zero() || a.is_monic()) return a;
  return scale(a, a.field->inv(a.lead()));
}

// a = q*b + r with deg r < deg b.
template <class F>
std::pair<Poly<F>, Poly<F>> divmod(const Poly<F>& a, const Poly<F>& b) {
  const F& f = *b.field;
  if (b.is_zero()) throw Error(Errc::ZeroPolynomial, "division by zero polynomial");
  if (a.deg() < b.deg()) return {Poly<F>(f), a};
  std::vector<typename F::Elem> r = a.c;
  std::vector<typename F::Elem> qv(a.c.size() - b.c.size() + 1, f.zero());
  auto li = f.inv(b.lead());
  const bool unit = f.eq(li, f.one());
  const int db = b.deg();
  for (int i = a.deg(); i >= db; --i) {
    if (f.is_zero(r[i])) continue;
    auto t = unit ? r[i] : f.mul(r[i], li);
    qv[i - db] = t;
    for (int j = 0; j < db; ++j) r[i - db + j] = f.sub(r[i - db + j], f.mul(t, b.c[j]));
    r[i] = f.zero();
  }
  r.resize(db);
  return {Poly<F>(f, std::move(qv)), Poly<F>(f, std::move(r))};
}

template <class F>
Poly<F> operator%(const Poly<F>& a, const Poly<F>& b) {
  if (a.deg() < b.deg()) return a;
  return divmod(a, b).second;
}

template <class F>
Poly<F> operator/(const Poly<F>& a, const Poly<F>& b) {
  return divmod(a, b).first;
}

// Exact division; throws if b does not divide a.
template <class F>
Poly<F> div_exact(const Poly<F>& a, const Poly<F>& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw Error(Errc::ZeroPolynomial, "inexact polynomial division");
  return q;
}

template <class F>
Poly<F> mulmod(const Poly<F>& a, const Poly<F>& b, const Poly<F>& m) {
  return (a * b) % m;
}

// Monic gcd; gcd(0, 0) = 0.
template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
  while (!b.is_zero()) {
    a = a % b;
    std::swap(a, b);
  }
  return monic(a);
}

// Returns (g, s, t) with s*a + t*b = g monic.
template <class F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> xgcd(const Poly<F>& a, const Poly<F>& b) {
  const F& f = *(a.field ? a.field : b.field);
  Poly<F> r0 = a, r1 = b, s0 = Poly<F>::constant(f, f.one()), s1(f), t0(f), t1 = Poly<F>::constant(f, f.one());
  while (!r1.is_zero()) {
    auto [qt, r2] = divmod(r0, r1);
    Poly<F> s2 = s0 - qt * s1, t2 = t0 - qt * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  auto li = f.inv(r0.lead());
  return {scale(r0, li), scale(s0, li), scale(t0, li)};
}

template <class F>
Poly<F> powmod(Poly<F> base, u128 e, const Poly<F>& m) {
  const F& f = *m.field;
  Poly<F> r = Poly<F>::constant(f, f.one()) % m;
  base = base % m;
  while (e) {
    if (e & 1) r = mulmod(r, base, m);
    e >>= 1;
    if (e) base = mulmod(base, base, m);
  }
  return r;
}

template <class F>
Poly<F> derivative(const Poly<F>& a) {
  const F& f = *a.field;
  if (a.deg() <= 0) return Poly<F>(f);
  std::vector<typename F::Elem> r(a.c.size() - 1, f.zero());
  for (size_t i = 1; i < a.c.size(); ++i) {
    r[i - 1] = f.mul(f.from_int(static_cast<i64>(i)), a.c[i]);
  }
  return Poly<F>(f, std::move(r));
}

template <class F>
typename F::Elem eval(const Poly<F>& a, const typename F::Elem& x) {
  const F& f = *a.field;
  auto r = f.zero();
  for (size_t i = a.c.size(); i-- > 0;) r = f.add(f.mul(r, x), a.c[i]);
  return r;
}

// g(h) mod m by Horner.
template <class F>
Poly<F> compose_mod(const Poly<F>& g, const Poly<F>& h, const Poly<F>& m) {
  const F& f = *m.field;
  Poly<F> r(f);
  for (size_t i = g.c.size(); i-- > 0;) r = (mulmod(r, h, m) + Poly<F>::constant(f, g.c[i])) % m;
  return r;
}

template <class F>
Poly<F> poly_pow(const Poly<F>& a, unsigned e) {
  Poly<F> r = Poly<F>::constant(*a.field, a.field->one());
  for (unsigned i = 0; i < e; ++i) r = r * a;
  return r;
}

// Canonical text: coefficients low degree first separated by '/', each in
// the field's element encoding. The zero polynomial encodes as "".
template <class F>
std::string encode_poly(const Poly<F>& a) {
  std::string s;
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (i) s += '/';
    s += a.field->encode(a.c[i]);
  }
  return s;
}

template <class F>
Poly<F> decode_poly(const F& f, const std::string& s) {
  std::vector<typename F::Elem> v;
  if (!s.empty()) {
    size_t start = 0;
    for (;;) {
      size_t pos = s.find('/', start);
      v.push_back(f.decode(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  return Poly<F>(f, std::move(v));
}

}  // namespace ebdl
