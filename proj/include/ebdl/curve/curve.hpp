#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ebdl/algebra/ext.hpp"

namespace ebdl {

// Base-field constants inside a field that contains F_q.
inline u32 embed_base(const Fq&, u32 a) { return a; }
inline ExtElem embed_base(const Ext& e, u32 a) { return e.embed(a); }

template <class F>
struct Point {
  using Elem = typename F::Elem;
  bool inf = true;
  Elem x{}, y{};

  static Point infinity() { return Point(); }
  static Point affine(Elem x, Elem y) {
    Point p;
    p.inf = false;
    p.x = std::move(x);
    p.y = std::move(y);
    return p;
  }
};

using FqPoint = Point<Fq>;
using ExtPoint = Point<Ext>;

// y^2 = x^3 + a x + b over a field F containing the coefficients.
template <class F>
class Weierstrass {
 public:
  using Elem = typename F::Elem;
  using Pt = Point<F>;

  Weierstrass(const F& f, Elem a, Elem b) : f_(&f), a_(std::move(a)), b_(std::move(b)) {}

  const F& field() const { return *f_; }
  const Elem& a() const { return a_; }
  const Elem& b() const { return b_; }

  Elem rhs(const Elem& x) const {
    const F& f = *f_;
    return f.add(f.mul(f.add(f.mul(x, x), a_), x), b_);
  }
  bool on_curve(const Pt& p) const { return p.inf || f_->eq(f_->mul(p.y, p.y), rhs(p.x)); }
  bool eq(const Pt& p, const Pt& q) const {
    if (p.inf || q.inf) return p.inf == q.inf;
    return f_->eq(p.x, q.x) && f_->eq(p.y, q.y);
  }
  Pt neg(const Pt& p) const { return p.inf ? p : Pt::affine(p.x, f_->neg(p.y)); }

  Pt add(const Pt& p, const Pt& q) const {
    const F& f = *f_;
    if (p.inf) return q;
    if (q.inf) return p;
    Elem lambda;
    if (f.eq(p.x, q.x)) {
      if (!f.eq(p.y, q.y) || f.is_zero(p.y)) return Pt::infinity();
      Elem x2 = f.mul(p.x, p.x);
      Elem num = f.add(f.add(f.add(x2, x2), x2), a_);
      lambda = f.div(num, f.add(p.y, p.y));
    } else {
      lambda = f.div(f.sub(q.y, p.y), f.sub(q.x, p.x));
    }
    Elem x3 = f.sub(f.sub(f.mul(lambda, lambda), p.x), q.x);
    Elem y3 = f.sub(f.mul(lambda, f.sub(p.x, x3)), p.y);
    return Pt::affine(std::move(x3), std::move(y3));
  }
  Pt sub(const Pt& p, const Pt& q) const { return add(p, neg(q)); }

  Pt mul(i64 n, const Pt& p) const {
    if (n < 0) return mul(-n, neg(p));
    return mul_u(static_cast<u128>(n), p);
  }
  Pt mul_u(u128 n, Pt p) const {
    Pt r = Pt::infinity();
    while (n) {
      if (n & 1) r = add(r, p);
      n >>= 1;
      if (n) p = add(p, p);
    }
    return r;
  }

 private:
  const F* f_;
  Elem a_, b_;
};

// Curve over F_q with its point count.
struct Curve {
  FqPtr field;
  u32 a = 0, b = 0;
  u64 N = 0;
  i64 t = 0;

  Weierstrass<Fq> ops() const { return Weierstrass<Fq>(*field, a, b); }
  // The same equation over an extension of F_q.
  Weierstrass<Ext> ops_over(const Ext& e) const { return Weierstrass<Ext>(e, e.embed(a), e.embed(b)); }
  FqPoly rhs_poly() const { return FqPoly(*field, {b, a, 0, 1}); }
  u64 q() const { return field->q(); }
};

inline bool is_singular(const Fq& f, u32 a, u32 b) {
  u32 disc = f.add(f.mul(f.from_int(4), f.mul(a, f.mul(a, a))), f.mul(f.from_int(27), f.mul(b, b)));
  return disc == 0;
}

// Character sum over all abscissas.
inline u64 count_points(const Fq& f, u32 a, u32 b) {
  if (is_singular(f, a, b)) throw Error(Errc::Singular, "4a^3 + 27b^2 = 0");
  i64 n = 1;
  for (u32 x = 0; x < f.q(); ++x) {
    u32 r = f.add(f.mul(f.add(f.mul(x, x), a), x), b);
    n += 1 + f.chi(r);
  }
  return static_cast<u64>(n);
}

inline Curve make_curve(FqPtr field, u32 a, u32 b) {
  Curve c;
  c.field = std::move(field);
  c.a = a;
  c.b = b;
  c.N = count_points(*c.field, a, b);
  c.t = static_cast<i64>(c.field->q()) + 1 - static_cast<i64>(c.N);
  return c;
}

// #E(F_{q^i}) for i = 1..D from the trace recurrence t_i = t t_{i-1} - q t_{i-2}.
inline std::vector<u64> orders_by_trace(const Curve& c, int D) {
  using i128 = __int128;
  std::vector<u64> out;
  const i128 q = static_cast<i128>(c.q());
  i128 t_prev = 2, t_cur = c.t, qi = q;
  const i128 lim = static_cast<i128>(1) << 62;
  for (int i = 1; i <= D; ++i) {
    i128 n = qi + 1 - t_cur;
    if (n <= 0 || n > lim) throw Error(Errc::Overflow, "group order exceeds 62 bits");
    out.push_back(static_cast<u64>(n));
    i128 t_next = static_cast<i128>(c.t) * t_cur - q * t_prev;
    t_prev = t_cur;
    t_cur = t_next;
    if (i < D) {
      if (qi > lim / q) throw Error(Errc::Overflow, "q^i exceeds 62 bits");
      qi *= q;
    }
  }
  return out;
}

template <class F>
bool has_exact_order(const Weierstrass<F>& E, const Point<F>& P, u64 k) {
  if (!E.mul_u(k, P).inf) return false;
  for (u64 l : prime_divisors(k))
    if (E.mul_u(k / l, P).inf) return false;
  return true;
}

inline std::vector<FqPoint> all_points(const Curve& c) {
  std::vector<FqPoint> pts{FqPoint::infinity()};
  const Fq& f = *c.field;
  for (u32 x = 0; x < f.q(); ++x) {
    u32 r = f.add(f.mul(f.add(f.mul(x, x), c.a), x), c.b);
    u32 y;
    if (!f.sqrt(r, y)) continue;
    pts.push_back(FqPoint::affine(x, y));
    if (y != 0) pts.push_back(FqPoint::affine(x, f.neg(y)));
  }
  return pts;
}

template <class R>
FqPoint random_point(const Curve& c, R& rng) {
  const Fq& f = *c.field;
  for (;;) {
    u32 x = f.random(rng);
    u32 r = f.add(f.mul(f.add(f.mul(x, x), c.a), x), c.b);
    u32 y;
    if (!f.sqrt(r, y)) continue;
    if (rng() & 1) y = f.neg(y);
    return FqPoint::affine(x, y);
  }
}

// Random R, candidate (N/k) R, exact-order test; exhaustive fallback for
// q <= 2^10.
inline std::optional<FqPoint> find_point_of_order(const Curve& c, u64 k, Rng& rng) {
  if (k == 0 || c.N % k != 0) throw Error(Errc::OrderNotDivisible, std::to_string(k) + " does not divide " + std::to_string(c.N));
  if (k == 1) return FqPoint::infinity();
  auto E = c.ops();
  for (int i = 0; i < 32; ++i) {
    FqPoint cand = E.mul_u(c.N / k, random_point(c, rng));
    if (has_exact_order(E, cand, k)) return cand;
  }
  if (c.q() <= (1u << 10)) {
    for (auto& P : all_points(c))
      if (has_exact_order(E, P, k)) return P;
    return std::nullopt;
  }
  for (int i = 0; i < 256; ++i) {
    FqPoint cand = E.mul_u(c.N / k, random_point(c, rng));
    if (has_exact_order(E, cand, k)) return cand;
  }
  return std::nullopt;
}

// P_1 of exact order k and its multiples; P[0] is O.
struct TorsionData {
  u64 k = 0;
  std::vector<FqPoint> P;

  const FqPoint& P1() const { return P[1]; }
  u32 x(u64 j) const { return P[j % k].x; }
  u32 y(u64 j) const { return P[j % k].y; }
  FqPoint at(i64 j) const {
    i64 r = j % static_cast<i64>(k);
    if (r < 0) r += static_cast<i64>(k);
    return P[r];
  }
};

inline TorsionData make_torsion(const Curve& c, const FqPoint& P1, u64 k) {
  auto E = c.ops();
  if (!E.on_curve(P1) || !has_exact_order(E, P1, k)) throw Error(Errc::OrderNotDivisible, "P_1 does not have exact order k");
  TorsionData td;
  td.k = k;
  td.P.push_back(FqPoint::infinity());
  for (u64 j = 1; j < k; ++j) td.P.push_back(E.add(td.P.back(), P1));
  return td;
}

// S_3 = 4 s1 (s3 + b) - (s2 - a)^2 in elementary symmetric functions.
template <class F>
typename F::Elem semaev3(const F& f, const typename F::Elem& x1, const typename F::Elem& x2, const typename F::Elem& x3,
                         const typename F::Elem& a, const typename F::Elem& b) {
  auto s1 = f.add(f.add(x1, x2), x3);
  auto s2 = f.add(f.add(f.mul(x1, x2), f.mul(x1, x3)), f.mul(x2, x3));
  auto s3 = f.mul(f.mul(x1, x2), x3);
  auto lhs = f.mul(f.from_int(4), f.mul(s1, f.add(s3, b)));
  auto d = f.sub(s2, a);
  return f.sub(lhs, f.mul(d, d));
}

inline u32 semaev3(u32 x1, u32 x2, u32 x3, const Curve& c) { return semaev3(*c.field, x1, x2, x3, c.a, c.b); }

// Curve descriptor: p,m,modulus-digits|a|b|N|k|P1.x|P1.y
inline std::string encode_curve(const Curve& c, const TorsionData& td) {
  const Fq& f = *c.field;
  std::string s = std::to_string(f.p()) + "," + std::to_string(f.m());
  for (u32 d : f.modulus()) s += "," + std::to_string(d);
  s += "|" + f.encode(c.a) + "|" + f.encode(c.b) + "|" + std::to_string(c.N) + "|" + std::to_string(td.k) + "|" +
       f.encode(td.P1().x) + "|" + f.encode(td.P1().y);
  return s;
}

inline std::vector<std::string> split_string(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::pair<Curve, TorsionData> decode_curve(const std::string& text) {
  std::string s = text;
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
  auto parts = split_string(s, '|');
  if (parts.size() != 7) throw Error(Errc::Parse, "curve descriptor needs 7 '|' fields");
  auto head = split_string(parts[0], ',');
  if (head.size() < 4) throw Error(Errc::Parse, "bad field header");
  u32 p = static_cast<u32>(std::stoul(head[0])), m = static_cast<u32>(std::stoul(head[1]));
  if (head.size() != m + 3) throw Error(Errc::Parse, "modulus digit count mismatch");
  std::vector<u32> mod;
  for (size_t i = 2; i < head.size(); ++i) mod.push_back(static_cast<u32>(std::stoul(head[i])));
  auto field = std::make_shared<const Fq>(p, mod);
  Curve c = make_curve(field, field->decode(parts[1]), field->decode(parts[2]));
  if (std::to_string(c.N) != parts[3]) throw Error(Errc::Parse, "recorded N disagrees with point count");
  u64 k = std::stoull(parts[4]);
  FqPoint P1 = FqPoint::affine(field->decode(parts[5]), field->decode(parts[6]));
  return {c, make_torsion(c, P1, k)};
}

}  // namespace ebdl
