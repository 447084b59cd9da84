#pragma once

#include "ebdl/curve/curve.hpp"

namespace ebdl {

// (n0(X) + n1(X) Y) / (X - x1)^e on y^2 = x^3 + a x + b.
struct CurveFunction {
  FqPoly n0, n1;
  int e = 0;
  u32 x1 = 0;

  bool is_zero() const { return n0.is_zero() && n1.is_zero(); }
};

namespace fn {

inline FqPoly lin(const Fq& f, u32 x1) { return FqPoly::linear(f, x1); }

// Cancels common factors (X - x1) against the denominator.
inline CurveFunction normalize(CurveFunction g) {
  if (g.is_zero()) {
    g.e = 0;
    return g;
  }
  const Fq& f = *(g.n0.field ? g.n0.field : g.n1.field);
  FqPoly l = lin(f, g.x1);
  while (g.e > 0) {
    auto [q0, r0] = divmod(g.n0, l);
    auto [q1, r1] = divmod(g.n1, l);
    if (!r0.is_zero() || !r1.is_zero()) break;
    g.n0 = q0;
    g.n1 = q1;
    --g.e;
  }
  return g;
}

inline CurveFunction make(const FqPoly& n0, const FqPoly& n1, int e, u32 x1) {
  CurveFunction g{n0, n1, e, x1};
  if (!g.n0.field) g.n0.field = g.n1.field;
  if (!g.n1.field) g.n1.field = g.n0.field;
  return normalize(g);
}

inline CurveFunction constant(const Fq& f, u32 c, u32 x1) { return make(FqPoly::constant(f, c), FqPoly(f), 0, x1); }
inline CurveFunction from_x_poly(const FqPoly& p, u32 x1) { return make(p, FqPoly(*p.field), 0, x1); }

// Raises both to a common denominator exponent.
inline std::pair<CurveFunction, CurveFunction> align(const CurveFunction& a, const CurveFunction& b) {
  const Fq& f = *a.n0.field;
  int e = std::max(a.e, b.e);
  auto lift = [&](const CurveFunction& g) {
    FqPoly m = poly_pow(lin(f, g.x1), e - g.e);
    return CurveFunction{g.n0 * m, g.n1 * m, e, g.x1};
  };
  return {lift(a), lift(b)};
}

inline CurveFunction add(const CurveFunction& a, const CurveFunction& b) {
  auto [x, y] = align(a, b);
  return make(x.n0 + y.n0, x.n1 + y.n1, x.e, x.x1);
}
inline CurveFunction sub(const CurveFunction& a, const CurveFunction& b) {
  auto [x, y] = align(a, b);
  return make(x.n0 - y.n0, x.n1 - y.n1, x.e, x.x1);
}
inline CurveFunction scale(const CurveFunction& a, u32 s) {
  return make(ebdl::scale(a.n0, s), ebdl::scale(a.n1, s), a.e, a.x1);
}

// (a0 + a1 Y)(b0 + b1 Y) with Y^2 = rhs.
inline CurveFunction mul(const Curve& c, const CurveFunction& a, const CurveFunction& b) {
  FqPoly r = c.rhs_poly();
  return make(a.n0 * b.n0 + a.n1 * b.n1 * r, a.n0 * b.n1 + a.n1 * b.n0, a.e + b.e, a.x1);
}

inline CurveFunction pow(const Curve& c, const CurveFunction& a, unsigned n) {
  CurveFunction r = constant(*c.field, 1, a.x1);
  for (unsigned i = 0; i < n; ++i) r = mul(c, r, a);
  return r;
}

// n0^2 - n1^2 (x^3 + a x + b): the norm of the numerator.
inline FqPoly numerator_norm(const Curve& c, const CurveFunction& g) {
  return g.n0 * g.n0 - g.n1 * g.n1 * c.rhs_poly();
}

// Value at an affine point over F (F_q or an extension); throws SupportHitsF
// when the point is on the denominator.
template <class F>
typename F::Elem eval(const F& fl, const CurveFunction& g, const Point<F>& P) {
  if (P.inf) throw Error(Errc::MapsToInfinity, "cannot evaluate at O");
  auto embed_poly = [&](const FqPoly& p) {
    auto r = fl.zero();
    for (size_t i = p.c.size(); i-- > 0;) r = fl.add(fl.mul(r, P.x), embed_base(fl, p.c[i]));
    return r;
  };
  auto num = fl.add(embed_poly(g.n0), fl.mul(embed_poly(g.n1), P.y));
  if (g.e == 0) return num;
  auto d = fl.sub(P.x, embed_base(fl, g.x1));
  if (fl.is_zero(d)) throw Error(Errc::SupportHitsF, "point lies on the denominator");
  auto den = fl.one();
  for (int i = 0; i < g.e; ++i) den = fl.mul(den, d);
  return fl.div(num, den);
}

inline bool equal(const CurveFunction& a, const CurveFunction& b) {
  auto x = normalize(a), y = normalize(b);
  return x.e == y.e && x.n0 == y.n0 && x.n1 == y.n1;
}

}  // namespace fn
}  // namespace ebdl
