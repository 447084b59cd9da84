#pragma once

#include "ebdl/algebra/factor.hpp"
#include "ebdl/divisor/function.hpp"
#include "ebdl/divisor/place.hpp"

namespace ebdl {

// Order of a nonzero polynomial at infinity is -deg; -inf for zero.
inline i64 o_valuation(const Curve& c, const CurveFunction& g) {
  (void)c;
  i64 a = g.n0.is_zero() ? INT64_MIN / 4 : 2 * g.n0.deg();
  i64 b = g.n1.is_zero() ? INT64_MIN / 4 : 3 + 2 * g.n1.deg();
  return -std::max(a, b) + 2 * g.e;
}

// Zeros of n0 + n1 Y at the split pair over u, with total multiplicity m.
// Returns the valuation at (u, v).
inline i64 split_valuation(FqPoly a0, FqPoly a1, const FqPoly& u, const FqPoly& v, i64 m) {
  i64 val = 0;
  for (;;) {
    FqPoly plus = (a0 + mulmod(a1, v, u)) % u;
    if (!plus.is_zero()) return val;
    FqPoly minus = (a0 - mulmod(a1, v, u)) % u;
    if (!minus.is_zero()) return m - val;
    // u divides a0 and a1 since v is a unit mod u
    a0 = div_exact(a0, u);
    a1 = div_exact(a1, u);
    ++val;
  }
}

inline Divisor divisor_of(const Curve& c, const CurveFunction& g0) {
  if (g0.is_zero()) throw Error(Errc::ZeroFunction, "divisor of the zero function");
  const Fq& f = *c.field;
  CurveFunction g = fn::normalize(g0);
  if (!g.n0.field) g.n0.field = &f;
  if (!g.n1.field) g.n1.field = &f;
  Divisor d;
  FqPoly norm = fn::numerator_norm(c, g);
  for (auto& [u, m] : poly_factor(norm, 0)) {
    auto places = places_over(c, u);
    const Place& pl = places.front();
    if (pl.kind == PlaceKind::Ramified) {
      d.add(pl, m);
    } else if (pl.kind == PlaceKind::Inert) {
      if (m % 2) throw std::logic_error("odd norm valuation at an inert place");
      d.add(pl, m / 2);
    } else {
      for (auto& p : places) d.add(p, split_valuation(g.n0, g.n1, u, p.vpoly(f), m));
    }
  }
  if (g.e > 0) {
    u32 rhs = f.add(f.mul(f.mul(g.x1, g.x1), g.x1), f.add(f.mul(c.a, g.x1), c.b));
    u32 y;
    if (!f.sqrt(rhs, y)) throw std::logic_error("x1 is not the abscissa of a rational point");
    if (y == 0) {
      // (X - x1) has a double zero at a ramified point
      d.add(point_place(f, FqPoint::affine(g.x1, 0)), -2 * g.e);
    } else {
      d.add(point_place(f, FqPoint::affine(g.x1, y)), -g.e);
      d.add(point_place(f, FqPoint::affine(g.x1, f.neg(y))), -g.e);
    }
  }
  i64 vo = -d.degree();
  if (vo != o_valuation(c, g)) throw std::logic_error("valuation at O does not balance");
  d.add(infinity_place(), vo);
  return d;
}

}  // namespace ebdl
