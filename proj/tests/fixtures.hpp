#pragma once

#include "ebdl/curve/model.hpp"

namespace fixtures {

using namespace ebdl;

// y^2 = x^3 + x + 1 over F_5 (order 9) with P1 = (0, 1).
struct SmallCurve {
  FqPtr f = field_make(5, 1, 0);
  Curve c = make_curve(f, 1, 1);
  TorsionData td = make_torsion(c, FqPoint::affine(0, 1), 9);
};

// Random affine point over an extension, avoiding a given list of x-values.
inline ExtPoint random_ext_point(const Curve& c, const Ext& e, Rng& rng) {
  auto E = c.ops_over(e);
  for (;;) {
    auto x = e.random(rng);
    ExtElem y;
    if (!field_sqrt(e, E.rhs(x), y, rng)) continue;
    if (rng() & 1) y = e.neg(y);
    return ExtPoint::affine(x, y);
  }
}

// All affine points over a small extension field.
inline std::vector<ExtPoint> ext_points(const Curve& c, const Ext& e, Rng& rng) {
  auto E = c.ops_over(e);
  std::vector<ExtPoint> out;
  for (u64 i = 0; i < static_cast<u64>(e.order()); ++i) {
    auto x = e.from_index(i);
    ExtElem y;
    if (!field_sqrt(e, E.rhs(x), y, rng)) continue;
    out.push_back(ExtPoint::affine(x, y));
    if (!e.is_zero(y)) out.push_back(ExtPoint::affine(x, e.neg(y)));
  }
  return out;
}

}  // namespace fixtures
