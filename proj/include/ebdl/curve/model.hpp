#pragma once

#include <array>

#include "ebdl/curve/tripoly.hpp"
#include "ebdl/divisor/function.hpp"

namespace ebdl {

// Q -> (x_{Q-P1}, x_Q, x_{Q+P1}) for Q not in {O, P1, -P1}.
template <class F>
std::array<typename F::Elem, 3> phi(const Weierstrass<F>& E, const Point<F>& Q, const Point<F>& P1) {
  if (Q.inf) throw Error(Errc::MapsToInfinity, "Phi(O) lies at infinity");
  Point<F> m = E.sub(Q, P1), p = E.add(Q, P1);
  if (m.inf || p.inf) throw Error(Errc::MapsToInfinity, "Phi(+-P1) lies at infinity");
  return {m.x, Q.x, p.x};
}

inline FqPoint embed_point(const Fq&, const FqPoint& P) { return P; }
inline ExtPoint embed_point(const Ext& e, const FqPoint& P) {
  return P.inf ? ExtPoint::infinity() : ExtPoint::affine(e.embed(P.x), e.embed(P.y));
}

// Pullbacks of U, V, W and the model equations.
class Model {
 public:
  Model(const Curve& c, const TorsionData& td) : c_(c), td_(td) {
    const Fq& f = *c.field;
    u32 x1 = td.x(1), y1 = td.y(1);
    FqPoly n0(f, {f.add(f.mul(c.a, x1), f.add(c.b, c.b)), f.add(c.a, f.mul(x1, x1)), x1});
    u32 twoy = f.add(y1, y1);
    pu_ = CurveFunction{n0, FqPoly::constant(f, twoy), 2, x1};
    pw_ = CurveFunction{n0, FqPoly::constant(f, f.neg(twoy)), 2, x1};
    pv_ = fn::from_x_poly(FqPoly::x(f), x1);
    s_uv_ = semaev3_tri(c, 0, 1, x1);
    s_vw_ = semaev3_tri(c, 1, 2, x1);
    s_delta_ = (s_uv_ - s_vw_).div_u_minus_w();
    s_uw_ = semaev3_tri(c, 0, 2, td.x(2));
  }

  const Curve& curve() const { return c_; }
  const TorsionData& torsion() const { return td_; }
  const CurveFunction& pull_u() const { return pu_; }
  const CurveFunction& pull_v() const { return pv_; }
  const CurveFunction& pull_w() const { return pw_; }
  const TriPoly& s_delta() const { return s_delta_; }

  // Phi^* of a polynomial in U, V, W.
  CurveFunction phi_star(const TriPoly& g) const {
    const Fq& f = *c_.field;
    u32 x1 = td_.x(1);
    if (g.is_zero()) return fn::constant(f, 0, x1);
    // Numerators of U^i, W^l in F_q[X][Y]/(Y^2 - rhs); denominators (X-x1)^(2i), (X-x1)^(2l).
    int mu = 0, mv = 0, mw = 0, emax = 0;
    for (auto& [e, cf] : g.terms()) {
      mu = std::max(mu, e[0]);
      mv = std::max(mv, e[1]);
      mw = std::max(mw, e[2]);
      emax = std::max(emax, 2 * (e[0] + e[2]));
    }
    auto numer = [&](const CurveFunction& h) { return CurveFunction{h.n0, h.n1, 0, x1}; };
    std::vector<CurveFunction> upow{fn::constant(f, 1, x1)}, wpow{fn::constant(f, 1, x1)};
    for (int i = 1; i <= mu; ++i) upow.push_back(raw_mul(upow.back(), numer(pu_)));
    for (int i = 1; i <= mw; ++i) wpow.push_back(raw_mul(wpow.back(), numer(pw_)));
    std::vector<FqPoly> xpow{FqPoly::constant(f, 1)};
    for (int i = 1; i <= mv; ++i) xpow.push_back(xpow.back() * FqPoly::x(f));
    std::vector<FqPoly> lpow{FqPoly::constant(f, 1)};
    FqPoly l = FqPoly::linear(f, x1);
    for (int i = 1; i <= emax; ++i) lpow.push_back(lpow.back() * l);
    FqPoly n0(f), n1(f);
    for (auto& [e, cf] : g.terms()) {
      CurveFunction t = raw_mul(upow[e[0]], wpow[e[2]]);
      FqPoly m = scale(xpow[e[1]] * lpow[emax - 2 * (e[0] + e[2])], cf);
      n0 = n0 + t.n0 * m;
      n1 = n1 + t.n1 * m;
    }
    return fn::make(n0, n1, emax, x1);
  }

  template <class F>
  std::array<typename F::Elem, 3> equations(const F& fl, const typename F::Elem& u, const typename F::Elem& v,
                                            const typename F::Elem& w) const {
    return {s_uv_.eval(fl, u, v, w), s_delta_.eval(fl, u, v, w), s_uw_.eval(fl, u, v, w)};
  }

 private:
  CurveFunction raw_mul(const CurveFunction& a, const CurveFunction& b) const {
    FqPoly r = c_.rhs_poly();
    return CurveFunction{a.n0 * b.n0 + a.n1 * b.n1 * r, a.n0 * b.n1 + a.n1 * b.n0, 0, a.x1};
  }

  Curve c_;
  TorsionData td_;
  CurveFunction pu_, pv_, pw_;
  TriPoly s_uv_, s_vw_, s_delta_, s_uw_;
};

}  // namespace ebdl
