#pragma once

#include <map>
#include <mutex>

#include "ebdl/basis/basis.hpp"
#include "ebdl/divisor/place.hpp"

namespace ebdl {

// Class in F_{q^k}^* / F_q^*: the associate whose lowest nonzero coordinate is 1.
struct PsiValue {
  ExtElem v;
  bool operator==(const PsiValue& o) const { return v == o.v; }
  bool operator!=(const PsiValue& o) const { return v != o.v; }
};

inline PsiValue psi_canon(const Ext& L, const ExtElem& x) {
  if (L.is_zero(x)) throw Error(Errc::SupportHitsF, "zero has no class in F_{q^k}^*/F_q^*");
  for (auto c : x)
    if (c != 0) return {L.scale(x, L.base().inv(c))};
  return {x};
}
inline PsiValue psi_one(const Ext& L) { return {L.one()}; }
inline PsiValue psi_mul(const Ext& L, const PsiValue& a, const PsiValue& b) { return psi_canon(L, L.mul(a.v, b.v)); }
inline PsiValue psi_inv(const Ext& L, const PsiValue& a) { return psi_canon(L, L.inv(a.v)); }
// Exponents live mod M since x^M lies in F_q^*.
inline PsiValue psi_pow(const Ext& L, const PsiValue& a, i64 e, u64 M) {
  u64 r = reduce_signed(e, M);
  return psi_canon(L, L.pow(a.v, r));
}
inline PsiValue psi_frobenius(const Ext& L, const PsiValue& a) { return psi_canon(L, L.frobenius(a.v)); }

enum class MillerChain { DoubleAndAdd, Additive };

// f_{n,T}(F) with div f_{n,T} = n(T) - (nT) - (n-1)(O); lines are monic in Y
// or X.
inline ExtElem miller(const Curve& c, const Ext& L, const FqPoint& T, u64 n, const ExtPoint& F,
                      MillerChain chain = MillerChain::DoubleAndAdd) {
  const Fq& f = *c.field;
  auto E = c.ops();
  // l_{R,S}(F) / v_{R+S}(F)
  auto step = [&](const FqPoint& R, const FqPoint& S) -> std::pair<ExtElem, FqPoint> {
    FqPoint sum = E.add(R, S);
    if (R.inf || S.inf) return {L.one(), sum};
    ExtElem num;
    if (R.x == S.x && (R.y != S.y || R.y == 0)) {
      num = L.sub(F.x, L.embed(R.x));  // vertical line
    } else {
      u32 lam = R.x == S.x ? f.div(f.add(f.mul(f.from_int(3), f.mul(R.x, R.x)), c.a), f.add(R.y, R.y))
                           : f.div(f.sub(S.y, R.y), f.sub(S.x, R.x));
      num = L.sub(L.sub(F.y, L.embed(R.y)), L.mul(L.embed(lam), L.sub(F.x, L.embed(R.x))));
    }
    ExtElem den = sum.inf ? L.one() : L.sub(F.x, L.embed(sum.x));
    if (L.is_zero(num) || L.is_zero(den)) throw Error(Errc::SupportHitsF, "Miller line vanishes at F");
    return {L.div(num, den), sum};
  };
  ExtElem acc = L.one();
  FqPoint R = T;
  if (chain == MillerChain::Additive) {
    for (u64 i = 1; i < n; ++i) {
      auto [g, s] = step(R, T);
      acc = L.mul(acc, g);
      R = s;
    }
    return acc;
  }
  int top = 63;
  while (!((n >> top) & 1)) --top;
  for (int b = top - 1; b >= 0; --b) {
    auto [g, s] = step(R, R);
    acc = L.mul(L.mul(acc, acc), g);
    R = s;
    if ((n >> b) & 1) {
      auto [h, t] = step(R, T);
      acc = L.mul(acc, h);
      R = t;
    }
  }
  return acc;
}

// Psi on degree-zero divisors. Elementary divisors of split and ramified
// places are reduced to (T) - (O) with T rational by Cantor steps
// D(u,v) = div((Y - v)/u~) + D(u~, -v), u~ = (f - v^2)/u; then
// Psi((T) - (O)) = f_{N_1,T}(F)^(1/N_1 mod M). Inert places are principal:
// (p) - deg(p)(O) = div(u(X)).
class PsiEvaluator {
 public:
  explicit PsiEvaluator(const EllipticBasis& B, MillerChain chain = MillerChain::DoubleAndAdd)
      : B_(B), chain_(chain), F_(B.F()) {
    if (gcd_u64(B.curve.N, B.M) != 1) throw Error(Errc::NdNotInvertible, "#E(F_q) is not invertible mod M");
    n1_inv_ = invmod(B.curve.N % B.M, B.M);
  }

  const EllipticBasis& basis() const { return B_; }

  PsiValue rational(const FqPoint& T) const {
    const Ext& L = B_.L();
    if (T.inf) return psi_one(L);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find({T.x, T.y});
      if (it != cache_.end()) return it->second;
    }
    PsiValue v = psi_pow(L, psi_canon(L, miller(B_.curve, L, T, B_.curve.N, F_, chain_)), static_cast<i64>(n1_inv_), B_.M);
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(std::make_pair(T.x, T.y), v);
    return v;
  }

  // Psi((p) - deg(p)(O))
  PsiValue elementary(const Place& p) const {
    const Ext& L = B_.L();
    const Fq& f = B_.field();
    if (!p.finite()) return psi_one(L);
    FqPoly u = p.upoly(f);
    if (p.kind == PlaceKind::Inert) return psi_canon(L, nonzero(L.eval_base(u, B_.theta)));
    FqPoly v = p.kind == PlaceKind::Split ? p.vpoly(f) : FqPoly(f);
    const FqPoly rhs = B_.curve.rhs_poly();
    ExtElem acc = L.one();
    while (u.deg() >= 2) {
      FqPoly ut = monic(div_exact(rhs - v * v, u));
      ExtElem num = nonzero(L.sub(B_.tau, L.eval_base(v, B_.theta)));
      ExtElem den = ut.deg() > 0 ? nonzero(L.eval_base(ut, B_.theta)) : L.one();
      acc = L.mul(acc, L.div(num, den));
      u = ut;
      v = u.deg() > 0 ? (-v) % u : FqPoly(f);
    }
    PsiValue r = psi_canon(L, acc);
    if (u.deg() == 1) r = psi_mul(L, r, rational(FqPoint::affine(f.neg(u.c[0]), v.coef(0))));
    return r;
  }

  PsiValue eval(const Divisor& D) const {
    if (D.degree() != 0) throw Error(Errc::DescentFailed, "Psi needs a degree-zero divisor");
    return combine(std::vector<std::pair<Place, i64>>(D.terms().begin(), D.terms().end()));
  }

  // prod Psi(elementary(p))^n
  PsiValue combine(const std::vector<std::pair<Place, i64>>& terms) const {
    const Ext& L = B_.L();
    PsiValue r = psi_one(L);
    for (auto& [p, n] : terms) {
      if (!p.finite() || n == 0) continue;
      r = psi_mul(L, r, psi_pow(L, elementary(p), n, B_.M));
    }
    return r;
  }

 private:
  const ExtElem& nonzero(const ExtElem& x) const {
    if (B_.L().is_zero(x)) throw Error(Errc::SupportHitsF, "function vanishes at F");
    return x;
  }

  const EllipticBasis& B_;
  MillerChain chain_;
  ExtPoint F_;
  u64 n1_inv_ = 0;
  mutable std::mutex mu_;
  mutable std::map<std::pair<u32, u32>, PsiValue> cache_;
};

inline PsiValue psi_eval(const Divisor& D, const EllipticBasis& B) { return PsiEvaluator(B).eval(D); }

inline bool verify_relation(const PsiEvaluator& ev, const std::vector<std::pair<Place, i64>>& lhs,
                            const std::vector<std::pair<Place, i64>>& rhs) {
  return ev.combine(lhs) == ev.combine(rhs);
}

}  // namespace ebdl
