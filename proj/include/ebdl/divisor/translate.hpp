#pragma once

#include <map>
#include <mutex>

#include "ebdl/curve/model.hpp"
#include "ebdl/divisor/divisor.hpp"

namespace ebdl {

// Shared F_{q^n} built from the first irreducible of degree n.
inline ExtPtr ext_of_degree(const FqPtr& f, int n) {
  static std::mutex mu;
  static std::map<std::tuple<u32, std::vector<u32>, int>, ExtPtr> cache;
  auto key = std::make_tuple(f->p(), f->modulus(), n);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto e = std::make_shared<const Ext>(f, first_irreducible(*f, n), false);
  cache.emplace(key, e);
  return e;
}

// One point of a finite place, over a field of exactly the place's degree.
struct PlacePoint {
  ExtPtr L;
  ExtPoint Q;
};

inline PlacePoint place_point(const Curve& c, const Place& p) {
  if (!p.finite()) return {ext_of_degree(c.field, 1), ExtPoint::infinity()};
  const Fq& f = *c.field;
  FqPoly u = p.upoly(f);
  if (p.kind != PlaceKind::Inert) {
    auto L = ext_make(c.field, u);
    ExtElem x = L->gen();
    ExtElem y = p.kind == PlaceKind::Split ? L->from_poly(p.vpoly(f)) : L->zero();
    return {L, ExtPoint::affine(x, y)};
  }
  auto L = ext_of_degree(c.field, 2 * u.deg());
  std::vector<ExtElem> uc;
  for (u32 a : u.c) uc.push_back(L->embed(a));
  Rng rng(0);
  auto roots = poly_roots(Poly<Ext>(*L, uc), rng);
  if (roots.empty()) throw std::logic_error("inert place without roots in its residue field");
  ExtElem x = roots.front(), y;
  if (!field_sqrt(*L, c.ops_over(*L).rhs(x), y, rng)) throw std::logic_error("inert place ordinate missing");
  return {L, ExtPoint::affine(x, y)};
}

// Solves sum_j v_j x^j = y over F_q for j < n; x generates a degree-n subfield.
inline FqPoly express_in_powers(const Fq& f, const Ext& L, const ExtElem& x, int n, const ExtElem& y) {
  const int k = L.k();
  std::vector<std::vector<u32>> A(k, std::vector<u32>(n + 1, 0));
  ExtElem pw = L.one();
  for (int j = 0; j < n; ++j) {
    for (int r = 0; r < k; ++r) A[r][j] = pw[r];
    pw = L.mul(pw, x);
  }
  for (int r = 0; r < k; ++r) A[r][n] = y[r];
  int row = 0;
  std::vector<int> pivcol;
  for (int col = 0; col < n && row < k; ++col) {
    int piv = -1;
    for (int r = row; r < k; ++r)
      if (A[r][col]) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(A[piv], A[row]);
    u32 inv = f.inv(A[row][col]);
    for (auto& a : A[row]) a = f.mul(a, inv);
    for (int r = 0; r < k; ++r) {
      if (r == row || !A[r][col]) continue;
      u32 m = A[r][col];
      for (int j = col; j <= n; ++j) A[r][j] = f.sub(A[r][j], f.mul(m, A[row][j]));
    }
    pivcol.push_back(col);
    ++row;
  }
  for (int r = row; r < k; ++r)
    if (A[r][n]) throw std::logic_error("ordinate outside the abscissa field");
  std::vector<u32> v(n, 0);
  for (int r = 0; r < row; ++r) v[pivcol[r]] = A[r][n];
  return FqPoly(f, v);
}

inline Place place_of_point(const Curve& c, const Ext& L, const ExtPoint& Q) {
  if (Q.inf) return infinity_place();
  const Fq& f = *c.field;
  std::vector<ExtElem> conj{Q.x};
  for (ExtElem z = L.frobenius(Q.x); !L.eq(z, Q.x); z = L.frobenius(z)) conj.push_back(z);
  const int d = static_cast<int>(conj.size());
  Poly<Ext> up = Poly<Ext>::constant(L, L.one());
  for (auto& z : conj) up = up * Poly<Ext>::linear(L, z);
  std::vector<u32> uc;
  for (auto& a : up.c) {
    if (!L.is_base(a)) throw std::logic_error("minimal polynomial not over the base field");
    uc.push_back(a[0]);
  }
  FqPoly u(f, uc);
  if (L.is_zero(Q.y)) return make_place(PlaceKind::Ramified, u);
  if (!L.eq(L.frobenius(Q.y, d), Q.y)) return make_place(PlaceKind::Inert, u);
  return make_place(PlaceKind::Split, u, express_in_powers(f, L, Q.x, d, Q.y));
}

inline i64 mod_k(i64 s, u64 k) { return static_cast<i64>(reduce_signed(s, k)); }

// Place of {Q - steps P1 : Q in p}.
inline Place translate_place(const Curve& c, const TorsionData& td, const Place& p, i64 steps) {
  if (!p.finite()) throw Error(Errc::HitsInfinity, "cannot translate the place at infinity");
  steps = mod_k(steps, td.k);
  if (steps == 0) return p;
  auto [L, Q] = place_point(c, p);
  auto E = c.ops_over(*L);
  ExtPoint R = E.sub(Q, E.mul(steps, embed_point(*L, td.P1())));
  if (R.inf) throw Error(Errc::HitsInfinity, "translate lands on O");
  return place_of_point(c, *L, R);
}

// Index j in 1..k-1 with p = (P_j), or 0.
inline u64 torsion_index(const Curve& c, const TorsionData& td, const Place& p) {
  if (!p.finite() || p.degree() != 1 || p.kind == PlaceKind::Inert) return 0;
  for (u64 j = 1; j < td.k; ++j)
    if (point_place(*c.field, td.P[j]) == p) return j;
  return 0;
}

struct OrbitRep {
  Place rep;
  i64 shift = 0;  // p = translate_place(rep, shift)
};

// Orbit representative under translation by -P1. The torsion chain
// (P_1), ..., (P_{k-1}) passes through O, so its representative is (P_{k-1})
// = (-P_1), from which every (P_j) is reached without crossing O.
inline OrbitRep orbit_canonical(const Curve& c, const TorsionData& td, const Place& p) {
  if (u64 j = torsion_index(c, td, p)) return {point_place(*c.field, td.P[td.k - 1]), static_cast<i64>(td.k - 1 - j)};
  auto [L, Q] = place_point(c, p);
  auto E = c.ops_over(*L);
  ExtPoint P1 = embed_point(*L, td.P1());
  Place best = p;
  i64 s0 = 0, o = static_cast<i64>(td.k);
  ExtPoint R = Q;
  for (i64 s = 1; s < static_cast<i64>(td.k); ++s) {
    R = E.sub(R, P1);
    Place t = place_of_point(c, *L, R);
    if (t == p) {
      o = s;
      break;
    }
    if (t < best) {
      best = t;
      s0 = s;
    }
  }
  return {best, (o - s0 % o) % o};
}

// All places of degree <= d, in canonical order.
inline std::vector<Place> places_up_to(const Curve& c, int d) {
  const Fq& f = *c.field;
  std::vector<Place> out;
  for (int e = 1; e <= d; ++e) {
    std::vector<u64> idx(e, 0);
    for (;;) {
      std::vector<u32> cf(e + 1);
      for (int i = 0; i < e; ++i) cf[i] = static_cast<u32>(idx[i]);
      cf[e] = 1;
      FqPoly u(f, cf);
      if (is_irreducible(u))
        for (auto& pl : places_over(c, u))
          if (pl.degree() <= d) out.push_back(pl);
      int i = 0;
      while (i < e && ++idx[i] == f.q()) idx[i++] = 0;
      if (i == e) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ebdl
