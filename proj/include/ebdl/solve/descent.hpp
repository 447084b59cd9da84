#pragma once

#include <functional>

#include "ebdl/harvest/sieve.hpp"
#include "ebdl/solve/oracle.hpp"

namespace ebdl {

// div f(X) = sum of the places above f - 2 deg(f) (O).
inline Divisor poly_to_divisor(const Curve& c, const FqPoly& f) {
  Divisor d;
  FqPoly u = monic(f);
  for (auto& p : places_over(c, u)) d.add(p, p.kind == PlaceKind::Ramified ? 2 : 1);
  d.add(infinity_place(), -2 * u.deg());
  return d;
}

// z g^r = lc * prod f_i(theta)^e_i with lc in F_q^*.
struct SplitExpr {
  u64 r = 0;
  std::vector<std::pair<FqPoly, i64>> factors;
};

inline ExtElem eval_split(const EllipticBasis& B, const SplitExpr& s) {
  const Ext& L = B.L();
  ExtElem acc = L.one();
  for (auto& [f, e] : s.factors) {
    ExtElem v = L.eval_base(f, B.theta);
    acc = L.mul(acc, L.pow(e > 0 ? v : L.inv(v), static_cast<u64>(e > 0 ? e : -e)));
  }
  return acc;
}

// Finds r with z g^r = a(theta)/b(theta), both sides d0-smooth and every
// factor accepted. r = 0 is tried first.
inline SplitExpr classical_split(const EllipticBasis& B, const ExtElem& z, const ExtElem& g, int d0, u64 budget, Rng& rng,
                                 const std::function<bool(const FqPoly&)>& accept = nullptr) {
  const Ext& L = B.L();
  const Fq& f = B.field();
  if (L.is_zero(z)) throw Error(Errc::ZeroFunction, "cannot split zero");
  if (!L.eq(B.theta, L.gen())) throw std::logic_error("theta must be the generator of the extension");
  const FqPoly I = L.modulus();
  const int half = static_cast<int>(B.k()) / 2;
  const u64 order = static_cast<u64>(L.order() - 1);
  for (u64 attempt = 0; attempt < budget; ++attempt) {
    u64 r = attempt == 0 ? 0 : rng() % order;
    ExtElem y = L.mul(z, L.pow(g, r));
    SplitExpr s;
    s.r = r;
    if (L.is_base(y)) return s;
    FqPoly r0 = I, r1 = L.to_poly(y), t0(f), t1 = FqPoly::constant(f, 1);
    while (r1.deg() > half) {
      auto [qt, rem] = divmod(r0, r1);
      FqPoly t2 = t0 - qt * t1;
      r0 = std::move(r1);
      r1 = std::move(rem);
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    bool ok = true;
    for (auto [poly, sign] : {std::make_pair(r1, 1), std::make_pair(t1, -1)}) {
      if (poly.deg() <= 0) continue;
      for (auto& [u, m] : poly_factor(poly, rng)) {
        if (u.deg() > d0 || (accept && !accept(u))) {
          ok = false;
          break;
        }
        s.factors.emplace_back(u, sign * m);
      }
      if (!ok) break;
    }
    if (ok) return s;
  }
  throw Error(Errc::BudgetExhausted, "no smooth split within budget");
}

// The monomials U^i, V^i, U^i V, U V^i (i <= t) in increasing (deg U, deg V)
// order.
inline std::vector<TriPoly::Exp> descent_monomials(int t) {
  std::set<TriPoly::Exp> s;
  for (int i = 0; i <= t; ++i) {
    s.insert({i, 0, 0});
    s.insert({0, i, 0});
    if (i >= 1) {
      s.insert({i, 1, 0});
      s.insert({1, i, 0});
    }
  }
  return {s.begin(), s.end()};
}

struct DescentShape {
  TriPoly::Exp head_a, head_b;
  std::vector<TriPoly::Exp> free_a, free_b;
};

// A monic at its head; the head of B is absent from A; for t_a = t_b the
// head of A is also absent from B.
inline DescentShape descent_shape(int ta, int tb) {
  auto Ma = descent_monomials(ta), Mb = descent_monomials(tb);
  DescentShape s;
  s.head_a = Ma.back();
  std::vector<TriPoly::Exp> bset;
  for (auto& m : Mb)
    if (ta != tb || m != s.head_a) bset.push_back(m);
  s.head_b = bset.back();
  bset.pop_back();
  s.free_b = bset;
  for (auto& m : Ma)
    if (m != s.head_a && m != s.head_b) s.free_a.push_back(m);
  return s;
}

// mult * log(target) = sum n log(p) over `others`.
struct DescentStep {
  Place target;
  i64 mult = 0;
  std::vector<std::pair<Place, i64>> others;
  std::vector<std::pair<Place, i64>> lhs, rhs;  // full relation sides
};

// Solutions b of sum_j b_j col_j = rhs over F_q, with col_j, rhs in F_{q^d}
// read coordinate-wise; at most `cap` of them.
inline std::vector<std::vector<u32>> fq_solutions(const Fq& f, const std::vector<ExtElem>& cols, const ExtElem& rhs,
                                                  size_t cap) {
  const size_t n = cols.size(), m = rhs.size();
  std::vector<std::vector<u32>> A(m, std::vector<u32>(n + 1));
  for (size_t r = 0; r < m; ++r) {
    for (size_t j = 0; j < n; ++j) A[r][j] = cols[j][r];
    A[r][n] = rhs[r];
  }
  std::vector<int> pc;
  size_t row = 0;
  for (size_t col = 0; col < n && row < m; ++col) {
    size_t p = row;
    while (p < m && A[p][col] == 0) ++p;
    if (p == m) continue;
    std::swap(A[p], A[row]);
    u32 inv = f.inv(A[row][col]);
    for (auto& a : A[row]) a = f.mul(a, inv);
    for (size_t r = 0; r < m; ++r)
      if (r != row && A[r][col]) {
        u32 c = A[r][col];
        for (size_t j = col; j <= n; ++j) A[r][j] = f.sub(A[r][j], f.mul(c, A[row][j]));
      }
    pc.push_back(static_cast<int>(col));
    ++row;
  }
  for (size_t r = row; r < m; ++r)
    if (A[r][n]) return {};
  std::vector<size_t> freec;
  for (size_t j = 0, k = 0; j < n; ++j) {
    if (k < pc.size() && pc[k] == static_cast<int>(j))
      ++k;
    else
      freec.push_back(j);
  }
  std::vector<std::vector<u32>> out;
  std::vector<u64> idx(freec.size(), 0);
  for (;;) {
    std::vector<u32> b(n, 0);
    for (size_t i = 0; i < freec.size(); ++i) b[freec[i]] = static_cast<u32>(idx[i]);
    for (size_t r = 0; r < row; ++r) {
      u32 v = A[r][n];
      for (size_t i = 0; i < freec.size(); ++i) v = f.sub(v, f.mul(A[r][freec[i]], b[freec[i]]));
      b[pc[r]] = v;
    }
    out.push_back(std::move(b));
    if (out.size() >= cap) break;
    size_t i = 0;
    while (i < idx.size() && ++idx[i] == f.q()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return out;
}

// Bracket vanishing at a point of the target place forces the target into
// the right-hand divisor. A's free coefficients are enumerated in index
// order; B's are solved linearly. Pieces must satisfy `known`.
inline std::optional<DescentStep> bilinear_descend(const EllipticBasis& B, const Model& model, const Place& target, int ta,
                                                   int tb, const std::function<bool(const Place&)>& known, u64 budget) {
  if (ta < tb || tb < 1) throw Error(Errc::NoSolutionInBudget, "descent needs t_a >= t_b >= 1");
  if (target.degree() > 8) throw Error(Errc::NoSolutionInBudget, "descent target above degree 8");
  const Curve& c = B.curve;
  const Fq& f = B.field();
  auto [Lp, Q] = place_point(c, target);
  const Ext& L = *Lp;
  auto shape = descent_shape(ta, tb);
  auto val = [&](const TriPoly::Exp& e) {
    TriPoly m = TriPoly::monomial(f, e);
    return std::make_pair(fn::eval(L, model.phi_star(m), Q), fn::eval(L, model.phi_star(m.shift_vars()), Q));
  };
  std::map<TriPoly::Exp, std::pair<ExtElem, ExtElem>> ev;
  for (auto& e : descent_monomials(ta)) ev[e] = val(e);
  for (auto& e : descent_monomials(tb)) ev[e] = val(e);
  // <m, n>(Phi(Q)) = m(V,W) n(U,V) - m(U,V) n(V,W)
  auto pairing = [&](const ExtElem& aU, const ExtElem& aS, const TriPoly::Exp& n) {
    auto& [nU, nS] = ev.at(n);
    return L.sub(L.mul(aS, nU), L.mul(aU, nS));
  };
  const size_t na = shape.free_a.size();
  std::vector<u64> idx(na, 0);
  for (u64 it = 0; it < budget; ++it) {
    TriPoly A = TriPoly::monomial(f, shape.head_a);
    ExtElem aU = ev.at(shape.head_a).first, aS = ev.at(shape.head_a).second;
    for (size_t i = 0; i < na; ++i) {
      u32 a = static_cast<u32>(idx[i]);
      if (!a) continue;
      A = A + TriPoly::monomial(f, shape.free_a[i], a);
      aU = L.add(aU, L.scale(ev.at(shape.free_a[i]).first, a));
      aS = L.add(aS, L.scale(ev.at(shape.free_a[i]).second, a));
    }
    std::vector<ExtElem> cols;
    for (auto& n : shape.free_b) cols.push_back(pairing(aU, aS, n));
    ExtElem rhs = L.neg(pairing(aU, aS, shape.head_b));
    for (auto& b : fq_solutions(f, cols, rhs, 64)) {
      TriPoly Bp = TriPoly::monomial(f, shape.head_b);
      for (size_t j = 0; j < b.size(); ++j)
        if (b[j]) Bp = Bp + TriPoly::monomial(f, shape.free_b[j], b[j]);
      SieveBasis plain;
      plain.g1 = A;
      PairDivisors pd;
      try {
        pd = pair_divisors(model, plain, A, Bp);
      } catch (const Error& e) {
        if (e.code() == Errc::DegeneratePair || e.code() == Errc::ZeroFunction) continue;
        throw;
      }
      i64 m = pd.right.coef(target);
      if (m <= 0) continue;
      DescentStep step{target, m, {}, {}, {}};
      bool ok = true;
      for (auto& d : pd.left)
        for (auto& [p, n] : to_terms(d)) {
          if (p == target || !known(p)) ok = false;
          step.lhs.emplace_back(p, n);
          step.others.emplace_back(p, n);
        }
      for (auto& [p, n] : to_terms(pd.right)) {
        step.rhs.emplace_back(p, n);
        if (p == target) continue;
        if (!known(p)) ok = false;
        step.others.emplace_back(p, -n);
      }
      if (ok) return step;
    }
    size_t i = 0;
    while (i < na && ++idx[i] == f.q()) idx[i++] = 0;
    if (i == na) break;
  }
  return std::nullopt;
}

}  // namespace ebdl
