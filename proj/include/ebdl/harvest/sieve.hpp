#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>

#include "ebdl/harvest/relation.hpp"

namespace ebdl {

enum class SieveMode { Core, Special, K1K2, Height5 };

inline const char* sieve_mode_name(SieveMode m) {
  switch (m) {
    case SieveMode::Core: return "core";
    case SieveMode::Special: return "special";
    case SieveMode::K1K2: return "k1k2";
    case SieveMode::Height5: return "h5";
  }
  return "?";
}

// Core and group modes sieve A = g1 + a g_A, B = g1 + b g_B (+ g g3 in core).
struct SieveBasis {
  SieveMode mode = SieveMode::Core;
  TriPoly g1, g2, g3;
  std::vector<Place> compelled_left, compelled_right;
  TriPoly systematic;  // removed from the bracket (special group)
  u32 k1 = 0, k2 = 0;
  int left_bound = 3;    // height of each left factor after compelled_left
  int right_bound = 6;   // residual bracket height
  std::string id;
};

inline SieveBasis core_sieve(const Model& m) {
  const Fq& f = *m.curve().field;
  const TorsionData& td = m.torsion();
  SieveBasis s;
  s.mode = SieveMode::Core;
  s.g1 = TriPoly::U(f) - TriPoly::constant(f, td.x(2));
  s.g2 = TriPoly::V(f) - TriPoly::constant(f, td.x(3));
  s.g3 = s.g1 * s.g2;
  Place p3 = point_place(f, td.at(3)), p2 = point_place(f, td.at(2));
  s.compelled_left = {p3};
  s.compelled_right = {p3, p2};
  s.left_bound = 3;
  s.right_bound = 6;
  s.id = "core";
  return s;
}

inline SieveBasis special_sieve(const Model& m) {
  const Fq& f = *m.curve().field;
  SieveBasis s;
  s.mode = SieveMode::Special;
  TriPoly U = TriPoly::U(f), V = TriPoly::V(f);
  s.g1 = U * V;
  s.g2 = U + V;
  s.g3 = TriPoly::constant(f, 1);
  s.systematic = TriPoly::W(f) - U;
  s.left_bound = 4;
  s.right_bound = 4;
  s.id = "special";
  return s;
}

// Top weighted-degree monomial (X weight 2, Y weight 3) of the numerator of
// g written over (X - x1)^e.
inline std::pair<int, u32> top_monomial(const CurveFunction& g) {
  int w0 = g.n0.is_zero() ? -1 : 2 * g.n0.deg();
  int w1 = g.n1.is_zero() ? -1 : 2 * g.n1.deg() + 3;
  return w0 > w1 ? std::make_pair(w0, g.n0.lead()) : std::make_pair(w1, g.n1.lead());
}

// c_f for <U,UV>, <UV,V>, <U,V> over their common denominator.
inline std::array<u32, 3> k1k2_constants(const Model& m) {
  const Fq& f = *m.curve().field;
  TriPoly U = TriPoly::U(f), V = TriPoly::V(f), UV = U * V;
  std::array<CurveFunction, 3> fs{m.phi_star(bracket(U, UV)), m.phi_star(bracket(UV, V)), m.phi_star(bracket(U, V))};
  int e = 0;
  for (auto& g : fs) e = std::max(e, g.e);
  FqPoly l = FqPoly::linear(f, fs[0].x1);
  int w = -1;
  std::array<std::pair<int, u32>, 3> tops;
  for (int i = 0; i < 3; ++i) {
    FqPoly s = poly_pow(l, e - fs[i].e);
    tops[i] = top_monomial(CurveFunction{fs[i].n0 * s, fs[i].n1 * s, e, fs[i].x1});
    w = std::max(w, tops[i].first);
  }
  std::array<u32, 3> c{};
  for (int i = 0; i < 3; ++i) c[i] = tops[i].first == w ? tops[i].second : 0;
  return c;
}

// k1 c1 + k2 c2 + k1 k2 c3 = 0 solved for k2, one group per admissible k1 != 0.
inline std::vector<std::pair<u32, u32>> k1k2_pairs(const Model& m) {
  const Fq& f = *m.curve().field;
  auto c = k1k2_constants(m);
  std::vector<std::pair<u32, u32>> out;
  for (u32 k1 = 1; k1 < f.q(); ++k1) {
    u32 den = f.add(c[1], f.mul(k1, c[2]));
    if (den == 0) continue;
    out.emplace_back(k1, f.neg(f.div(f.mul(k1, c[0]), den)));
  }
  return out;
}

inline SieveBasis k1k2_sieve(const Model& m, u32 k1, u32 k2) {
  const Fq& f = *m.curve().field;
  SieveBasis s;
  s.mode = SieveMode::K1K2;
  TriPoly U = TriPoly::U(f), V = TriPoly::V(f), UV = U * V;
  s.g1 = UV + U.scaled(k1);
  s.g2 = UV + V.scaled(k2);
  s.g3 = TriPoly::constant(f, 1);
  s.k1 = k1;
  s.k2 = k2;
  s.left_bound = 4;
  s.right_bound = 7;
  s.id = "k1k2:" + std::to_string(k1) + "," + std::to_string(k2);
  return s;
}

inline SieveBasis height5_sieve(const Model& m) {
  SieveBasis s;
  s.mode = SieveMode::Height5;
  s.g1 = TriPoly::U(*m.curve().field) * TriPoly::V(*m.curve().field);
  s.left_bound = 4;
  s.right_bound = 8;
  s.id = "h5";
  return s;
}

inline std::pair<TriPoly, TriPoly> sieve_pair(const SieveBasis& s, const std::vector<u32>& prm) {
  const Fq& f = s.g1.field();
  switch (s.mode) {
    case SieveMode::Core:
      return {s.g1 + s.g3.scaled(prm[0]), s.g1 + s.g2.scaled(prm[1]) + s.g3.scaled(prm[2])};
    case SieveMode::Special:
    case SieveMode::K1K2:
      return {s.g1 + s.g2.scaled(prm[0]), s.g1 + s.g3.scaled(prm[1])};
    case SieveMode::Height5: {
      TriPoly U = TriPoly::U(f), V = TriPoly::V(f), one = TriPoly::constant(f, 1);
      return {s.g1 + U.scaled(prm[0]) + one.scaled(prm[1]), s.g1 + V.scaled(prm[2]) + one.scaled(prm[3])};
    }
  }
  throw std::logic_error("unknown sieve mode");
}

inline int sieve_arity(SieveMode m) { return m == SieveMode::Core ? 3 : m == SieveMode::Height5 ? 4 : 2; }

// Divisors of both sides of one pair.
struct PairDivisors {
  std::vector<Divisor> left;  // A - a'B for a' in F_q, then B
  Divisor right;
  Divisor residual;  // right minus compelled_right or the systematic divisor
  i64 max_left_residual = 0;  // after compelled_left
  i64 right_residual = 0;     // after compelled_right / systematic
  bool compelled_ok = true;
};

inline Divisor remove_compelled(const Divisor& d, const std::vector<Place>& compelled, bool& ok) {
  Divisor r = d;
  for (auto& p : compelled) {
    if (r.coef(p) < 1) ok = false;
    r.add(p, -1);
  }
  return r;
}

// Throws DegeneratePair for proportional pairs or vanishing pullbacks.
inline PairDivisors pair_divisors(const Model& m, const SieveBasis& s, const TriPoly& A, const TriPoly& B) {
  const Curve& c = m.curve();
  const Fq& f = *c.field;
  TriPoly br = bracket(A, B);
  if (br.is_zero()) throw Error(Errc::DegeneratePair, "A and B are proportional");
  auto div = [&](const TriPoly& t) {
    CurveFunction g = m.phi_star(t);
    if (g.is_zero()) throw Error(Errc::DegeneratePair, "pullback vanishes identically");
    return divisor_of(c, g);
  };
  PairDivisors out;
  for (u32 a = 0; a <= f.q(); ++a) {
    const TriPoly t = a < f.q() ? A - B.scaled(a) : B;
    out.left.push_back(div(t));
    out.max_left_residual =
        std::max(out.max_left_residual, remove_compelled(out.left.back(), s.compelled_left, out.compelled_ok).height());
  }
  out.right = div(br);
  if (!s.systematic.is_zero()) {
    Divisor sys = div(s.systematic);
    out.residual = out.right - sys;
    for (auto& [p, n] : out.residual.terms())
      if (p.finite() && n < 0 && sys.coef(p) > 0) out.compelled_ok = false;
  } else {
    out.residual = remove_compelled(out.right, s.compelled_right, out.compelled_ok);
  }
  out.right_residual = out.residual.height();
  return out;
}

struct SieveStats {
  u64 pairs = 0;
  u64 degenerate = 0;
  u64 smooth = 0;        // residual bracket decomposes at bound 3
  u64 emitted = 0;
  u64 left_factors = 0;
  u64 left_over_bound = 0;
  u64 right_over_bound = 0;
  u64 compelled_missing = 0;
  i64 max_left = 0, max_right = 0;

  void merge(const SieveStats& o) {
    pairs += o.pairs;
    degenerate += o.degenerate;
    smooth += o.smooth;
    emitted += o.emitted;
    left_factors += o.left_factors;
    left_over_bound += o.left_over_bound;
    right_over_bound += o.right_over_bound;
    compelled_missing += o.compelled_missing;
    max_left = std::max(max_left, o.max_left);
    max_right = std::max(max_right, o.max_right);
  }
  double success_rate() const { return pairs > degenerate ? double(smooth) / double(pairs - degenerate) : 0.0; }
};

inline int default_workers() {
  if (const char* e = std::getenv("EBDL_WORKERS")) {
    int n = std::atoi(e);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, n) over workers; results land by index.
template <class Body>
void parallel_for(u64 n, int workers, Body body) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<u64>(n, 1))));
  std::atomic<u64> next{0};
  auto run = [&] {
    for (u64 i; (i = next.fetch_add(1)) < n;) body(i);
  };
  if (workers == 1) return run();
  std::vector<std::thread> ts;
  for (int w = 0; w < workers; ++w) ts.emplace_back(run);
  for (auto& t : ts) t.join();
}

inline std::vector<std::pair<Place, i64>> to_terms(const Divisor& d) {
  std::vector<std::pair<Place, i64>> t;
  for (auto& [p, n] : d.terms())
    if (p.finite()) t.emplace_back(p, n);
  return t;
}

// Largest place degree with positive multiplicity, and how many such places
// have degree above `above`.
inline std::pair<int, int> degree_profile(const Divisor& d, int above) {
  int top = 0, cnt = 0;
  for (auto& [p, n] : d.terms())
    if (p.finite() && n > 0) {
      top = std::max(top, p.degree());
      if (p.degree() > above) ++cnt;
    }
  return {top, cnt};
}

struct SieveResult {
  std::vector<Relation> relations;
  SieveStats stats;
};

// Enumerates all parameter tuples of the mode (or the first `budget`), keeps
// pairs according to the mode's smoothness rule:
//   core: residual bracket 3-smooth;
//   special, k1k2: every place of degree <= 4 (3-smooth counted as success);
//   h5: exactly one place of degree 5 on the right, all others <= 4.
inline SieveResult run_sieve(const EllipticBasis& B, const FactorBase& fb, const SieveBasis& s, u64 budget = 0,
                             int workers = 1) {
  Model m(B.curve, B.td);
  const u64 q = B.q();
  const int ar = sieve_arity(s.mode);
  u64 total = 1;
  for (int i = 0; i < ar; ++i) total *= q;
  if (budget && budget < total) total = budget;
  std::vector<std::optional<Relation>> slots(total);
  std::vector<SieveStats> st(total);
  parallel_for(total, workers, [&](u64 idx) {
    std::vector<u32> prm(ar);
    u64 r = idx;
    for (int i = ar - 1; i >= 0; --i) {
      prm[i] = static_cast<u32>(r % q);
      r /= q;
    }
    SieveStats& S = st[idx];
    S.pairs = 1;
    auto [A, Bp] = sieve_pair(s, prm);
    PairDivisors pd;
    try {
      pd = pair_divisors(m, s, A, Bp);
    } catch (const Error& e) {
      if (e.code() != Errc::DegeneratePair && e.code() != Errc::ZeroFunction) throw;
      S.degenerate = 1;
      return;
    }
    S.left_factors = pd.left.size();
    S.max_left = pd.max_left_residual;
    S.max_right = pd.right_residual;
    if (pd.max_left_residual > s.left_bound) S.left_over_bound = 1;
    if (pd.right_residual > s.right_bound) S.right_over_bound = 1;
    if (!pd.compelled_ok) S.compelled_missing = 1;
    auto [rtop, rbig] = degree_profile(pd.right, 4);
    int ltop = 0;
    for (auto& d : pd.left) ltop = std::max(ltop, degree_profile(d, 4).first);
    if (degree_profile(pd.residual, 3).first <= 3) S.smooth = 1;
    bool keep = false;
    switch (s.mode) {
      case SieveMode::Core: keep = rtop <= 3 && ltop <= 3; break;
      case SieveMode::Special:
      case SieveMode::K1K2: keep = rtop <= 4 && ltop <= 4; break;
      case SieveMode::Height5: keep = rbig == 1 && rtop == 5 && ltop <= 4; break;
    }
    if (!keep || std::max(rtop, ltop) > fb.max_degree()) return;
    std::vector<std::pair<Place, i64>> lhs;
    for (auto& d : pd.left)
      for (auto& t : to_terms(d)) lhs.push_back(t);
    std::string params;
    if (s.mode == SieveMode::K1K2) params = std::to_string(s.k1) + "," + std::to_string(s.k2) + ",";
    for (int i = 0; i < ar; ++i) params += (i ? "," : "") + std::to_string(prm[i]);
    slots[idx] = make_relation(fb, B, sieve_mode_name(s.mode), params, std::move(lhs), to_terms(pd.right));
    S.emitted = 1;
  });
  SieveResult out;
  for (u64 i = 0; i < total; ++i) {
    out.stats.merge(st[i]);
    if (slots[i]) out.relations.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace ebdl
