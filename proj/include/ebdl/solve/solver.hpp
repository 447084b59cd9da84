#pragma once

#include "ebdl/solve/descent.hpp"
#include "ebdl/solve/linalg.hpp"
#include "ebdl/solve/logs.hpp"

namespace ebdl {

struct SolveOptions {
  u64 small_prime_threshold = 1ull << 20;  // primes below are solved by BSGS on Psi values
  u64 seed = 0;
  u64 split_budget = 20000;
  int split_degree = 5;  // d0 for classical splits
  int ta = 2, tb = 1;    // bilinear descent shape
  u64 descent_budget = 0;  // A-coefficient vectors tried per descent; 0 disables
};

struct PartReport {
  u64 mod = 0;
  bool bsgs = false;
  size_t rows = 0;
  size_t core_unknowns = 0;
  int core_kernel_dim = 0;
  u32 reference = 0;
  size_t solved = 0;
  size_t rejected = 0;  // failed the Psi check and were dropped
  size_t inconsistent_rows = 0;
};

struct SolveReport {
  std::vector<PartReport> parts;
  size_t reps = 0;
  size_t complete = 0;
};

namespace detail {

inline std::vector<SparseRow> rows_mod(const std::vector<Relation>& rels, u32 c_index, u64 l) {
  std::vector<SparseRow> out;
  for (auto& r : rels) {
    std::map<u32, u64> acc;
    for (auto& [i, v] : r.row) acc[i] = addmod(acc[i], v % l, l);
    acc[c_index] = addmod(acc[c_index], r.c % l, l);
    SparseRow row;
    for (auto& [i, v] : acc)
      if (v) row.emplace_back(i, v);
    if (!row.empty()) out.push_back(std::move(row));
  }
  return out;
}

// Solves the rows for unknowns not yet in `known`, repeating until nothing
// new is fixed. Returns the number of rows left violated by known values.
inline size_t propagate(const std::vector<SparseRow>& rows, u32 ncols, u64 l, std::map<u32, u64>& known) {
  for (;;) {
    std::vector<u32> cols;
    std::map<u32, u32> colidx;
    std::vector<SparseRow> A;
    std::vector<u64> rhs;
    size_t violated = 0;
    for (auto& row : rows) {
      SparseRow r;
      u64 b = 0;
      for (auto& [i, v] : row) {
        auto it = known.find(i);
        if (it != known.end()) {
          b = submod(b, mulmod(v, it->second, l), l);
        } else {
          auto [ci, fresh] = colidx.emplace(i, static_cast<u32>(cols.size()));
          if (fresh) cols.push_back(i);
          r.emplace_back(ci->second, v);
        }
      }
      if (r.empty()) {
        violated += b != 0;
        continue;
      }
      A.push_back(std::move(r));
      rhs.push_back(b);
    }
    if (A.empty()) return violated;
    auto x = determined_unknowns(A, rhs, static_cast<u32>(cols.size()), l);
    bool progress = false;
    for (u32 j = 0; j < cols.size(); ++j)
      if (x[j]) {
        known[cols[j]] = *x[j];
        progress = true;
      }
    if (!progress) return violated;
    (void)ncols;
  }
}

// sum over the places above u of their log, or nullopt.
template <class PlaceLog>
std::optional<u64> poly_log(const Curve& c, const FqPoly& u, u64 mod, PlaceLog&& place_log) {
  u64 s = 0;
  const Divisor d = poly_to_divisor(c, u);
  for (auto& [p, n] : d.terms()) {
    if (!p.finite()) continue;
    auto v = place_log(p);
    if (!v) return std::nullopt;
    s = addmod(s, mulmod(reduce_signed(n, mod), *v, mod), mod);
  }
  return s;
}

}  // namespace detail

// Fills a LogTable base g. Index-calculus parts solve the relations in two
// passes: core rows with a reference unknown fixed to 1, then all rows with
// known values substituted; the scale is fixed by splitting g itself.
inline LogTable solve_logs(const EllipticBasis& B, const FactorBase& fb, const std::vector<Relation>& rels, const ExtElem& g,
                           const SolveOptions& opt = {}, SolveReport* report = nullptr) {
  const Ext& L = B.L();
  PsiEvaluator ev(B);
  LogTable T;
  T.M = B.M;
  T.q = B.q();
  T.g = g;
  T.c_index = fb.c_index();
  SolveReport rep;
  rep.reps = fb.size();
  const u32 n = static_cast<u32>(fb.size());
  std::vector<Relation> core;
  for (auto& r : rels)
    if (r.mode == "core") core.push_back(r);
  for (auto& [l, e] : factor_modulus(B.M)) {
    PrimePart P;
    P.l = l;
    P.e = e;
    P.mod = 1;
    for (int i = 0; i < e; ++i) P.mod *= l;
    PartReport pr;
    pr.mod = P.mod;
    if (l < opt.small_prime_threshold || e > 1) {
      P.bsgs = pr.bsgs = true;
      for (u32 i = 0; i < n; ++i)
        if (auto v = quotient_log_mod(L, B.q(), B.M, l, e, g, ev.elementary(fb.reps()[i]).v)) P.logs[i] = *v;
    } else {
      auto crows = detail::rows_mod(core, fb.c_index(), l);
      auto arows = detail::rows_mod(rels, fb.c_index(), l);
      pr.rows = arows.size();
      std::set<u32> core_cols;
      for (auto& r : crows)
        for (auto& [i, v] : r) core_cols.insert(i);
      pr.core_unknowns = core_cols.size();
      {
        std::vector<u32> cols(core_cols.begin(), core_cols.end());
        std::map<u32, u32> ci;
        for (u32 j = 0; j < cols.size(); ++j) ci[cols[j]] = j;
        std::vector<SparseRow> A;
        for (auto& r : crows) {
          SparseRow s;
          for (auto& [i, v] : r) s.emplace_back(ci[i], v);
          A.push_back(s);
        }
        pr.core_kernel_dim = echelon(A, {}, static_cast<u32>(cols.size()), l).kernel_dim();
      }
      std::vector<u32> refs{fb.c_index()};
      for (u32 i : core_cols)
        if (i != fb.c_index()) refs.push_back(i);
      std::map<u32, u64> rel;
      for (u32 ref : refs) {
        std::map<u32, u64> k{{ref, 1}};
        try {
          if (detail::propagate(crows, n, l, k) != 0) continue;
          detail::propagate(arows, n, l, k);
        } catch (const Error& err) {
          if (err.code() != Errc::InconsistentSystem) throw;
          continue;
        }
        rel = std::move(k);
        pr.reference = ref;
        break;
      }
      if (rel.empty()) throw Error(Errc::MoreRelationsNeeded, "no consistent reference for l = " + std::to_string(l));
      // Scale: g g^r = prod f_i(theta)^e_i up to F_q^*.
      Rng rng(opt.seed ^ l);
      auto known = [&](const Place& p) -> std::optional<u64> {
        if (!p.finite()) return 0;
        auto slot = fb.lookup(p);
        if (!slot) return std::nullopt;
        auto it = rel.find(slot->rep);
        if (it == rel.end()) return std::nullopt;
        auto [qs, geo] = shift_weights(B.q(), p.degree(), slot->shift, l);
        u64 v = mulmod(qs, it->second, l);
        if (geo) {
          auto ic = rel.find(fb.c_index());
          if (ic == rel.end()) return std::nullopt;
          v = addmod(v, mulmod(geo, ic->second, l), l);
        }
        return v;
      };
      std::optional<u64> scale;
      for (int attempt = 0; attempt < 16 && !scale; ++attempt) {
        auto s = classical_split(B, g, g, opt.split_degree, opt.split_budget, rng,
                                 [&](const FqPoly& u) { return detail::poly_log(B.curve, u, l, known).has_value(); });
        u64 exps = (s.r + 1) % l;
        if (!exps) continue;
        u64 S = 0;
        for (auto& [u, m] : s.factors) S = addmod(S, mulmod(reduce_signed(m, l), *detail::poly_log(B.curve, u, l, known), l), l);
        u64 Rg = mulmod(S, invmod(exps, l), l);
        if (Rg) scale = invmod(Rg, l);
      }
      if (!scale) throw Error(Errc::DescentFailed, "cannot normalize logs mod " + std::to_string(l));
      for (auto& [i, v] : rel) P.logs[i] = mulmod(v, *scale, l);
      pr.inconsistent_rows = detail::propagate(arows, n, l, rel);
    }
    for (auto it = P.logs.begin(); it != P.logs.end();) {
      if (!check_part_log(B, ev, g, fb.reps()[it->first], P, it->second)) {
        ++pr.rejected;
        it = P.logs.erase(it);
      } else {
        ++it;
      }
    }
    pr.solved = P.logs.size();
    T.parts.push_back(std::move(P));
    rep.parts.push_back(pr);
  }
  rep.complete = T.complete_count(n);
  if (report) *report = rep;
  return T;
}

struct DlogResult {
  u64 x = 0;            // log mod M
  bool verified = false;  // z / g^x in F_q^*
  std::optional<u64> full;  // log mod q^k - 1
  SplitExpr split;
  size_t descents = 0;
};

// log_g z mod M; BSGS parts directly, index-calculus parts by a classical
// split whose places all have known logs, with bilinear descent for missing
// places of degree <= 8 when enabled.
inline DlogResult dlog(const EllipticBasis& B, const FactorBase& fb, const LogTable& T, const ExtElem& z,
                       const SolveOptions& opt = {}) {
  const Ext& L = B.L();
  if (L.is_zero(z)) throw Error(Errc::DescentFailed, "zero has no logarithm");
  DlogResult res;
  std::vector<size_t> ic;
  for (size_t i = 0; i < T.parts.size(); ++i)
    if (!T.parts[i].bsgs) ic.push_back(i);
  Model model(B.curve, B.td);
  std::map<Place, std::vector<u64>> memo;  // descended places, one value per ic part
  std::function<std::optional<std::vector<u64>>(const Place&, int)> place_logs = [&](const Place& p,
                                                                                     int depth) -> std::optional<std::vector<u64>> {
    std::vector<u64> out;
    bool ok = true;
    for (size_t i : ic) {
      auto v = T.place_log(fb, p, i);
      if (!v) {
        ok = false;
        break;
      }
      out.push_back(*v);
    }
    if (ok) return out;
    auto m = memo.find(p);
    if (m != memo.end()) return m->second;
    if (!opt.descent_budget || depth > 1 || p.degree() < 4 || p.degree() > 8) return std::nullopt;
    auto step = bilinear_descend(
        B, model, p, opt.ta, opt.tb, [&](const Place& x) { return place_logs(x, depth + 1).has_value(); }, opt.descent_budget);
    if (!step) return std::nullopt;
    std::vector<u64> vals;
    for (size_t j = 0; j < ic.size(); ++j) {
      const u64 mod = T.parts[ic[j]].mod;
      u64 s = 0;
      for (auto& [x, c] : step->others) s = addmod(s, mulmod(reduce_signed(c, mod), (*place_logs(x, depth + 1))[j], mod), mod);
      u64 mm = static_cast<u64>(step->mult) % mod;
      if (gcd_u64(mm, mod) != 1) return std::nullopt;
      vals.push_back(mulmod(s, invmod(mm, mod), mod));
    }
    ++res.descents;
    memo[p] = vals;
    return vals;
  };
  auto ulog = [&](const FqPoly& u) -> std::optional<std::vector<u64>> {
    std::vector<u64> acc(ic.size(), 0);
    const Divisor d = poly_to_divisor(B.curve, u);
    for (auto& [p, nn] : d.terms()) {
      if (!p.finite()) continue;
      auto v = place_logs(p, 0);
      if (!v) return std::nullopt;
      for (size_t j = 0; j < ic.size(); ++j) {
        u64 mod = T.parts[ic[j]].mod;
        acc[j] = addmod(acc[j], mulmod(reduce_signed(nn, mod), (*v)[j], mod), mod);
      }
    }
    return acc;
  };
  u64 x = 0, m = 1;
  if (!ic.empty()) {
    Rng rng(opt.seed);
    res.split = classical_split(B, z, T.g, opt.split_degree, opt.split_budget, rng,
                                [&](const FqPoly& u) { return ulog(u).has_value(); });
    for (size_t j = 0; j < ic.size(); ++j) {
      const u64 mod = T.parts[ic[j]].mod;
      u64 s = submod(0, res.split.r % mod, mod);
      for (auto& [u, e] : res.split.factors) s = addmod(s, mulmod(reduce_signed(e, mod), (*ulog(u))[j], mod), mod);
      std::tie(x, m) = crt_pair(x, m, s, mod);
    }
  }
  for (auto& P : T.parts) {
    if (!P.bsgs) continue;
    auto v = quotient_log_mod(L, B.q(), B.M, P.l, P.e, T.g, z);
    if (!v) throw Error(Errc::NotInSubgroup, "BSGS found no logarithm");
    std::tie(x, m) = crt_pair(x, m, *v, P.mod);
  }
  res.x = x;
  ExtElem u = L.mul(z, L.inv(L.pow(T.g, x)));
  res.verified = L.is_base(u);
  if (res.verified) {
    // F_q^* component: (g^M)^j = u.
    const u64 order = static_cast<u64>(L.order() - 1);
    if (auto j = bsgs_oracle(L, L.pow(T.g, B.M), u, B.q() - 1)) {
      u64 X = static_cast<u64>((static_cast<u128>(B.M) * *j + x) % order);
      if (L.eq(L.pow(T.g, X), z)) res.full = X;
    }
  }
  return res;
}

}  // namespace ebdl
