#include <gtest/gtest.h>

#include <cstdio>

#include "ebdl/solve/solver.hpp"

using namespace ebdl;

namespace {

struct Instance {
  EllipticBasis B;
  FactorBase fb;
  std::vector<Relation> rels;
  ExtElem g;
  LogTable T;
  SolveReport report;
  SolveOptions opt;
};

const Instance& inst() {
  static const Instance I = [] {
    Instance I;
    auto s = search_curve(5, 1, 9, 0);
    I.B = build_basis(s.curve, s.P1, 9, 0, 3, s.mu);
    I.fb = FactorBase(I.B, 5);
    Model m(I.B.curve, I.B.td);
    auto add = [&](const SieveBasis& sb) {
      for (auto& r : run_sieve(I.B, I.fb, sb, 0, 2).relations) I.rels.push_back(r);
    };
    add(core_sieve(m));
    add(special_sieve(m));
    for (auto [k1, k2] : k1k2_pairs(m)) add(k1k2_sieve(m, k1, k2));
    add(height5_sieve(m));
    I.rels = dedup_relations(I.rels);
    I.g = primitive_element(I.B.L());
    I.opt.small_prime_threshold = 20;
    I.T = solve_logs(I.B, I.fb, I.rels, I.g, I.opt, &I.report);
    return I;
  }();
  return I;
}

std::vector<u64> trial_primes(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d)
    while (n % d == 0) {
      out.push_back(d);
      n /= d;
    }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

TEST(FactorModulus, MatchesTrialDivision) {
  for (u64 M : {488281ull, 2801ull, 137257ull, 1000000007ull, 720720ull, 4294967297ull}) {
    auto fs = factor_modulus(M);
    std::vector<u64> flat;
    for (auto& [p, e] : fs)
      for (int i = 0; i < e; ++i) flat.push_back(p);
    EXPECT_EQ(flat, trial_primes(M)) << M;
  }
  EXPECT_EQ(factor_modulus(488281), (std::vector<std::pair<u64, int>>{{19, 1}, {31, 1}, {829, 1}}));
  EXPECT_THROW(factor_modulus(1), Error);
}

TEST(LinAlg, KernelOfPlantedSystem) {
  Rng rng(5);
  const u64 l = 829;
  for (int it = 0; it < 20; ++it) {
    const u32 n = 6 + static_cast<u32>(rng() % 10);
    std::vector<u64> x(n);
    for (auto& v : x) v = 1 + rng() % (l - 1);
    std::vector<SparseRow> rows;
    for (u32 r = 0; r < n + 4; ++r) {
      SparseRow row;
      u64 s = 0;
      for (u32 j = 0; j + 1 < n; ++j) {
        u64 v = rng() % l;
        if (v) row.emplace_back(j, v);
        s = addmod(s, mulmod(v, x[j], l), l);
      }
      row.emplace_back(n - 1, mulmod(submod(0, s, l), invmod(x[n - 1], l), l));
      rows.push_back(row);
    }
    auto v = solve_mod(rows, n, l, 0);
    u64 s = invmod(x[0], l);
    for (u32 j = 0; j < n; ++j) EXPECT_EQ(v[j], mulmod(x[j], s, l));
    auto dup = rows;
    dup.insert(dup.end(), rows.begin(), rows.end());
    EXPECT_EQ(solve_mod(dup, n, l, 0), v);
    std::vector<SparseRow> few(rows.begin(), rows.begin() + n / 2);
    EXPECT_THROW(solve_mod(few, n, l, 0), Error);
  }
}

TEST(LinAlg, InconsistentSystemDetected) {
  std::vector<SparseRow> A{{{0, 1}, {1, 1}}, {{0, 2}, {1, 2}}};
  EXPECT_THROW(determined_unknowns(A, {1, 3}, 2, 7), Error);
  auto x = determined_unknowns({{{0, 1}}, {{0, 1}, {1, 1}}}, {3, 5}, 2, 7);
  ASSERT_TRUE(x[0] && x[1]);
  EXPECT_EQ(*x[0], 3u);
  EXPECT_EQ(*x[1], 2u);
  auto y = determined_unknowns({{{0, 1}, {1, 1}}, {{2, 1}}}, {1, 4}, 3, 7);
  EXPECT_FALSE(y[0]);
  EXPECT_FALSE(y[1]);
  ASSERT_TRUE(y[2]);
  EXPECT_EQ(*y[2], 4u);
}

TEST(Oracles, BsgsPlantedAndIdentity) {
  const auto& I = inst();
  const Ext& L = I.B.L();
  const u64 n = static_cast<u64>(L.order() - 1);
  EXPECT_EQ(bsgs_oracle(L, I.g, L.one(), n), std::optional<u64>(0));
  Rng rng(1);
  for (int it = 0; it < 10; ++it) {
    u64 x = rng() % n;
    EXPECT_EQ(bsgs_oracle(L, I.g, L.pow(I.g, x), n), std::optional<u64>(x));
  }
  // An element outside <g^2> has no log there.
  EXPECT_FALSE(bsgs_oracle(L, L.pow(I.g, 2), I.g, n / 2).has_value());
}

TEST(Oracles, BsgsAgreesWithRho) {
  const auto& I = inst();
  const Ext& L = I.B.L();
  auto fac = factor_modulus(I.B.M);
  Rng rng(2);
  for (int it = 0; it < 20; ++it) {
    ExtElem z = L.random(rng);
    if (L.is_zero(z)) continue;
    auto a = quotient_log(L, I.B.q(), I.B.M, fac, I.g, z, DlogMethod::Bsgs);
    auto b = quotient_log(L, I.B.q(), I.B.M, fac, I.g, z, DlogMethod::Rho);
    ASSERT_TRUE(a && b);
    EXPECT_EQ(*a, *b);
  }
}

TEST(PolyToDivisor, VerticalLinesAndDegree) {
  const auto& I = inst();
  const Curve& c = I.B.curve;
  const Fq& f = I.B.field();
  for (u64 j = 1; j < I.B.k(); ++j) {
    Divisor d = poly_to_divisor(c, FqPoly::linear(f, I.B.td.x(j)));
    Divisor want;
    want.add(point_place(f, I.B.td.at(static_cast<i64>(j))), 1);
    want.add(point_place(f, I.B.td.at(-static_cast<i64>(j))), 1);
    want.add(infinity_place(), -2);
    EXPECT_EQ(d, want);
  }
  Rng rng(4);
  int inert = 0;
  for (int it = 0; it < 200; ++it) {
    FqPoly u = random_monic(f, 1 + static_cast<int>(rng() % 4), rng);
    if (!is_irreducible(u)) continue;
    Divisor d = poly_to_divisor(c, u);
    EXPECT_EQ(d.degree(), 0);
    EXPECT_EQ(d, divisor_of(c, fn::from_x_poly(u, I.B.td.x(1))));
    for (auto& [p, n] : d.terms())
      if (p.kind == PlaceKind::Inert) {
        EXPECT_EQ(p.degree(), 2 * u.deg());
        ++inert;
      }
  }
  EXPECT_GT(inert, 0);
}

TEST(ClassicalSplit, ReconstructsTarget) {
  const auto& I = inst();
  const Ext& L = I.B.L();
  const Fq& f = I.B.field();
  Rng rng(6);
  // theta - x_j is already a single factor
  auto s0 = classical_split(I.B, L.sub(I.B.theta, L.embed(I.B.td.x(2))), I.g, 3, 10, rng);
  EXPECT_EQ(s0.r, 0u);
  ASSERT_EQ(s0.factors.size(), 1u);
  EXPECT_EQ(s0.factors[0].first, FqPoly::linear(f, I.B.td.x(2)));
  EXPECT_TRUE(classical_split(I.B, L.embed(3), I.g, 3, 10, rng).factors.empty());
  for (int it = 0; it < 20; ++it) {
    ExtElem z = L.random(rng);
    if (L.is_zero(z)) continue;
    auto s = classical_split(I.B, z, I.g, 4, 10000, rng);
    for (auto& [u, e] : s.factors) EXPECT_LE(u.deg(), 4);
    ExtElem y = L.mul(z, L.pow(I.g, s.r));
    EXPECT_TRUE(L.is_base(L.div(eval_split(I.B, s), y)));
  }
}

TEST(Solve, ReportShape) {
  const auto& I = inst();
  ASSERT_EQ(I.report.parts.size(), 3u);
  EXPECT_TRUE(I.report.parts[0].bsgs);
  EXPECT_FALSE(I.report.parts[1].bsgs);
  EXPECT_FALSE(I.report.parts[2].bsgs);
  for (auto& p : I.report.parts) {
    EXPECT_EQ(p.rejected, 0u);
    EXPECT_EQ(p.inconsistent_rows, 0u);
    if (!p.bsgs) {
      EXPECT_EQ(p.core_kernel_dim, 1);
    }
  }
  // Every rep of degree <= 4 is solved.
  for (u32 i = 0; i < I.fb.count_up_to(4); ++i) EXPECT_TRUE(I.T.rep_log(i).has_value()) << i;
}

TEST(Solve, LogsAgreeWithBsgsOfPsi) {
  const auto& I = inst();
  PsiEvaluator ev(I.B);
  auto fac = factor_modulus(I.B.M);
  int checked = 0;
  for (u32 i = 0; i < I.fb.size() && checked < 20; i += 3) {
    auto v = I.T.rep_log(i);
    if (!v) continue;
    auto o = quotient_log(I.B.L(), I.B.q(), I.B.M, fac, I.g, ev.elementary(I.fb.reps()[i]).v);
    ASSERT_TRUE(o.has_value());
    EXPECT_EQ(*v, *o);
    for (auto& P : I.T.parts) EXPECT_EQ(*v % P.mod, P.logs.at(i));
    ++checked;
  }
  EXPECT_EQ(checked, 20);
}

TEST(Solve, HeldOutRelationsHold) {
  const auto& I = inst();
  Rng rng(8);
  int used = 0;
  for (int it = 0; it < 500 && used < 50; ++it) {
    const auto& r = I.rels[rng() % I.rels.size()];
    u64 s = 0;
    bool ok = true;
    for (auto& [i, v] : r.row) {
      auto x = I.T.rep_log(i);
      if (!x) {
        ok = false;
        break;
      }
      s = addmod(s, mulmod(v, *x, I.B.M), I.B.M);
    }
    if (!ok) continue;
    s = addmod(s, mulmod(r.c, *I.T.rep_log(I.fb.c_index()), I.B.M), I.B.M);
    EXPECT_EQ(s, 0u) << encode_relation(r);
    ++used;
  }
  EXPECT_EQ(used, 50);
}

TEST(Solve, ExtraRowsDoNotMoveTheSolution) {
  const auto& I = inst();
  std::vector<Relation> core;
  for (auto& r : I.rels)
    if (r.mode == "core" || r.mode == "special") core.push_back(r);
  auto T = solve_logs(I.B, I.fb, core, I.g, I.opt);
  size_t common = 0;
  for (u32 i = 0; i < I.fb.size(); ++i) {
    auto a = T.rep_log(i), b = I.T.rep_log(i);
    if (a && b) {
      EXPECT_EQ(*a, *b);
      ++common;
    }
  }
  EXPECT_GE(common, I.fb.count_up_to(3));
}

TEST(Solve, LogsFileRoundTrip) {
  const auto& I = inst();
  std::string path = ::testing::TempDir() + "/ebdl_logs.txt";
  save_logs(I.T, I.B, I.fb, path);
  auto T = load_logs(I.B, I.fb, path);
  std::remove(path.c_str());
  EXPECT_EQ(T.M, I.T.M);
  EXPECT_EQ(T.g, I.T.g);
  ASSERT_EQ(T.parts.size(), I.T.parts.size());
  for (size_t i = 0; i < T.parts.size(); ++i) {
    EXPECT_EQ(T.parts[i].mod, I.T.parts[i].mod);
    EXPECT_EQ(T.parts[i].bsgs, I.T.parts[i].bsgs);
    EXPECT_EQ(T.parts[i].logs, I.T.parts[i].logs);
  }
}

TEST(Dlog, PlantedAndGenerator) {
  const auto& I = inst();
  const Ext& L = I.B.L();
  auto r1 = dlog(I.B, I.fb, I.T, I.g, I.opt);
  EXPECT_EQ(r1.x, 1u);
  EXPECT_EQ(r1.full, std::optional<u64>(1));
  auto r2 = dlog(I.B, I.fb, I.T, L.pow(I.g, 12345), I.opt);
  EXPECT_EQ(r2.x, 12345u % I.B.M);
  EXPECT_TRUE(r2.verified);
  EXPECT_EQ(r2.full, std::optional<u64>(12345));
  auto r3 = dlog(I.B, I.fb, I.T, L.embed(2), I.opt);
  EXPECT_EQ(r3.x, 0u);
  ASSERT_TRUE(r3.full.has_value());
  EXPECT_EQ(L.pow(I.g, *r3.full), L.embed(2));
}

TEST(Dlog, RandomTargetsMatchBsgs) {
  const auto& I = inst();
  const Ext& L = I.B.L();
  auto fac = factor_modulus(I.B.M);
  Rng rng(10);
  for (int it = 0; it < 10; ++it) {
    ExtElem z = L.random(rng);
    if (L.is_zero(z)) continue;
    auto r = dlog(I.B, I.fb, I.T, z, I.opt);
    EXPECT_TRUE(r.verified);
    EXPECT_TRUE(L.is_base(L.div(z, L.pow(I.g, r.x))));
    EXPECT_EQ(std::optional<u64>(r.x), quotient_log(L, I.B.q(), I.B.M, fac, I.g, z));
    ASSERT_TRUE(r.full.has_value());
    EXPECT_EQ(L.pow(I.g, *r.full), z);
  }
}

TEST(BilinearDescent, ShapeCounts) {
  auto s21 = descent_shape(2, 1);
  EXPECT_EQ(s21.free_a.size(), 6u);  // 4 t_a - 2
  EXPECT_EQ(s21.free_b.size(), 3u);
  EXPECT_EQ(s21.head_a, (TriPoly::Exp{2, 1, 0}));
  EXPECT_EQ(s21.head_b, (TriPoly::Exp{1, 1, 0}));
  auto s11 = descent_shape(1, 1);
  EXPECT_EQ(s11.free_a.size(), 2u);
  EXPECT_EQ(s11.free_b.size(), 2u);
  EXPECT_EQ(descent_monomials(3).size(), 12u);
}

TEST(BilinearDescent, StepPassesPsi) {
  const auto& I = inst();
  Model m(I.B.curve, I.B.td);
  PsiEvaluator ev(I.B);
  auto known = [](const Place& p) { return p.degree() <= 5; };
  int found = 0;
  for (auto& p : places_up_to(I.B.curve, 6)) {
    if (p.degree() < 5 || found >= 3) continue;
    auto step = bilinear_descend(I.B, m, p, 2, 1, known, 4000);
    if (!step) continue;
    EXPECT_TRUE(verify_relation(ev, step->lhs, step->rhs));
    EXPECT_GT(step->mult, 0);
    std::vector<std::pair<Place, i64>> lhs{{p, step->mult}};
    EXPECT_TRUE(verify_relation(ev, lhs, step->others));
    ++found;
  }
  EXPECT_GT(found, 0);
}
