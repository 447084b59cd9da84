#include <gtest/gtest.h>

#include <cstdio>

#include "ebdl/harvest/sieve.hpp"

using namespace ebdl;

namespace {

const EllipticBasis& small_basis() {
  static const EllipticBasis B = [] {
    auto s = search_curve(5, 1, 9, 0);
    return build_basis(s.curve, s.P1, 9, 0, 3, s.mu);
  }();
  return B;
}

// q = 7, k = 5 with x(P_1) != 0, so no coefficient of the k1k2 constraint degenerates.
const EllipticBasis& generic_basis() {
  static const EllipticBasis B = [] {
    auto s = search_curve(7, 1, 5, 1);
    return build_basis(s.curve, s.P1, 5, 1, 3, s.mu);
  }();
  return B;
}

const FactorBase& small_fb() {
  static const FactorBase fb(small_basis(), 5);
  return fb;
}

TriPoly Up(const Fq& f) { return TriPoly::U(f); }
TriPoly Vp(const Fq& f) { return TriPoly::V(f); }
TriPoly Wp(const Fq& f) { return TriPoly::W(f); }

}  // namespace

TEST(FactorBase, ExpansionRecoversEveryPlace) {
  const auto& B = small_basis();
  const auto& fb = small_fb();
  auto places = places_up_to(B.curve, 3);
  size_t orbit_total = 0;
  for (u32 i = 0; i < fb.count_up_to(3); ++i) orbit_total += fb.orbit(i).size();
  EXPECT_EQ(orbit_total, places.size());
  for (auto& p : places) {
    auto s = fb.lookup(p);
    ASSERT_TRUE(s.has_value());
    EXPECT_EQ(translate_place(B.curve, B.td, fb.reps()[s->rep], s->shift), p);
  }
  EXPECT_EQ(fb.reps()[fb.c_index()], point_place(B.field(), B.td.at(-1)));
}

TEST(FactorBase, RepsSortedAndPrefixStable) {
  const auto& B = small_basis();
  FactorBase small(B, 3);
  const auto& big = small_fb();
  ASSERT_EQ(small.size(), big.count_up_to(3));
  for (u32 i = 0; i < small.size(); ++i) EXPECT_EQ(small.reps()[i], big.reps()[i]);
  EXPECT_TRUE(std::is_sorted(big.reps().begin(), big.reps().end()));
}

TEST(FactorBase, ShiftWeightsMatchLogBookkeeping) {
  // q^s L + d c (q^s - 1)/(q - 1), computed by iterating L -> q L + d c.
  const u64 q = 5, M = 488281;
  for (int d = 1; d <= 5; ++d)
    for (i64 s = 0; s < 9; ++s) {
      u64 L = 1234, c = 777, it = L;
      for (i64 i = 0; i < s; ++i) it = (q * it + d * c) % M;
      auto [qs, geo] = shift_weights(q, d, s, M);
      EXPECT_EQ((mulmod(qs, L, M) + mulmod(geo, c, M)) % M, it);
    }
}

TEST(Bracket, BilinearAndAntisymmetric) {
  const Fq& f = small_basis().field();
  Rng rng(3);
  auto rnd = [&] {
    TriPoly t = TriPoly::constant(f, f.random(rng));
    for (int i = 0; i <= 1; ++i)
      for (int j = 0; j <= 1; ++j) t = t + TriPoly::monomial(f, {i, j, 0}, f.random(rng));
    return t;
  };
  for (int it = 0; it < 50; ++it) {
    TriPoly A = rnd(), B = rnd(), C = rnd();
    u32 l = f.random(rng);
    EXPECT_TRUE(bracket(A, A).is_zero());
    EXPECT_EQ(bracket(A, B + C.scaled(l)), bracket(A, B) + bracket(A, C).scaled(l));
    EXPECT_EQ(bracket(A, B) + bracket(B, A), TriPoly::constant(f, 0) - TriPoly::constant(f, 0));
  }
}

TEST(Bracket, GroupIdentities) {
  const Fq& f = small_basis().field();
  TriPoly U = Up(f), V = Vp(f), W = Wp(f), UV = U * V;
  EXPECT_EQ(bracket(U, UV), UV * (V - W));
  EXPECT_EQ(bracket(U, V), V * V - U * W);
  EXPECT_EQ(bracket(UV, V), V * W * (V - U));
  EXPECT_NE(bracket(UV, V), V * W * (V - W));
  EXPECT_EQ(bracket(UV, U + V), V * V * (W - U));
  EXPECT_EQ(bracket(UV, TriPoly::constant(f, 1)), V * (W - U));
  EXPECT_EQ(bracket(U + V, TriPoly::constant(f, 1)), W - U);
  u32 k1 = 2, k2 = 3;
  TriPoly g1 = UV + U.scaled(k1), g2 = UV + V.scaled(k2), one = TriPoly::constant(f, 1);
  EXPECT_EQ(bracket(g1, g2), bracket(U, UV).scaled(k1) + bracket(UV, V).scaled(k2) + bracket(U, V).scaled(f.mul(k1, k2)));
  EXPECT_EQ(bracket(g1, one), V * W + V.scaled(k1) - UV - U.scaled(k1));
  EXPECT_EQ(bracket(g2, one), V * W + W.scaled(k2) - UV - V.scaled(k2));
}

TEST(CoreSieve, HeightBoundsAreExact) {
  for (const EllipticBasis* B : {&small_basis(), &generic_basis()}) {
    FactorBase fb(*B, 3);
    Model m(B->curve, B->td);
    auto r = run_sieve(*B, fb, core_sieve(m), 0, 2);
    const auto& S = r.stats;
    EXPECT_EQ(S.pairs, B->q() * B->q() * B->q());
    EXPECT_EQ(S.degenerate, B->q());  // beta = 0, gamma = alpha
    EXPECT_EQ(S.left_over_bound, 0u);
    EXPECT_EQ(S.right_over_bound, 0u);
    EXPECT_EQ(S.compelled_missing, 0u);
    EXPECT_LE(S.max_left, 3);
    EXPECT_LE(S.max_right, 6);
    EXPECT_EQ(S.emitted, S.smooth);
  }
}

TEST(CoreSieve, DegeneratePairIsRejected) {
  const auto& B = small_basis();
  Model m(B.curve, B.td);
  auto s = core_sieve(m);
  for (u32 a = 0; a < B.q(); ++a) {
    auto [A, Bp] = sieve_pair(s, {a, 0, a});
    EXPECT_EQ(A, Bp);
    try {
      pair_divisors(m, s, A, Bp);
      ADD_FAILURE() << "expected DegeneratePair";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::DegeneratePair);
    }
  }
}

TEST(CoreSieve, ScalingAGivesSameRow) {
  const auto& B = small_basis();
  const auto& fb = small_fb();
  Model m(B.curve, B.td);
  auto s = core_sieve(m);
  Rng rng(9);
  int compared = 0;
  for (int it = 0; it < 30; ++it) {
    std::vector<u32> prm{static_cast<u32>(rng() % 5), static_cast<u32>(rng() % 5), static_cast<u32>(rng() % 5)};
    auto [A, Bp] = sieve_pair(s, prm);
    if (bracket(A, Bp).is_zero()) continue;
    if (degree_profile(pair_divisors(m, s, A, Bp).right, 5).first > 5) continue;
    auto row = [&](const TriPoly& a, const TriPoly& b) {
      auto pd = pair_divisors(m, s, a, b);
      std::vector<std::pair<Place, i64>> lhs;
      for (auto& d : pd.left)
        for (auto& t : to_terms(d)) lhs.push_back(t);
      return make_relation(fb, B, "core", "", lhs, to_terms(pd.right));
    };
    u32 l = 1 + static_cast<u32>(rng() % 4);
    EXPECT_TRUE(row(A, Bp).same_row(row(A.scaled(l), Bp)));
    ++compared;
  }
  EXPECT_GT(compared, 15);
}

TEST(CoreSieve, EveryRowPassesPsi) {
  const auto& B = small_basis();
  const auto& fb = small_fb();
  PsiEvaluator ev(B);
  Model m(B.curve, B.td);
  auto r = run_sieve(B, fb, core_sieve(m), 0, 2);
  ASSERT_GT(r.relations.size(), 50u);
  for (auto& rel : r.relations) {
    EXPECT_TRUE(verify_relation(ev, rel.lhs, rel.rhs));
    EXPECT_TRUE(verify_row(ev, fb, rel));
  }
}

TEST(CoreSieve, MutatedRowFailsPsi) {
  const auto& B = small_basis();
  const auto& fb = small_fb();
  PsiEvaluator ev(B);
  Model m(B.curve, B.td);
  auto r = run_sieve(B, fb, core_sieve(m), 0, 2);
  ASSERT_FALSE(r.relations.empty());
  Relation bad = r.relations.front();
  bad.c = (bad.c + 1) % B.M;
  EXPECT_FALSE(verify_row(ev, fb, bad));
}

TEST(CoreSieve, WorkerCountDoesNotChangeOutput) {
  const auto& B = small_basis();
  const auto& fb = small_fb();
  Model m(B.curve, B.td);
  auto a = run_sieve(B, fb, core_sieve(m), 0, 1);
  auto b = run_sieve(B, fb, core_sieve(m), 0, 4);
  ASSERT_EQ(a.relations.size(), b.relations.size());
  for (size_t i = 0; i < a.relations.size(); ++i) EXPECT_EQ(encode_relation(a.relations[i]), encode_relation(b.relations[i]));
}

TEST(Groups, SpecialGroupResidualHeightFour) {
  for (const EllipticBasis* B : {&small_basis(), &generic_basis()}) {
    FactorBase fb(*B, 4);
    Model m(B->curve, B->td);
    PsiEvaluator ev(*B);
    auto r = run_sieve(*B, fb, special_sieve(m));
    EXPECT_EQ(r.stats.left_over_bound, 0u);
    EXPECT_EQ(r.stats.right_over_bound, 0u);
    EXPECT_EQ(r.stats.compelled_missing, 0u);
    for (auto& rel : r.relations) EXPECT_TRUE(verify_row(ev, fb, rel));
  }
}

TEST(Groups, K1K2ConstraintCutsResidualToSeven) {
  const auto& B = generic_basis();
  FactorBase fb(B, 4);
  Model m(B.curve, B.td);
  auto c = k1k2_constants(m);
  ASSERT_NE(c[2], 0u);
  auto pairs = k1k2_pairs(m);
  EXPECT_GE(pairs.size(), B.q() - 2);
  const Fq& f = B.field();
  for (auto [k1, k2] : pairs) {
    EXPECT_EQ(f.add(f.add(f.mul(k1, c[0]), f.mul(k2, c[1])), f.mul(f.mul(k1, k2), c[2])), 0u);
    auto r = run_sieve(B, fb, k1k2_sieve(m, k1, k2));
    EXPECT_EQ(r.stats.left_over_bound, 0u);
    EXPECT_LE(r.stats.max_right, 7);
  }
  // Off the constraint curve the bracket reaches height 8.
  i64 worst = 0;
  for (u32 k1 = 1; k1 < f.q(); ++k1)
    for (u32 k2 = 1; k2 < f.q(); ++k2) {
      if (f.add(f.add(f.mul(k1, c[0]), f.mul(k2, c[1])), f.mul(f.mul(k1, k2), c[2])) == 0) continue;
      worst = std::max(worst, run_sieve(B, fb, k1k2_sieve(m, k1, k2)).stats.max_right);
    }
  EXPECT_EQ(worst, 8);
}

TEST(Groups, Height5RowsHaveOneNewPlace) {
  const auto& B = small_basis();
  const auto& fb = small_fb();
  Model m(B.curve, B.td);
  PsiEvaluator ev(B);
  auto r = run_sieve(B, fb, height5_sieve(m));
  EXPECT_EQ(r.stats.left_over_bound, 0u);
  EXPECT_LE(r.stats.max_left, 4);
  ASSERT_FALSE(r.relations.empty());
  for (auto& rel : r.relations) {
    int big = 0;
    for (auto& [p, n] : rel.rhs)
      if (n > 0 && p.degree() == 5) ++big;
    EXPECT_EQ(big, 1);
    for (auto& [p, n] : rel.lhs) EXPECT_LE(p.degree(), 4);
    EXPECT_TRUE(verify_row(ev, fb, rel));
  }
}

TEST(RelationsFile, RoundTrip) {
  const auto& B = small_basis();
  const auto& fb = small_fb();
  Model m(B.curve, B.td);
  auto r = run_sieve(B, fb, special_sieve(m));
  std::string path = ::testing::TempDir() + "/ebdl_relations.txt";
  save_relations(r.relations, path);
  auto back = load_relations(path);
  ASSERT_EQ(back.size(), r.relations.size());
  for (size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(encode_relation(back[i]), encode_relation(r.relations[i]));
    EXPECT_TRUE(back[i].same_row(r.relations[i]));
  }
  std::remove(path.c_str());
  EXPECT_THROW(decode_relation("core|1,2|0:1"), Error);
  EXPECT_THROW(decode_relation("core|1|x:1|c:0"), Error);
}

TEST(RelationsFile, DedupKeepsFirst) {
  Relation a{"core", "0,1,2", {{0, 3}}, 1, {}, {}};
  Relation b{"core", "0,1,3", {{0, 3}}, 1, {}, {}};
  Relation z{"core", "0,1,4", {}, 0, {}, {}};
  auto d = dedup_relations({a, b, z});
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].params, "0,1,2");
}
