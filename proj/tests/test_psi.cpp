#include <gtest/gtest.h>

#include "ebdl/divisor/translate.hpp"
#include "ebdl/psi/psi.hpp"
#include "fixtures.hpp"

using namespace ebdl;

namespace {

const EllipticBasis& small_basis() {
  static const EllipticBasis B = [] {
    auto s = search_curve(5, 1, 9, 0);
    return build_basis(s.curve, s.P1, 9, 0, 3, s.mu);
  }();
  return B;
}

CurveFunction random_function(const Curve& c, u32 x1, Rng& rng) {
  const Fq& f = *c.field;
  for (;;) {
    auto rp = [&](int d) {
      std::vector<u32> v(d + 1);
      for (auto& x : v) x = f.random(rng);
      return FqPoly(f, v);
    };
    auto g = fn::make(rp(static_cast<int>(rng() % 5)), rp(static_cast<int>(rng() % 3)), static_cast<int>(rng() % 3), x1);
    if (!g.is_zero()) return g;
  }
}

TriPoly random_uv(const Fq& f, Rng& rng, int maxdeg) {
  TriPoly t = TriPoly::constant(f, 0);
  for (int i = 0; i <= maxdeg; ++i)
    for (int j = 0; i + j <= maxdeg; ++j) t = t + TriPoly::monomial(f, {i, j, 0}, f.random(rng));
  return t;
}

}  // namespace

TEST(NdTable, CountsAndInvertibility) {
  const auto& B = small_basis();
  auto nd1 = nd_build(B.curve, 9, 1);
  EXPECT_EQ(nd1.at(1), B.curve.N);
  // direct count over F_25
  Rng rng(1);
  auto L2 = ext_of_degree(B.curve.field, 2);
  u64 n2 = fixtures::ext_points(B.curve, *L2, rng).size() + 1;
  i64 t = B.curve.t, q = 5;
  EXPECT_EQ(static_cast<i64>(n2), q * q + 1 - (t * t - 2 * q));
  EXPECT_EQ(nd_build(B.curve, 9, 3).at(2), n2);
  EXPECT_TRUE(nd_build(B.curve, 9, 3).inv_ok);
  // N_5 = 3069 = 3^2 * 11 * 31 shares 31 with M = 19 * 31 * 829
  auto nd5 = nd_build(B.curve, 9, 5);
  EXPECT_EQ(nd5.at(5), 3069u);
  EXPECT_FALSE(nd5.inv_ok);
}

TEST(Psi, ZeroAndVerticalLines) {
  const auto& B = small_basis();
  const Ext& L = B.L();
  PsiEvaluator ev(B);
  EXPECT_EQ(ev.eval(Divisor()), psi_one(L));
  for (u64 j = 1; j < 9; ++j) {
    Divisor d;
    d.add(point_place(B.field(), B.td.P[j]), 1);
    d.add(point_place(B.field(), B.td.at(-static_cast<i64>(j))), 1);
    d.add(infinity_place(), -2);
    EXPECT_EQ(ev.eval(d), psi_canon(L, L.sub(B.theta, L.embed(B.td.x(j)))));
  }
  Divisor bad;
  bad.add(point_place(B.field(), B.td.P[1]), 1);
  EXPECT_THROW(ev.eval(bad), Error);
}

TEST(Psi, PrincipalDivisorsEvaluateTheFunction) {
  const auto& B = small_basis();
  const Ext& L = B.L();
  PsiEvaluator ev(B);
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    auto g = random_function(B.curve, B.td.x(1), rng);
    EXPECT_EQ(ev.eval(divisor_of(B.curve, g)), psi_canon(L, fn::eval(L, g, B.F())));
  }
}

TEST(Psi, Multiplicative) {
  const auto& B = small_basis();
  const Ext& L = B.L();
  PsiEvaluator ev(B);
  auto places = places_up_to(B.curve, 3);
  Rng rng(9);
  auto random_divisor = [&] {
    Divisor d;
    for (int i = 0; i < 4; ++i) {
      const Place& p = places[rng() % places.size()];
      i64 n = static_cast<i64>(rng() % 7) - 3;
      d = d + elementary(p).times(n);
    }
    return d;
  };
  for (int i = 0; i < 100; ++i) {
    Divisor a = random_divisor(), b = random_divisor();
    EXPECT_EQ(ev.eval(a + b), psi_mul(L, ev.eval(a), ev.eval(b)));
    auto g = random_function(B.curve, B.td.x(1), rng), h = random_function(B.curve, B.td.x(1), rng);
    EXPECT_EQ(ev.eval(divisor_of(B.curve, fn::mul(B.curve, g, h))),
              psi_mul(L, ev.eval(divisor_of(B.curve, g)), ev.eval(divisor_of(B.curve, h))));
  }
}

TEST(Psi, MillerChainsAgree) {
  const auto& B = small_basis();
  PsiEvaluator a(B, MillerChain::DoubleAndAdd), b(B, MillerChain::Additive);
  for (auto& p : places_up_to(B.curve, 3)) EXPECT_EQ(a.elementary(p), b.elementary(p)) << encode_place(B.field(), p);
  for (auto& P : all_points(B.curve)) {
    if (P.inf) continue;
    // a multiple of the order other than N_1 yields the same class
    const Ext& L = B.L();
    ExtElem f9 = miller(B.curve, L, P, 9, B.F()), f18 = miller(B.curve, L, P, 18, B.F(), MillerChain::Additive);
    EXPECT_EQ(psi_canon(L, L.mul(f9, f9)), psi_canon(L, f18));
  }
}

TEST(Psi, TranslationUsesExponentD) {
  const auto& B = small_basis();
  const Ext& L = B.L();
  PsiEvaluator ev(B);
  Place minus_p1 = point_place(B.field(), B.td.at(-1));
  PsiValue c = ev.elementary(minus_p1);
  Rng rng(4);
  auto places = places_up_to(B.curve, 3);
  int checked = 0, literal_holds = 0;
  while (checked < 50) {
    const Place& p = places[rng() % places.size()];
    if (torsion_index(B.curve, B.td, p)) continue;
    int d = p.degree();
    PsiValue moved = ev.elementary(translate_place(B.curve, B.td, p, 1));
    PsiValue base = psi_frobenius(L, ev.elementary(p));
    EXPECT_EQ(moved, psi_mul(L, base, psi_pow(L, c, d, B.M))) << encode_place(B.field(), p);
    u64 nd = B.nd.nd_of_degree(d);
    literal_holds += moved == psi_mul(L, base, psi_pow(L, c, static_cast<i64>(d * nd), B.M));
    ++checked;
  }
  // the exponent d * N_d instead of d fails on this instance
  EXPECT_LT(literal_holds, checked);
}

TEST(Psi, CommutativeDiagram) {
  const auto& B = small_basis();
  const Ext& L = B.L();
  const Fq& f = B.field();
  PsiEvaluator ev(B);
  Model m(B.curve, B.td);
  Rng rng(12);
  int done = 0;
  while (done < 100) {
    TriPoly A = random_uv(f, rng, 1 + rng() % 2), Bp = random_uv(f, rng, 1 + rng() % 2);
    TriPoly br = bracket(A, Bp);
    if (br.is_zero() || Bp.is_zero()) continue;
    Divisor left = divisor_of(B.curve, m.phi_star(Bp));
    bool degenerate = false;
    for (u32 a = 0; a < f.q(); ++a) {
      TriPoly t = A - Bp.scaled(a);
      if (t.is_zero()) degenerate = true;
      if (degenerate) break;
      left = left + divisor_of(B.curve, m.phi_star(t));
    }
    if (degenerate) continue;
    Divisor right = divisor_of(B.curve, m.phi_star(br));
    EXPECT_EQ(ev.eval(left), ev.eval(right));
    auto t = phi_of_F(B);
    EXPECT_EQ(ev.eval(right), psi_canon(L, br.eval(L, t[0], t[1], t[2])));
    ++done;
  }
}

TEST(Psi, VerifyRelation) {
  const auto& B = small_basis();
  PsiEvaluator ev(B);
  Rng rng(5);
  auto g = random_function(B.curve, B.td.x(1), rng);
  Divisor d = divisor_of(B.curve, g);
  std::vector<std::pair<Place, i64>> lhs(d.terms().begin(), d.terms().end());
  EXPECT_TRUE(verify_relation(ev, lhs, lhs));
  int rejected = 0, tries = 0;
  for (auto& [p, n] : lhs) {
    if (!p.finite()) continue;
    auto mut = lhs;
    for (auto& [pp, nn] : mut)
      if (pp == p) nn += 1;
    ++tries;
    rejected += !verify_relation(ev, mut, lhs);
  }
  EXPECT_EQ(rejected, tries);
}
