#include <gtest/gtest.h>

#include <set>

#include "ebdl/algebra/ext.hpp"

using namespace ebdl;

namespace {

// Schoolbook product of digit vectors modulo the field modulus; independent
// of the log tables.
u32 digit_mul(const Fq& f, u32 a, u32 b) {
  const u32 p = f.p(), m = f.m();
  auto da = f.digits(a), db = f.digits(b);
  std::vector<i64> t(2 * m, 0);
  for (u32 i = 0; i < m; ++i)
    for (u32 j = 0; j < m; ++j) t[i + j] += i64{da[i]} * db[j];
  const auto& mod = f.modulus();
  for (u32 i = 2 * m - 1; i-- > m;)
    for (u32 j = 0; j < m; ++j) t[i - m + j] -= t[i] * mod[j];
  std::vector<u32> r(m);
  for (u32 i = 0; i < m; ++i) r[i] = static_cast<u32>(((t[i] % p) + p) % p);
  return f.from_digits(r);
}

int gauss_count(u64 q, int n) {
  // monic irreducibles of degree n over F_q for n in {1..4}
  switch (n) {
    case 1: return static_cast<int>(q);
    case 2: return static_cast<int>((q * q - q) / 2);
    case 3: return static_cast<int>((q * q * q - q) / 3);
    case 4: return static_cast<int>((q * q * q * q - q * q) / 4);
  }
  return -1;
}

FqPoly expand(const std::vector<std::pair<FqPoly, int>>& fs, const Fq& f) {
  FqPoly r = FqPoly::constant(f, f.one());
  for (auto& [g, m] : fs)
    for (int i = 0; i < m; ++i) r = r * g;
  return r;
}

}  // namespace

TEST(FieldMake, PrimeFieldHasModulusX) {
  auto f = field_make(5, 1, 123);
  EXPECT_EQ(f->q(), 5u);
  EXPECT_EQ(f->modulus(), (std::vector<u32>{0, 1}));
}

TEST(FieldMake, F25ModulusHasNoRoots) {
  auto f = field_make(5, 2, 0);
  ASSERT_EQ(f->q(), 25u);
  const auto& mod = f->modulus();
  for (u32 x = 0; x < 5; ++x) {
    u32 v = (mod[0] + mod[1] * x + mod[2] * x * x) % 5;
    EXPECT_NE(v, 0u) << "root " << x;
  }
}

TEST(FieldMake, Rejections) {
  try {
    field_make(4, 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotPrime);
  }
  try {
    field_make(3, 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CharTooSmall);
  }
  try {
    field_make(1031, 2, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::FieldTooLarge);
  }
}

TEST(FieldMake, DeterministicPerSeed) {
  EXPECT_EQ(field_make(7, 3, 11)->modulus(), field_make(7, 3, 11)->modulus());
}

TEST(Fq, TableArithmeticMatchesSchoolbook) {
  for (auto [p, m] : {std::pair<u32, u32>{5, 2}, {7, 3}, {11, 2}, {13, 1}}) {
    auto f = field_make(p, m, 1);
    for (u32 a = 0; a < f->q(); a += 1 + f->q() / 60)
      for (u32 b = 0; b < f->q(); ++b) {
        ASSERT_EQ(f->mul(a, b), digit_mul(*f, a, b));
        if (b) ASSERT_EQ(f->mul(f->div(a, b), b), a);
      }
  }
}

TEST(Fq, EncodingIsCanonical) {
  auto f = field_make(5, 3, 2);
  std::set<std::string> seen;
  for (u32 a = 0; a < f->q(); ++a) {
    auto s = f->encode(a);
    EXPECT_EQ(f->decode(s), a);
    EXPECT_TRUE(seen.insert(s).second);
  }
  EXPECT_EQ(f->encode(f->from_digits({3, 0, 1})), "3,0,1");
}

TEST(Fq, FrobeniusIsAdditive) {
  Rng rng(7);
  for (auto [p, m] : {std::pair<u32, u32>{5, 2}, {7, 2}, {11, 2}, {5, 4}}) {
    auto f = field_make(p, m, 3);
    for (int i = 0; i < 1000; ++i) {
      u32 a = f->random(rng), b = f->random(rng);
      EXPECT_EQ(f->pow(f->add(a, b), p), f->add(f->pow(a, p), f->pow(b, p)));
    }
  }
}

TEST(Fq, SquareRoots) {
  auto f = field_make(7, 2, 5);
  int squares = 0;
  for (u32 a = 0; a < f->q(); ++a) {
    u32 r;
    if (f->sqrt(a, r)) {
      ++squares;
      EXPECT_EQ(f->mul(r, r), a);
    }
  }
  EXPECT_EQ(squares, 25);
}

TEST(PolyFactor, XSquaredPlusOneOverF5) {
  auto f = field_make(5, 1, 0);
  FqPoly g(*f, {1, 0, 1});
  auto fs = poly_factor(g);
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs[0].first, FqPoly(*f, {2, 1}));
  EXPECT_EQ(fs[1].first, FqPoly(*f, {3, 1}));
  EXPECT_EQ(fs[0].second, 1);
  EXPECT_EQ(fs[1].second, 1);
}

TEST(PolyFactor, IrreducibleIsFixedPoint) {
  auto f = field_make(7, 1, 0);
  Rng rng(1);
  for (int n = 1; n <= 6; ++n) {
    FqPoly g(*f);
    do g = random_monic(*f, n, rng);
    while (!is_irreducible(g));
    auto fs = poly_factor(g);
    ASSERT_EQ(fs.size(), 1u);
    EXPECT_EQ(fs[0].first, g);
    EXPECT_EQ(fs[0].second, 1);
  }
}

TEST(PolyFactor, RoundTripRandom) {
  Rng rng(99);
  for (auto [p, m] : {std::pair<u32, u32>{5, 1}, {7, 1}, {5, 2}}) {
    auto f = field_make(p, m, 0);
    for (int i = 0; i < 1000; ++i) {
      int n = 1 + static_cast<int>(rng() % 12);
      FqPoly g = random_monic(*f, n, rng);
      if (i % 5 == 0) g = g * g;  // exercise multiplicities
      if (i % 7 == 0) g = scale(g, f->random_nonzero(rng));
      auto fs = poly_factor(g, rng);
      for (auto& [h, mult] : fs) {
        ASSERT_TRUE(h.is_monic());
        ASSERT_TRUE(is_irreducible(h));
      }
      for (size_t j = 1; j < fs.size(); ++j) ASSERT_TRUE(poly_less(fs[j - 1].first, fs[j].first));
      ASSERT_EQ(scale(expand(fs, *f), g.lead()), g);
    }
  }
}

TEST(PolyFactor, PthPowerInput) {
  auto f = field_make(5, 1, 0);
  FqPoly x = FqPoly::x(*f);
  FqPoly g = poly_pow(x + FqPoly::constant(*f, 1), 5) * poly_pow(x, 2);
  auto fs = poly_factor(g);
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs[0].first, x);
  EXPECT_EQ(fs[0].second, 2);
  EXPECT_EQ(fs[1].second, 5);
}

TEST(Irreducible, GaussCounts) {
  auto f = field_make(5, 1, 0);
  for (int n = 1; n <= 4; ++n) {
    int count = 0;
    u64 total = 1;
    for (int i = 0; i < n; ++i) total *= 5;
    for (u64 idx = 0; idx < total; ++idx) {
      std::vector<u32> c(n + 1);
      u64 t = idx;
      for (int i = 0; i < n; ++i) {
        c[i] = static_cast<u32>(t % 5);
        t /= 5;
      }
      c[n] = 1;
      if (is_irreducible(FqPoly(*f, c))) ++count;
    }
    EXPECT_EQ(count, gauss_count(5, n)) << "degree " << n;
  }
}

TEST(Roots, MatchExhaustiveEvaluation) {
  auto f = field_make(7, 2, 0);
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    FqPoly g = random_monic(*f, 1 + static_cast<int>(rng() % 6), rng);
    auto roots = poly_roots(g, rng);
    std::vector<u32> brute;
    for (u32 x = 0; x < f->q(); ++x)
      if (eval(g, x) == 0) brute.push_back(x);
    EXPECT_EQ(roots, brute);
  }
}

TEST(Ext, RejectsReducibleModulus) {
  auto f = field_make(5, 1, 0);
  try {
    ext_make(f, FqPoly(*f, {1, 0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Reducible);
  }
}

TEST(Ext, DegreeOneIsCopyOfBase) {
  auto f = field_make(7, 1, 0);
  auto e = ext_make(f, FqPoly(*f, {3, 1}));
  for (u32 a = 0; a < 7; ++a)
    for (u32 b = 0; b < 7; ++b) EXPECT_EQ(e->mul(e->embed(a), e->embed(b)), e->embed(f->mul(a, b)));
}

TEST(Ext, FrobeniusThreeWays) {
  auto f = field_make(5, 2, 0);
  Rng rng(5);
  FqPoly I(*f);
  do I = random_monic(*f, 7, rng);
  while (!is_irreducible(I));
  auto e = ext_make(f, I);
  auto theta = e->gen();
  auto by_pow = e->pow(theta, f->q());
  auto by_map = e->frobenius(theta, 1);
  auto by_mod = e->from_poly(powmod(FqPoly::x(*f), f->q(), I));
  EXPECT_EQ(by_pow, by_map);
  EXPECT_EQ(by_pow, by_mod);
  for (int i = 0; i < 100; ++i) {
    auto x = e->random(rng);
    EXPECT_EQ(e->frobenius(e->frobenius(x, 1), e->k() - 1), x);
    EXPECT_EQ(e->frobenius(x, 2), e->pow(x, u128{f->q()} * f->q()));
    auto b = e->embed(f->random(rng));
    EXPECT_EQ(e->frobenius(b, 1), b);
  }
}

TEST(Ext, InverseAndSqrt) {
  auto f = field_make(7, 1, 0);
  auto e = ext_make(f, first_irreducible(*f, 5));
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    auto x = e->random(rng);
    if (e->is_zero(x)) continue;
    EXPECT_EQ(e->mul(x, e->inv(x)), e->one());
    auto sq = e->mul(x, x);
    ExtElem r;
    ASSERT_TRUE(field_sqrt(*e, sq, r, rng));
    EXPECT_EQ(e->mul(r, r), sq);
  }
}

TEST(Ext, FactorOverExtension) {
  auto f = field_make(5, 1, 0);
  auto e = ext_make(f, first_irreducible(*f, 2));
  Rng rng(4);
  // x^2 - 2 is irreducible over F_5 but splits over F_25
  Poly<Ext> g(*e, {e->from_int(-2), e->zero(), e->one()});
  auto roots = poly_roots(g, rng);
  ASSERT_EQ(roots.size(), 2u);
  for (auto& r : roots) EXPECT_EQ(e->mul(r, r), e->from_int(2));
  for (int i = 0; i < 30; ++i) {
    std::vector<ExtElem> c(5);
    for (auto& x : c) x = e->random(rng);
    c.push_back(e->one());
    Poly<Ext> h(*e, c);
    auto fs = poly_factor(h, rng);
    Poly<Ext> prod = Poly<Ext>::constant(*e, e->one());
    for (auto& [g2, m] : fs)
      for (int j = 0; j < m; ++j) prod = prod * g2;
    EXPECT_EQ(prod, h);
  }
}

TEST(Smooth, AgreesWithFactorization) {
  auto f = field_make(11, 1, 0);
  Rng rng(21);
  for (int i = 0; i < 500; ++i) {
    FqPoly g = random_monic(*f, 2 + static_cast<int>(rng() % 9), rng);
    if (i % 4 == 0) g = g * g;
    int maxdeg = 0;
    for (auto& [h, m] : poly_factor(g, rng)) maxdeg = std::max(maxdeg, h.deg());
    for (int b = 1; b <= 4; ++b) EXPECT_EQ(is_smooth(g, b), maxdeg <= b);
  }
}

TEST(Integer, FactorAndCrt) {
  auto fs = factor_u64(488281);
  u64 prod = 1;
  for (auto& [p, e] : fs) {
    EXPECT_TRUE(is_prime_u64(p));
    for (int i = 0; i < e; ++i) prod *= p;
  }
  EXPECT_EQ(prod, 488281u);
  auto big = factor_u64(1000000007ull * 998244353ull);
  ASSERT_EQ(big.size(), 2u);
  EXPECT_EQ(big[0].first, 998244353ull);
  auto [x, l] = crt_pair(3, 4, 5, 6);
  EXPECT_EQ(l, 12u);
  EXPECT_EQ(x % 4, 3u);
  EXPECT_EQ(x % 6, 5u);
}
