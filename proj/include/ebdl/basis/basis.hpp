#pragma once

#include <cmath>
#include <fstream>

#include "ebdl/curve/model.hpp"
#include "ebdl/psi/nd.hpp"
#include "json.hpp"

namespace ebdl {

// Curve, torsion, F_{q^k} = F_q[X]/(I) and the point F = (theta, tau) with
// pi(F) = F + P_1.
struct EllipticBasis {
  Curve curve;
  TorsionData td;
  ExtPtr ext;
  ExtElem theta, tau;
  u64 M = 0;
  NdTable nd;
  int mu = 1;
  u64 nu = 0;
  u64 seed = 0;
  int factor_count = 0;  // degree-k factors of S_3(X, X^q, x_1)

  const Fq& field() const { return *curve.field; }
  const Ext& L() const { return *ext; }
  u64 k() const { return td.k; }
  u64 q() const { return curve.q(); }
  ExtPoint F() const { return ExtPoint::affine(theta, tau); }
};

struct CurveSearch {
  int mu = 0;
  Curve curve;
  FqPoint P1;
  u64 tried = 0;
};

// ceil(log(k^2/4)/log q) + 1
inline int mu_bound(u64 q, u64 k) {
  double v = std::log(static_cast<double>(k) * static_cast<double>(k) / 4.0) / std::log(static_cast<double>(q));
  return std::max(1, static_cast<int>(std::ceil(v - 1e-12)) + 1);
}

// Seed 0 scans (a, b) in code order; other seeds scan from a random start
// with a stride coprime to q^2.
inline CurveSearch search_curve(u32 p, u32 m0, u64 k, u64 seed) {
  if (k < 3) throw Error(Errc::OrderNotDivisible, "k must be at least 3");
  FqPtr base = field_make(p, m0, seed);
  const int bound = mu_bound(base->q(), k) + 1;
  CurveSearch out;
  for (int mu = 1; mu <= bound; ++mu) {
    FqPtr f;
    try {
      f = field_make(p, m0 * mu, seed);
    } catch (const Error& e) {
      if (e.code() == Errc::FieldTooLarge) break;
      throw;
    }
    const u64 q = f->q(), total = q * q;
    Rng rng(seed);
    u64 start = 0, stride = 1;
    if (seed != 0) {
      start = rng() % total;
      do stride = rng() % total; while (stride == 0 || gcd_u64(stride, total) != 1);
    }
    for (u64 i = 0; i < total; ++i) {
      u64 idx = static_cast<u64>((static_cast<u128>(stride) * i + start) % total);
      u32 a = static_cast<u32>(idx / q), b = static_cast<u32>(idx % q);
      ++out.tried;
      if (is_singular(*f, a, b)) continue;
      Curve c = make_curve(f, a, b);
      if (c.N % k != 0) continue;
      std::optional<FqPoint> P;
      if (q <= (1u << 12)) {
        auto E = c.ops();
        for (auto& R : all_points(c))
          if (has_exact_order(E, R, k)) {
            P = R;
            break;
          }
      } else {
        P = find_point_of_order(c, k, rng);
      }
      if (!P) continue;
      out.mu = mu;
      out.curve = c;
      out.P1 = *P;
      return out;
    }
  }
  throw Error(Errc::SearchExhausted, "no curve with a rational point of order " + std::to_string(k) + " up to mu = " +
                                         std::to_string(bound) + " after " + std::to_string(out.tried) + " curves");
}

// S_3(x_1, X, X^q) as a polynomial in X; degree 2q + 2.
inline FqPoly semaev_frobenius_poly(const Curve& c, u32 x1) {
  const Fq& f = *c.field;
  FqPoly X = FqPoly::x(f), Xq = FqPoly::monomial(f, 1, static_cast<int>(c.q()));
  FqPoly C1 = FqPoly::constant(f, x1);
  FqPoly s1 = C1 + X + Xq, s2 = C1 * X + C1 * Xq + X * Xq, s3 = C1 * X * Xq;
  FqPoly t = s2 - FqPoly::constant(f, c.a);
  return scale(s1 * (s3 + FqPoly::constant(f, c.b)), 4) - t * t;
}

inline EllipticBasis build_basis(const Curve& c, const FqPoint& P1, u64 k, u64 seed, int D = 3, int mu = 1) {
  if (k < 3) throw Error(Errc::OrderNotDivisible, "k must be at least 3");
  EllipticBasis B;
  B.curve = c;
  B.td = make_torsion(c, P1, k);
  B.mu = mu;
  B.nu = c.N / k;
  B.seed = seed;
  const Fq& f = *c.field;
  FqPoly S = semaev_frobenius_poly(c, P1.x);
  if (S.deg() != static_cast<int>(2 * c.q() + 2)) throw std::logic_error("S_3(X, X^q, x_1) has the wrong degree");
  std::vector<FqPoly> cands;
  for (auto& [g, m] : poly_factor(S, seed))
    if (g.deg() == static_cast<int>(k)) cands.push_back(g);
  B.factor_count = static_cast<int>(cands.size());
  if (cands.empty()) throw Error(Errc::NoDegreeKFactor, "S_3(X, X^q, x_1) has no degree-" + std::to_string(k) + " factor");
  bool any_square = false;
  for (auto& I : cands) {
    auto L = std::make_shared<const Ext>(c.field, I, false);
    auto E = c.ops_over(*L);
    ExtElem th = L->gen(), s;
    Rng rng(seed);
    if (!field_sqrt(*L, E.rhs(th), s, rng)) continue;
    any_square = true;
    ExtPoint P1e = embed_point(*L, P1);
    for (auto& t : {s, L->neg(s)}) {
      ExtPoint Fp = ExtPoint::affine(th, t);
      ExtPoint pi = ExtPoint::affine(L->frobenius(th), L->frobenius(t));
      if (!E.eq(pi, E.add(Fp, P1e))) continue;
      B.ext = L;
      B.theta = th;
      B.tau = t;
      B.nd = nd_build(c, k, D);
      B.M = B.nd.M;
      if (!B.nd.inv_ok) throw Error(Errc::NdNotInvertible, "gcd(N_D, M) != 1");
      (void)f;
      return B;
    }
  }
  if (!any_square) throw Error(Errc::NotSquare, "theta^3 + a theta + b is not a square");
  throw Error(Errc::OrientationFailed, "no factor satisfies pi(F) = F + P_1");
}

// (theta^{q^{k-1}}, theta, theta^q)
inline std::array<ExtElem, 3> phi_of_F(const EllipticBasis& B) {
  const Ext& L = B.L();
  return {L.frobenius(B.theta, static_cast<i64>(B.k()) - 1), B.theta, L.frobenius(B.theta, 1)};
}

inline nlohmann::json basis_to_json(const EllipticBasis& B) {
  const Fq& f = B.field();
  const Ext& L = B.L();
  nlohmann::json j;
  j["p"] = f.p();
  j["m"] = f.m();
  j["field_modulus"] = f.modulus();
  j["a"] = f.encode(B.curve.a);
  j["b"] = f.encode(B.curve.b);
  j["N"] = B.curve.N;
  j["trace"] = B.curve.t;
  j["k"] = B.k();
  j["P1"] = {f.encode(B.td.P1().x), f.encode(B.td.P1().y)};
  j["curve"] = encode_curve(B.curve, B.td);
  j["I"] = encode_poly(L.modulus());
  j["theta"] = L.encode(B.theta);
  j["tau"] = L.encode(B.tau);
  j["M"] = B.M;
  j["mu"] = B.mu;
  j["nu"] = B.nu;
  j["seed"] = B.seed;
  j["factor_count"] = B.factor_count;
  j["nd"] = {{"D", B.nd.D}, {"N", B.nd.N}, {"inv_ok", B.nd.inv_ok}};
  return j;
}

// Rebuilds from the stored descriptor and modulus, then rechecks every
// invariant.
inline EllipticBasis basis_from_json(const nlohmann::json& j) {
  try {
    auto [c, td] = decode_curve(j.at("curve").get<std::string>());
    EllipticBasis B;
    B.curve = c;
    B.td = td;
    const Fq& f = *c.field;
    FqPoly I = decode_poly(f, j.at("I").get<std::string>());
    if (I.deg() != static_cast<int>(td.k)) throw Error(Errc::Parse, "modulus degree differs from k");
    B.ext = std::make_shared<const Ext>(c.field, I, true);
    B.theta = B.ext->decode(j.at("theta").get<std::string>());
    B.tau = B.ext->decode(j.at("tau").get<std::string>());
    B.mu = j.value("mu", 1);
    B.nu = c.N / td.k;
    B.seed = j.value("seed", 0ull);
    B.factor_count = j.value("factor_count", 0);
    B.nd = nd_build(c, td.k, j.at("nd").at("D").get<int>());
    B.M = B.nd.M;
    const Ext& L = *B.ext;
    auto E = c.ops_over(L);
    ExtPoint Fp = B.F();
    if (!E.on_curve(Fp)) throw Error(Errc::Parse, "F is not on the curve");
    if (!E.eq(ExtPoint::affine(L.frobenius(B.theta), L.frobenius(B.tau)), E.add(Fp, embed_point(L, td.P1()))))
      throw Error(Errc::OrientationFailed, "stored basis fails pi(F) = F + P_1");
    return B;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, std::string("basis.json: ") + e.what());
  }
}

inline void save_basis(const EllipticBasis& B, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Parse, "cannot write " + path);
  out << basis_to_json(B).dump(2) << "\n";
}

inline EllipticBasis load_basis(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Parse, "cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, std::string("basis.json: ") + e.what());
  }
  return basis_from_json(j);
}

}  // namespace ebdl
