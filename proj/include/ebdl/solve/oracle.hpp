#pragma once

#include <cmath>
#include <optional>
#include <unordered_map>

#include "ebdl/algebra/ext.hpp"
#include "ebdl/solve/linalg.hpp"

namespace ebdl {

struct ElemHash {
  size_t operator()(const ExtElem& a) const {
    u64 h = 0xcbf29ce484222325ull;
    for (u32 c : a) h = (h ^ c) * 0x100000001b3ull;
    return static_cast<size_t>(h);
  }
};

// x in [0, n) with g^x = h, where g has order dividing n.
inline std::optional<u64> bsgs_oracle(const Ext& L, const ExtElem& g, const ExtElem& h, u64 n) {
  if (n == 0 || n > 10000000000ull) throw Error(Errc::Overflow, "bsgs group order out of range");
  u64 m = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(n))));
  std::unordered_map<ExtElem, u64, ElemHash> baby;
  baby.reserve(m * 2);
  ExtElem cur = L.one();
  for (u64 j = 0; j < m; ++j) {
    baby.emplace(cur, j);
    cur = L.mul(cur, g);
  }
  ExtElem giant = L.inv(cur);  // g^-m
  ExtElem y = h;
  for (u64 i = 0; i <= m; ++i) {
    auto it = baby.find(y);
    if (it != baby.end()) {
      u64 x = i * m + it->second;
      if (x < n) return x;
    }
    y = L.mul(y, giant);
  }
  return std::nullopt;
}

// Pollard rho with the three-way partition walk, for g of prime order n.
inline std::optional<u64> rho_prime(const Ext& L, const ExtElem& g, const ExtElem& h, u64 n, u64 seed = 1) {
  if (L.eq(h, L.one())) return 0;
  Rng rng(seed);
  ElemHash H;
  for (int attempt = 0; attempt < 32; ++attempt) {
    u64 a = rng() % n, b = rng() % n;
    auto start = L.mul(L.pow(g, a), L.pow(h, b));
    auto step = [&](ExtElem& x, u64& xa, u64& xb) {
      switch (H(x) % 3) {
        case 0: x = L.mul(x, g); xa = (xa + 1) % n; break;
        case 1: x = L.mul(x, x); xa = mulmod(xa, 2, n); xb = mulmod(xb, 2, n); break;
        default: x = L.mul(x, h); xb = (xb + 1) % n; break;
      }
    };
    ExtElem x = start, y = start;
    u64 xa = a, xb = b, ya = a, yb = b;
    for (u64 it = 0; it < 64 * n + 1000; ++it) {
      step(x, xa, xb);
      step(y, ya, yb);
      step(y, ya, yb);
      if (L.eq(x, y)) {
        u64 db = submod(xb, yb, n);
        if (db == 0) break;
        u64 r = mulmod(submod(ya, xa, n), invmod(db, n), n);
        if (L.eq(L.pow(g, r), h)) return r;
        break;
      }
    }
  }
  return std::nullopt;
}

enum class DlogMethod { Bsgs, Rho };

// Pohlig-Hellman over the factorization of n; each prime-power digit solved
// by the chosen method.
inline std::optional<u64> dlog_group(const Ext& L, const ExtElem& g, const ExtElem& h, u64 n,
                                     const std::vector<std::pair<u64, int>>& fac, DlogMethod method = DlogMethod::Bsgs) {
  u64 x = 0, mod = 1;
  for (auto& [p, e] : fac) {
    u64 pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    ExtElem gp = L.pow(g, n / pe), hp = L.pow(h, n / pe);
    ExtElem gamma = L.pow(gp, pe / p);  // order p
    u64 xi = 0, pk = 1;
    for (int i = 0; i < e; ++i) {
      ExtElem t = L.pow(L.mul(hp, L.inv(L.pow(gp, xi))), pe / pk / p);
      std::optional<u64> d;
      if (method == DlogMethod::Bsgs) {
        d = bsgs_oracle(L, gamma, t, p);
      } else if (p < 16) {
        ExtElem c = L.one();
        for (u64 j = 0; j < p && !d; ++j, c = L.mul(c, gamma))
          if (L.eq(c, t)) d = j;
      } else {
        d = rho_prime(L, gamma, t, p);
      }
      if (!d) return std::nullopt;
      xi += *d * pk;
      pk *= p;
    }
    auto [r, m2] = crt_pair(x, mod, xi, pe);
    x = r;
    mod = m2;
  }
  if (!L.eq(L.pow(g, x), h)) return std::nullopt;
  return x;
}

// log_g z in F_{q^k}^* / F_q^* (mod M): both sides are sent to the order-M
// subgroup by x -> x^(q-1).
inline std::optional<u64> quotient_log(const Ext& L, u64 q, u64 M, const std::vector<std::pair<u64, int>>& facM,
                                       const ExtElem& g, const ExtElem& z, DlogMethod method = DlogMethod::Bsgs) {
  return dlog_group(L, L.pow(g, q - 1), L.pow(z, q - 1), M, facM, method);
}

// Same, modulo one prime power l^e of M.
inline std::optional<u64> quotient_log_mod(const Ext& L, u64 q, u64 M, u64 l, int e, const ExtElem& g, const ExtElem& z) {
  u64 pe = 1;
  for (int i = 0; i < e; ++i) pe *= l;
  ExtElem gs = L.pow(L.pow(g, q - 1), M / pe), zs = L.pow(L.pow(z, q - 1), M / pe);
  return dlog_group(L, gs, zs, pe, {{l, e}});
}

// Smallest element in index order generating F_{q^k}^*.
inline ExtElem primitive_element(const Ext& L) {
  u64 n = static_cast<u64>(L.order() - 1);
  auto ps = prime_divisors(n);
  for (u64 i = 1;; ++i) {
    ExtElem g = L.from_index(i);
    if (L.is_zero(g)) continue;
    bool ok = true;
    for (u64 p : ps)
      if (L.eq(L.pow(g, n / p), L.one())) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
}

}  // namespace ebdl
