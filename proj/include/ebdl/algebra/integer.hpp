#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "ebdl/errors.hpp"

namespace ebdl {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using Rng = std::mt19937_64;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 addmod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  if (s < a || s >= m) s -= m;
  return s;
}

inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Reduces a signed value into [0, m).
inline u64 reduce_signed(i64 v, u64 m) {
  if (v >= 0) return static_cast<u64>(v) % m;
  u64 r = static_cast<u64>(-(v + 1)) % m;  // avoids overflow at INT64_MIN
  return (m - 1 - r) % m;
}

inline u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

inline u64 lcm_u64(u64 a, u64 b) {
  if (a == 0 || b == 0) return 0;
  u128 l = static_cast<u128>(a / gcd_u64(a, b)) * b;
  if (l >> 64) throw Error(Errc::Overflow, "lcm exceeds 64 bits");
  return static_cast<u64>(l);
}

// Inverse of a mod m; throws when gcd(a, m) != 1.
inline u64 invmod(u64 a, u64 m) {
  i64 t = 0, nt = 1;
  u64 r = m, nr = a % m;
  while (nr) {
    u64 qt = r / nr;
    i64 tmp = t - static_cast<i64>(qt) * nt;
    t = nt;
    nt = tmp;
    u64 rr = r - qt * nr;
    r = nr;
    nr = rr;
  }
  if (r != 1) throw Error(Errc::NdNotInvertible, "value not invertible modulo " + std::to_string(m));
  return reduce_signed(t, m);
}

inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 sp : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % sp == 0) return n == sp;
  }
  u64 d = n - 1;
  int s = 0;
  while (!(d & 1)) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
    u64 x = powmod(a % n, d, n);
    if (a % n == 0 || x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int i = 1; i < s && comp; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) comp = false;
    }
    if (comp) return false;
  }
  return true;
}

namespace detail {

// Brent's variant of Pollard rho; returns a nontrivial factor of composite n.
inline u64 pollard_brent(u64 n, Rng& rng, u64 max_iters) {
  if (n % 2 == 0) return 2;
  std::uniform_int_distribution<u64> dist(1, n - 1);
  u64 spent = 0;
  for (;;) {
    u64 y = dist(rng), c = dist(rng), m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](u64 v) { return addmod(mulmod(v, v, n), c, n); };
    while (g == 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = gcd_u64(q, n);
        k += m;
      }
      r <<= 1;
      spent += r;
      if (spent > max_iters) throw Error(Errc::FactorizationTimeout, "pollard rho budget exhausted");
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd_u64(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_rec(u64 n, Rng& rng, std::vector<u64>& out, u64 max_iters) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_brent(n, rng, max_iters);
  factor_rec(d, rng, out, max_iters);
  factor_rec(n / d, rng, out, max_iters);
}

}  // namespace detail

// Trial division to 10^6, then Pollard rho on the cofactor. Sorted by prime.
inline std::vector<std::pair<u64, int>> factor_u64(u64 n, u64 rho_budget = 1ull << 32) {
  std::vector<u64> primes;
  for (u64 d = 2; d <= 1000000 && d * d <= n; d += (d == 2 ? 1 : 2)) {
    while (n % d == 0) {
      primes.push_back(d);
      n /= d;
    }
  }
  if (n > 1) {
    Rng rng(0x5eed);
    detail::factor_rec(n, rng, primes, rho_budget);
  }
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<u64, int>> out;
  for (u64 p : primes) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.emplace_back(p, 1);
  }
  return out;
}

inline std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> out;
  for (auto& [p, e] : factor_u64(n)) out.push_back(p);
  return out;
}

// x ≡ r1 mod m1, x ≡ r2 mod m2 with arbitrary moduli; returns (x, lcm) or throws on inconsistency.
inline std::pair<u64, u64> crt_pair(u64 r1, u64 m1, u64 r2, u64 m2) {
  u64 g = gcd_u64(m1, m2);
  if ((r1 % g) != (r2 % g)) throw Error(Errc::InconsistentSystem, "crt residues disagree");
  u64 l = lcm_u64(m1, m2);
  u64 m2g = m2 / g;
  if (m2g == 1) return {r1 % l, l};
  // x = r1 + m1 * t, m1 t ≡ r2 - r1 mod m2
  u64 diff = submod(r2 % m2, r1 % m2, m2) / g;
  u64 t = mulmod(diff % m2g, invmod((m1 / g) % m2g, m2g), m2g);
  u64 x = static_cast<u64>((static_cast<u128>(m1) * t + r1) % l);
  return {x, l};
}

inline u128 checked_pow(u64 base, unsigned e) {
  u128 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (base != 0 && r > (~static_cast<u128>(0)) / base) throw Error(Errc::Overflow, "power overflow");
    r *= base;
  }
  return r;
}

inline u64 checked_pow64(u64 base, unsigned e) {
  u128 r = checked_pow(base, e);
  if (r >> 63) throw Error(Errc::Overflow, "power exceeds 63 bits");
  return static_cast<u64>(r);
}

}  // namespace ebdl
