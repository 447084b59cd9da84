#pragma once

#include <map>

#include "ebdl/curve/curve.hpp"

namespace ebdl {

using i128 = __int128;

// Point counts over F_{q^i}, i <= D, and the invertibility of their lcm
// modulo M = (q^k - 1)/(q - 1).
struct NdTable {
  int D = 0;
  std::vector<u64> N;  // N[i-1] = #E(F_{q^i})
  u64 M = 0;
  u64 lcm_mod_M = 0;
  bool inv_ok = false;
  u64 lcm_inv = 0;  // inverse of the lcm mod M when inv_ok

  u64 at(int i) const { return N.at(i - 1); }
  // lcm of #E(F_{q^i}) over i | d, the N_d of the translation relation.
  u64 nd_of_degree(int d) const {
    u64 l = 1;
    for (int i = 1; i <= d; ++i)
      if (d % i == 0) l = lcm_u64(l, at(i));
    return l;
  }
};

inline u64 norm_modulus(u64 q, u64 k) {
  u64 M = 0, pw = 1;
  for (u64 i = 0; i < k; ++i) {
    if (M > UINT64_MAX - pw) throw Error(Errc::Overflow, "M does not fit in 64 bits");
    M += pw;
    if (i + 1 < k && pw > UINT64_MAX / q) throw Error(Errc::Overflow, "M does not fit in 64 bits");
    pw *= q;
  }
  return M;
}

// t_0 = 2, t_1 = t, t_{i+1} = t t_i - q t_{i-1}; N_i = q^i + 1 - t_i.
inline std::vector<u64> counts_by_trace(u64 q, i64 t, int D) {
  std::vector<u64> out;
  i128 tp = 2, tc = t, qi = q;
  for (int i = 1; i <= D; ++i) {
    i128 n = qi + 1 - tc;
    if (n <= 0 || n > static_cast<i128>(UINT64_MAX)) throw Error(Errc::Overflow, "#E(F_{q^i}) does not fit in 64 bits");
    out.push_back(static_cast<u64>(n));
    i128 nx = static_cast<i128>(t) * tc - static_cast<i128>(q) * tp;
    tp = tc;
    tc = nx;
    qi *= q;
  }
  return out;
}

inline NdTable nd_build(const Curve& c, u64 k, int D) {
  if (D < 1) throw Error(Errc::Overflow, "D must be >= 1");
  NdTable nd;
  nd.D = D;
  nd.N = counts_by_trace(c.q(), c.t, D);
  nd.M = norm_modulus(c.q(), k);
  std::map<u64, int> pe;
  for (u64 n : nd.N)
    for (auto [p, e] : factor_u64(n)) pe[p] = std::max(pe[p], e);
  nd.lcm_mod_M = 1 % nd.M;
  for (auto [p, e] : pe) nd.lcm_mod_M = mulmod(nd.lcm_mod_M, powmod(p % nd.M, e, nd.M), nd.M);
  nd.inv_ok = true;
  for (u64 n : nd.N) nd.inv_ok = nd.inv_ok && gcd_u64(n, nd.M) == 1;
  if (nd.inv_ok) nd.lcm_inv = invmod(nd.lcm_mod_M, nd.M);
  return nd;
}

}  // namespace ebdl
