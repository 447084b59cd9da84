#pragma once

#include <fstream>
#include <sstream>

#include "ebdl/harvest/factor_base.hpp"
#include "ebdl/psi/psi.hpp"
#include "ebdl/solve/oracle.hpp"

namespace ebdl {

// Logs of orbit reps base g in F_{q^k}^* / F_q^*, one part per prime power of M.
struct PrimePart {
  u64 l = 0;
  int e = 1;
  u64 mod = 0;  // l^e
  bool bsgs = false;
  std::map<u32, u64> logs;
};

struct LogTable {
  u64 M = 0;
  u64 q = 0;
  ExtElem g;
  u32 c_index = 0;
  std::vector<PrimePart> parts;

  std::optional<u64> place_log(const FactorBase& fb, const Place& p, size_t part) const {
    if (!p.finite()) return 0;
    auto slot = fb.lookup(p);
    if (!slot) return std::nullopt;
    const PrimePart& P = parts[part];
    auto it = P.logs.find(slot->rep);
    if (it == P.logs.end()) return std::nullopt;
    auto [qs, geo] = shift_weights(q, p.degree(), slot->shift, P.mod);
    u64 v = mulmod(qs, it->second, P.mod);
    if (geo) {
      auto ic = P.logs.find(c_index);
      if (ic == P.logs.end()) return std::nullopt;
      v = addmod(v, mulmod(geo, ic->second, P.mod), P.mod);
    }
    return v;
  }

  std::optional<u64> rep_log(u32 rep) const {
    u64 x = 0, m = 1;
    for (auto& P : parts) {
      auto it = P.logs.find(rep);
      if (it == P.logs.end()) return std::nullopt;
      std::tie(x, m) = crt_pair(x, m, it->second, P.mod);
    }
    return x;
  }

  size_t complete_count(size_t nreps) const {
    size_t n = 0;
    for (u32 i = 0; i < nreps; ++i) n += rep_log(i).has_value();
    return n;
  }
};

// Psi(rep)^((q-1)M/l^e) == g^((q-1)M/l^e * log): the per-part check.
inline bool check_part_log(const EllipticBasis& B, const PsiEvaluator& ev, const ExtElem& g, const Place& rep,
                           const PrimePart& P, u64 log) {
  const Ext& L = B.L();
  u128 s = static_cast<u128>(B.q() - 1) * (B.M / P.mod);
  ExtElem lhs = L.pow(ev.elementary(rep).v, s);
  ExtElem rhs = L.pow(L.pow(g, s), log);
  return L.eq(lhs, rhs);
}

inline void save_logs(const LogTable& T, const EllipticBasis& B, const FactorBase& fb, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Parse, "cannot write " + path);
  const Fq& f = B.field();
  out << "g = " << B.L().encode(T.g) << "\n";
  out << "M = " << T.M << "\n";
  for (auto& P : T.parts) {
    out << "[mod " << P.mod << " " << (P.bsgs ? "bsgs" : "linalg") << "]\n";
    for (auto& [i, v] : P.logs) out << encode_place(f, fb.reps()[i]) << " = " << v << "\n";
  }
  out << "[mod M]\n";
  for (u32 i = 0; i < fb.size(); ++i)
    if (auto v = T.rep_log(i)) out << encode_place(f, fb.reps()[i]) << " = " << *v << "\n";
}

inline LogTable load_logs(const EllipticBasis& B, const FactorBase& fb, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Parse, "cannot read " + path);
  LogTable T;
  T.q = B.q();
  T.c_index = fb.c_index();
  std::string line;
  bool in_m = false;
  auto kv = [&](const std::string& s) {
    auto pos = s.find(" = ");
    if (pos == std::string::npos) throw Error(Errc::Parse, "bad logs line: " + s);
    return std::make_pair(s.substr(0, pos), s.substr(pos + 3));
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '[') {
      std::istringstream is(line.substr(1, line.size() - 2));
      std::string tag, mod, kind;
      is >> tag >> mod >> kind;
      if (mod == "M") {
        in_m = true;
        continue;
      }
      PrimePart P;
      P.mod = std::stoull(mod);
      P.bsgs = kind == "bsgs";
      auto fs = factor_u64(P.mod);
      if (fs.size() != 1) throw Error(Errc::Parse, "part modulus is not a prime power");
      P.l = fs[0].first;
      P.e = fs[0].second;
      T.parts.push_back(P);
      continue;
    }
    auto [k, v] = kv(line);
    try {
      if (k == "g") {
        T.g = B.L().decode(v);
      } else if (k == "M") {
        T.M = std::stoull(v);
      } else if (!in_m) {
        if (T.parts.empty()) throw Error(Errc::Parse, "log entry before any section");
        auto rep = fb.rep_of(decode_place(B.field(), k));
        if (!rep) throw Error(Errc::Parse, "unknown orbit representative " + k);
        T.parts.back().logs[*rep] = std::stoull(v);
      }
    } catch (const std::logic_error&) {
      throw Error(Errc::Parse, "bad logs line: " + line);
    }
  }
  if (T.M != B.M) throw Error(Errc::Parse, "logs modulus does not match the basis");
  return T;
}

}  // namespace ebdl
