#pragma once

#include <fstream>
#include <set>
#include <sstream>

#include "ebdl/harvest/factor_base.hpp"
#include "ebdl/psi/psi.hpp"

namespace ebdl {

// sum_i row[i] log(rep_i) + c * log((-P_1) - (O)) = 0 mod M.
struct Relation {
  std::string mode;
  std::string params;
  std::vector<std::pair<u32, u64>> row;  // sorted by rep index, nonzero
  u64 c = 0;
  // Place-level sides; kept in memory only.
  std::vector<std::pair<Place, i64>> lhs, rhs;

  bool same_row(const Relation& o) const { return row == o.row && c == o.c; }
};

// Adds sign * terms to the row accumulator.
inline void accumulate(const FactorBase& fb, u64 q, u64 M, const std::vector<std::pair<Place, i64>>& terms, i64 sign,
                       std::map<u32, u64>& acc, u64& c) {
  for (auto& [p, n] : terms) {
    if (!p.finite() || n == 0) continue;
    auto slot = fb.lookup(p);
    if (!slot) throw std::logic_error("place outside the factor base");
    auto [qs, geo] = shift_weights(q, p.degree(), slot->shift, M);
    u64 m = reduce_signed(sign * n, M);
    acc[slot->rep] = addmod(acc[slot->rep], mulmod(m, qs, M), M);
    c = addmod(c, mulmod(m, geo, M), M);
  }
}

inline Relation make_relation(const FactorBase& fb, const EllipticBasis& B, std::string mode, std::string params,
                              std::vector<std::pair<Place, i64>> lhs, std::vector<std::pair<Place, i64>> rhs) {
  Relation r{std::move(mode), std::move(params), {}, 0, std::move(lhs), std::move(rhs)};
  std::map<u32, u64> acc;
  accumulate(fb, B.q(), B.M, r.lhs, 1, acc, r.c);
  accumulate(fb, B.q(), B.M, r.rhs, -1, acc, r.c);
  for (auto& [i, v] : acc)
    if (v) r.row.emplace_back(i, v);
  return r;
}

// Psi check of the orbit-level row.
inline bool verify_row(const PsiEvaluator& ev, const FactorBase& fb, const Relation& r) {
  std::vector<std::pair<Place, i64>> terms;
  for (auto& [i, v] : r.row) terms.emplace_back(fb.reps()[i], static_cast<i64>(v));
  terms.emplace_back(fb.reps()[fb.c_index()], static_cast<i64>(r.c));
  return ev.combine(terms) == psi_one(ev.basis().L());
}

inline std::string encode_relation(const Relation& r) {
  std::ostringstream os;
  os << r.mode << '|' << r.params << '|';
  for (size_t i = 0; i < r.row.size(); ++i) os << (i ? "," : "") << r.row[i].first << ':' << r.row[i].second;
  os << "|c:" << r.c;
  return os.str();
}

inline Relation decode_relation(const std::string& line) {
  auto parts = split_string(line, '|');
  if (parts.size() != 4 || parts[3].rfind("c:", 0) != 0) throw Error(Errc::Parse, "bad relation line: " + line);
  Relation r;
  r.mode = parts[0];
  r.params = parts[1];
  try {
    if (!parts[2].empty())
      for (auto& t : split_string(parts[2], ',')) {
        auto kv = split_string(t, ':');
        if (kv.size() != 2) throw Error(Errc::Parse, "bad relation term: " + t);
        r.row.emplace_back(static_cast<u32>(std::stoul(kv[0])), std::stoull(kv[1]));
      }
    r.c = std::stoull(parts[3].substr(2));
  } catch (const std::logic_error&) {
    throw Error(Errc::Parse, "bad relation number in: " + line);
  }
  return r;
}

inline void save_relations(const std::vector<Relation>& rs, const std::string& path, bool append = false) {
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw Error(Errc::Parse, "cannot write " + path);
  for (auto& r : rs) out << encode_relation(r) << '\n';
}

inline std::vector<Relation> load_relations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Parse, "cannot read " + path);
  std::vector<Relation> rs;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) rs.push_back(decode_relation(line));
  return rs;
}

// Keeps the first occurrence of each row.
inline std::vector<Relation> dedup_relations(std::vector<Relation> rs) {
  std::set<std::pair<std::vector<std::pair<u32, u64>>, u64>> seen;
  std::vector<Relation> out;
  for (auto& r : rs)
    if (!r.row.empty() || r.c) {
      if (seen.insert({r.row, r.c}).second) out.push_back(std::move(r));
    }
  return out;
}

}  // namespace ebdl
