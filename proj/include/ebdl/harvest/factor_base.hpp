#pragma once

#include <unordered_map>

#include "ebdl/basis/basis.hpp"
#include "ebdl/divisor/translate.hpp"

namespace ebdl {

// Orbit representatives of all places of degree <= max_degree under
// translation by -P_1. Reps are sorted by the Place order, which sorts by
// degree first, so indices of low-degree reps do not depend on max_degree.
class FactorBase {
 public:
  struct Slot {
    u32 rep = 0;
    i64 shift = 0;  // place = translate_place(reps[rep], shift)
  };

  FactorBase() = default;
  FactorBase(const EllipticBasis& B, int max_degree) : max_degree_(max_degree), q_(B.q()) {
    const Curve& c = B.curve;
    const TorsionData& td = B.td;
    auto places = places_up_to(c, max_degree);
    total_places_ = places.size();
    std::map<Place, std::pair<Place, i64>> slot;  // place -> (rep, shift)
    for (auto& p : places) {
      if (slot.count(p)) continue;
      if (torsion_index(c, td, p)) {
        for (u64 j = 1; j < td.k; ++j) {
          auto r = orbit_canonical(c, td, point_place(*c.field, td.P[j]));
          slot[point_place(*c.field, td.P[j])] = {r.rep, r.shift};
        }
        continue;
      }
      // one pass over the orbit: t_s = translate(p, s)
      auto [L, Q] = place_point(c, p);
      auto E = c.ops_over(*L);
      ExtPoint P1 = embed_point(*L, td.P1());
      std::vector<Place> orbit{p};
      ExtPoint R = Q;
      for (u64 s = 1; s < td.k; ++s) {
        R = E.sub(R, P1);
        Place t = place_of_point(c, *L, R);
        if (t == p) break;
        orbit.push_back(t);
      }
      const i64 o = static_cast<i64>(orbit.size());
      i64 s0 = std::min_element(orbit.begin(), orbit.end()) - orbit.begin();
      for (i64 s = 0; s < o; ++s) slot[orbit[s]] = {orbit[s0], reduce_signed(s - s0, o)};
    }
    for (auto& [p, rs] : slot)
      if (rs.second == 0) reps_.push_back(p);
    std::sort(reps_.begin(), reps_.end());
    for (u32 i = 0; i < reps_.size(); ++i) rep_index_[reps_[i]] = i;
    for (auto& [p, rs] : slot) index_[p] = Slot{rep_index_.at(rs.first), rs.second};
    c_index_ = rep_index_.at(point_place(*c.field, td.at(-1)));
  }

  int max_degree() const { return max_degree_; }
  const std::vector<Place>& reps() const { return reps_; }
  size_t size() const { return reps_.size(); }
  size_t total_places() const { return total_places_; }
  u32 c_index() const { return c_index_; }
  // Number of reps of degree <= d (a prefix of reps()).
  size_t count_up_to(int d) const {
    size_t n = 0;
    while (n < reps_.size() && reps_[n].degree() <= d) ++n;
    return n;
  }

  std::optional<Slot> lookup(const Place& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<u32> rep_of(const Place& p) const {
    auto it = rep_index_.find(p);
    if (it == rep_index_.end()) return std::nullopt;
    return it->second;
  }
  // Places in the orbit of rep i, in shift order.
  std::vector<Place> orbit(u32 i) const {
    std::vector<std::pair<i64, Place>> v;
    for (auto& [p, s] : index_)
      if (s.rep == i) v.emplace_back(s.shift, p);
    std::sort(v.begin(), v.end());
    std::vector<Place> out;
    for (auto& [s, p] : v) out.push_back(p);
    return out;
  }

 private:
  int max_degree_ = 0;
  u64 q_ = 0;
  size_t total_places_ = 0;
  std::vector<Place> reps_;
  std::map<Place, u32> rep_index_;
  std::map<Place, Slot> index_;
  u32 c_index_ = 0;
};

// log(translate(rep, s)) = q^s log(rep) + d c (1 + q + ... + q^(s-1)), with
// c = log Psi((-P_1) - (O)). Returns (q^s, d (q^s - 1)/(q - 1)) mod n.
inline std::pair<u64, u64> shift_weights(u64 q, int d, i64 s, u64 n) {
  u64 qs = 1 % n, geo = 0;
  for (i64 i = 0; i < s; ++i) {
    geo = (geo + qs) % n;
    qs = mulmod(qs, q % n, n);
  }
  return {qs, mulmod(static_cast<u64>(d) % n, geo, n)};
}

}  // namespace ebdl
