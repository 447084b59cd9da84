#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "ebdl/curve/curve.hpp"

namespace ebdl {

enum class PlaceKind : int { Infinity = 0, Split = 1, Inert = 2, Ramified = 3 };

// A Galois orbit of points. u is the monic minimal polynomial of the
// abscissa and v (split only) the ordinate as a polynomial mod u, both as
// coefficient codes low degree first.
struct Place {
  PlaceKind kind = PlaceKind::Infinity;
  std::vector<u32> u, v;

  int udeg() const { return static_cast<int>(u.size()) - 1; }
  int degree() const {
    switch (kind) {
      case PlaceKind::Infinity: return 1;
      case PlaceKind::Inert: return 2 * udeg();
      default: return udeg();
    }
  }
  bool finite() const { return kind != PlaceKind::Infinity; }

  // Canonical order: degree, kind, then u and v coefficient vectors.
  bool operator<(const Place& o) const {
    return std::make_tuple(degree(), static_cast<int>(kind), u, v) <
           std::make_tuple(o.degree(), static_cast<int>(o.kind), o.u, o.v);
  }
  bool operator==(const Place& o) const { return kind == o.kind && u == o.u && v == o.v; }
  bool operator!=(const Place& o) const { return !(*this == o); }

  FqPoly upoly(const Fq& f) const { return FqPoly(f, u); }
  FqPoly vpoly(const Fq& f) const { return FqPoly(f, v); }
};

inline Place infinity_place() { return Place{}; }

inline Place make_place(PlaceKind kind, const FqPoly& u, const FqPoly& v = FqPoly()) {
  Place p;
  p.kind = kind;
  p.u = monic(u).c;
  if (kind == PlaceKind::Split) p.v = (v % monic(u)).c;
  return p;
}

// Degree-one place of an affine F_q-point.
inline Place point_place(const Fq& f, const FqPoint& P) {
  if (P.inf) return infinity_place();
  FqPoly u = FqPoly::linear(f, P.x);
  if (P.y == 0) return make_place(PlaceKind::Ramified, u);
  return make_place(PlaceKind::Split, u, FqPoly::constant(f, P.y));
}

// Split places come in pairs (u, v), (u, -v); the one with the smaller v is
// positive-oriented.
inline bool positive_oriented(const Fq& f, const Place& p) {
  if (p.kind != PlaceKind::Split) return true;
  FqPoly nv = -p.vpoly(f);
  std::vector<u32> w = nv.c;
  return p.v <= w;
}

// Places above a monic irreducible u.
inline std::vector<Place> places_over(const Curve& c, const FqPoly& u) {
  const Fq& f = *c.field;
  FqPoly r = c.rhs_poly() % u;
  if (r.is_zero()) return {make_place(PlaceKind::Ramified, u)};
  if (u.deg() == 1) {
    u32 y;
    u32 val = eval(r, f.neg(u.c[0]));
    if (!f.sqrt(val, y)) return {make_place(PlaceKind::Inert, u)};
    std::vector<Place> out{make_place(PlaceKind::Split, u, FqPoly::constant(f, y)),
                           make_place(PlaceKind::Split, u, FqPoly::constant(f, f.neg(y)))};
    std::sort(out.begin(), out.end());
    return out;
  }
  auto K = ext_make(c.field, u);
  ExtElem s;
  Rng rng(0);
  if (!field_sqrt(*K, K->from_poly(r), s, rng)) return {make_place(PlaceKind::Inert, u)};
  std::vector<Place> out{make_place(PlaceKind::Split, u, K->to_poly(s)), make_place(PlaceKind::Split, u, K->to_poly(K->neg(s)))};
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string place_kind_name(PlaceKind k) {
  switch (k) {
    case PlaceKind::Infinity: return "inf";
    case PlaceKind::Split: return "split";
    case PlaceKind::Inert: return "inert";
    case PlaceKind::Ramified: return "ram";
  }
  return "?";
}

inline std::string encode_place(const Fq& f, const Place& p) {
  return place_kind_name(p.kind) + ":" + encode_poly(FqPoly(f, p.u)) + ":" + encode_poly(FqPoly(f, p.v));
}

inline Place decode_place(const Fq& f, const std::string& s) {
  auto parts = split_string(s, ':');
  if (parts.size() != 3) throw Error(Errc::Parse, "place needs kind:u:v, got '" + s + "'");
  Place p;
  if (parts[0] == "inf")
    p.kind = PlaceKind::Infinity;
  else if (parts[0] == "split")
    p.kind = PlaceKind::Split;
  else if (parts[0] == "inert")
    p.kind = PlaceKind::Inert;
  else if (parts[0] == "ram")
    p.kind = PlaceKind::Ramified;
  else
    throw Error(Errc::Parse, "unknown place kind '" + parts[0] + "'");
  p.u = decode_poly(f, parts[1]).c;
  p.v = decode_poly(f, parts[2]).c;
  if (p.kind != PlaceKind::Infinity && (p.u.size() < 2 || p.u.back() != 1)) throw Error(Errc::Parse, "u must be monic of degree >= 1");
  return p;
}

// Formal sum of places; zero coefficients are never stored.
class Divisor {
 public:
  const std::map<Place, i64>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  i64 coef(const Place& p) const {
    auto it = t_.find(p);
    return it == t_.end() ? 0 : it->second;
  }
  void add(const Place& p, i64 n) {
    if (n == 0) return;
    i64 v = (t_[p] += n);
    if (v == 0) t_.erase(p);
  }
  i64 degree() const {
    i64 d = 0;
    for (auto& [p, n] : t_) d += n * p.degree();
    return d;
  }
  i64 height() const {
    i64 h = 0;
    for (auto& [p, n] : t_)
      if (n > 0) h += n * p.degree();
    return h;
  }
  bool operator==(const Divisor& o) const { return t_ == o.t_; }
  bool operator!=(const Divisor& o) const { return t_ != o.t_; }

  friend Divisor operator+(Divisor a, const Divisor& b) {
    for (auto& [p, n] : b.t_) a.add(p, n);
    return a;
  }
  friend Divisor operator-(Divisor a, const Divisor& b) {
    for (auto& [p, n] : b.t_) a.add(p, -n);
    return a;
  }
  Divisor times(i64 k) const {
    Divisor r;
    if (k == 0) return r;
    for (auto& [p, n] : t_) r.t_[p] = n * k;
    return r;
  }

 private:
  std::map<Place, i64> t_;
};

// (P) - deg(P) (O)
inline Divisor elementary(const Place& p) {
  Divisor d;
  d.add(p, 1);
  d.add(infinity_place(), -p.degree());
  return d;
}

inline std::string encode_divisor(const Fq& f, const Divisor& d) {
  std::string s;
  for (auto& [p, n] : d.terms()) {
    if (!s.empty()) s += ';';
    s += encode_place(f, p) + "^" + std::to_string(n);
  }
  return s;
}

inline Divisor decode_divisor(const Fq& f, const std::string& s) {
  Divisor d;
  if (s.empty()) return d;
  for (auto& term : split_string(s, ';')) {
    size_t pos = term.rfind('^');
    if (pos == std::string::npos) throw Error(Errc::Parse, "divisor term without '^'");
    d.add(decode_place(f, term.substr(0, pos)), std::stoll(term.substr(pos + 1)));
  }
  return d;
}

// Elementary pieces with multiplicities, or nullopt if a positive place has
// degree above the bound. O is absorbed by the elementary divisors.
inline std::optional<std::vector<std::pair<Place, i64>>> decompose(const Divisor& d, int bound) {
  std::vector<std::pair<Place, i64>> out;
  for (auto& [p, n] : d.terms()) {
    if (!p.finite()) continue;
    if (n > 0 && p.degree() > bound) return std::nullopt;
    out.emplace_back(p, n);
  }
  return out;
}

}  // namespace ebdl
