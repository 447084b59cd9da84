#pragma once

#include <array>
#include <map>
#include <string>

#include "ebdl/curve/curve.hpp"

namespace ebdl {

// Sparse polynomial in U, V, W over F_q; monomials keyed by exponent triple.
class TriPoly {
 public:
  using Exp = std::array<int, 3>;

  TriPoly() = default;
  explicit TriPoly(const Fq& f) : f_(&f) {}

  static TriPoly constant(const Fq& f, u32 c) {
    TriPoly r(f);
    r.set({0, 0, 0}, c);
    return r;
  }
  static TriPoly var(const Fq& f, int which) {
    TriPoly r(f);
    Exp e{0, 0, 0};
    e[which] = 1;
    r.set(e, f.one());
    return r;
  }
  static TriPoly U(const Fq& f) { return var(f, 0); }
  static TriPoly V(const Fq& f) { return var(f, 1); }
  static TriPoly W(const Fq& f) { return var(f, 2); }
  static TriPoly monomial(const Fq& f, Exp e, u32 c = 1) {
    TriPoly r(f);
    r.set(e, c);
    return r;
  }

  const Fq& field() const { return *f_; }
  const std::map<Exp, u32>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  u32 coef(const Exp& e) const {
    auto it = t_.find(e);
    return it == t_.end() ? 0 : it->second;
  }
  void set(const Exp& e, u32 c) {
    if (c == 0)
      t_.erase(e);
    else
      t_[e] = c;
  }
  void add_term(const Exp& e, u32 c) { set(e, f_->add(coef(e), c)); }

  bool operator==(const TriPoly& o) const { return t_ == o.t_; }
  bool operator!=(const TriPoly& o) const { return t_ != o.t_; }

  friend TriPoly operator+(const TriPoly& a, const TriPoly& b) {
    TriPoly r = a.f_ ? a : TriPoly(*b.f_);
    for (auto& [e, c] : b.t_) r.add_term(e, c);
    return r;
  }
  friend TriPoly operator-(const TriPoly& a, const TriPoly& b) {
    TriPoly r = a.f_ ? a : TriPoly(*b.f_);
    for (auto& [e, c] : b.t_) r.add_term(e, r.f_->neg(c));
    return r;
  }
  friend TriPoly operator*(const TriPoly& a, const TriPoly& b) {
    TriPoly r(*(a.f_ ? a.f_ : b.f_));
    for (auto& [ea, ca] : a.t_)
      for (auto& [eb, cb] : b.t_) r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, r.f_->mul(ca, cb));
    return r;
  }
  TriPoly scaled(u32 s) const {
    TriPoly r(*f_);
    for (auto& [e, c] : t_) r.set(e, f_->mul(c, s));
    return r;
  }
  TriPoly operator+(u32 c) const { return *this + constant(*f_, c); }

  // A(U,V) -> A(V,W); requires no W in the input.
  TriPoly shift_vars() const {
    TriPoly r(*f_);
    for (auto& [e, c] : t_) {
      if (e[2] != 0) throw Error(Errc::Parse, "shift_vars expects a polynomial in U, V");
      r.set({0, e[0], e[1]}, c);
    }
    return r;
  }

  // Exact quotient by (U - W).
  TriPoly div_u_minus_w() const {
    int maxu = 0;
    for (auto& [e, c] : t_) maxu = std::max(maxu, e[0]);
    // synthetic division with coefficients c_i(V, W)
    std::vector<TriPoly> ci(maxu + 1, TriPoly(*f_));
    for (auto& [e, c] : t_) ci[e[0]].set({0, e[1], e[2]}, c);
    std::vector<TriPoly> qi(std::max(maxu, 1), TriPoly(*f_));
    TriPoly w = W(*f_);
    TriPoly carry(*f_);
    for (int i = maxu; i >= 1; --i) {
      carry = ci[i] + carry;
      qi[i - 1] = carry;
      carry = carry * w;
    }
    TriPoly rem = ci[0] + carry;
    if (!rem.is_zero()) throw Error(Errc::Parse, "not divisible by U - W");
    TriPoly r(*f_);
    for (int i = 0; i < static_cast<int>(qi.size()); ++i)
      for (auto& [e, c] : qi[i].t_) r.set({i, e[1], e[2]}, c);
    return r;
  }

  template <class F>
  typename F::Elem eval(const F& fl, const typename F::Elem& u, const typename F::Elem& v,
                        const typename F::Elem& w) const {
    auto r = fl.zero();
    for (auto& [e, c] : t_) {
      auto m = embed_base(fl, c);
      for (int i = 0; i < e[0]; ++i) m = fl.mul(m, u);
      for (int i = 0; i < e[1]; ++i) m = fl.mul(m, v);
      for (int i = 0; i < e[2]; ++i) m = fl.mul(m, w);
      r = fl.add(r, m);
    }
    return r;
  }

  std::string to_string() const {
    if (t_.empty()) return "0";
    std::string s;
    static const char* names[3] = {"U", "V", "W"};
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
      if (!s.empty()) s += " + ";
      s += "[" + f_->encode(it->second) + "]";
      for (int v = 0; v < 3; ++v)
        if (it->first[v]) s += names[v] + (it->first[v] > 1 ? "^" + std::to_string(it->first[v]) : std::string());
    }
    return s;
  }

 private:
  const Fq* f_ = nullptr;
  std::map<Exp, u32> t_;
};

// <A, B> = A(V,W) B(U,V) - A(U,V) B(V,W)
inline TriPoly bracket(const TriPoly& A, const TriPoly& B) { return A.shift_vars() * B - A * B.shift_vars(); }

// S_3(X1, X2, c) with X1, X2 two of the variables and c a constant.
inline TriPoly semaev3_tri(const Curve& cv, int var1, int var2, u32 c) {
  const Fq& f = *cv.field;
  TriPoly a = TriPoly::var(f, var1), b = TriPoly::var(f, var2), k = TriPoly::constant(f, c);
  TriPoly s1 = a + b + k, s2 = a * b + (a + b) * k, s3 = a * b * k;
  TriPoly d = s2 + f.neg(cv.a);
  return (s1 * (s3 + cv.b)).scaled(f.from_int(4)) - d * d;
}

}  // namespace ebdl
