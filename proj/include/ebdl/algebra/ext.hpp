#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ebdl/algebra/factor.hpp"

namespace ebdl {

// Base[X]/(I) for a monic irreducible I of degree k. Elements are residue
// coefficient vectors of length exactly k.
template <class Base>
class ExtField {
 public:
  using BaseElem = typename Base::Elem;
  using Elem = std::vector<BaseElem>;

  ExtField(std::shared_ptr<const Base> base, Poly<Base> modulus, bool check = true)
      : base_(std::move(base)), mod_(monic(modulus)) {
    mod_.field = base_.get();
    k_ = mod_.deg();
    if (k_ < 1) throw Error(Errc::Reducible, "extension modulus must have degree >= 1");
    if (check && !is_irreducible(mod_)) throw Error(Errc::Reducible, "extension modulus is reducible");
    order_ = 1;
    for (int i = 0; i < k_; ++i) {
      u128 bo = base_->order();
      if (order_ > (~static_cast<u128>(0)) / bo) throw Error(Errc::Overflow, "extension order exceeds 128 bits");
      order_ *= bo;
    }
    // images of X^i under x -> x^|Base|
    Poly<Base> xq = powmod(Poly<Base>::x(*base_), base_->order(), mod_);
    Poly<Base> acc = Poly<Base>::constant(*base_, base_->one());
    frob_.reserve(k_);
    for (int i = 0; i < k_; ++i) {
      frob_.push_back(from_poly(acc));
      acc = mulmod(acc, xq, mod_);
    }
  }

  const Base& base() const { return *base_; }
  const std::shared_ptr<const Base>& base_ptr() const { return base_; }
  const Poly<Base>& modulus() const { return mod_; }
  int k() const { return k_; }
  u128 order() const { return order_; }
  u32 characteristic() const { return base_->characteristic(); }

  Elem zero() const { return Elem(k_, base_->zero()); }
  Elem one() const {
    Elem r = zero();
    r[0] = base_->one();
    return r;
  }
  Elem embed(const BaseElem& b) const {
    Elem r = zero();
    r[0] = b;
    return r;
  }
  Elem gen() const { return from_poly(Poly<Base>::x(*base_)); }
  Elem from_int(i64 v) const { return embed(base_->from_int(v)); }
  Elem from_index(u64 i) const {
    Elem r = zero();
    for (int j = 0; j < k_ && i; ++j) {
      r[j] = base_->from_index(static_cast<u64>(i % static_cast<u64>(base_->order())));
      i /= static_cast<u64>(base_->order());
    }
    return r;
  }

  bool is_zero(const Elem& a) const {
    for (auto& x : a)
      if (!base_->is_zero(x)) return false;
    return true;
  }
  bool eq(const Elem& a, const Elem& b) const {
    for (int i = 0; i < k_; ++i)
      if (!base_->eq(a[i], b[i])) return false;
    return true;
  }
  bool less(const Elem& a, const Elem& b) const {
    for (int i = 0; i < k_; ++i) {
      if (base_->less(a[i], b[i])) return true;
      if (base_->less(b[i], a[i])) return false;
    }
    return false;
  }
  bool is_base(const Elem& a) const {
    for (int i = 1; i < k_; ++i)
      if (!base_->is_zero(a[i])) return false;
    return true;
  }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r(k_);
    for (int i = 0; i < k_; ++i) r[i] = base_->add(a[i], b[i]);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r(k_);
    for (int i = 0; i < k_; ++i) r[i] = base_->sub(a[i], b[i]);
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r(k_);
    for (int i = 0; i < k_; ++i) r[i] = base_->neg(a[i]);
    return r;
  }
  Elem scale(const Elem& a, const BaseElem& s) const {
    Elem r(k_);
    for (int i = 0; i < k_; ++i) r[i] = base_->mul(a[i], s);
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    const Base& f = *base_;
    std::vector<BaseElem> t(2 * k_ - 1, f.zero());
    for (int i = 0; i < k_; ++i) {
      if (f.is_zero(a[i])) continue;
      for (int j = 0; j < k_; ++j) t[i + j] = f.add(t[i + j], f.mul(a[i], b[j]));
    }
    for (int i = 2 * k_ - 2; i >= k_; --i) {
      if (f.is_zero(t[i])) continue;
      for (int j = 0; j < k_; ++j) t[i - k_ + j] = f.sub(t[i - k_ + j], f.mul(t[i], mod_.c[j]));
    }
    t.resize(k_);
    return t;
  }
  Elem inv(const Elem& a) const {
    if (is_zero(a)) throw Error(Errc::ZeroPolynomial, "inverse of zero");
    auto [g, s, t] = xgcd(to_poly(a), mod_);
    return from_poly(s);
  }
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
  Elem pow(const Elem& a, u128 e) const { return field_pow(*this, a, e); }

  // x^(|Base|^times) via the precomputed linear map.
  Elem frobenius(Elem x, i64 times = 1) const {
    times %= k_;
    if (times < 0) times += k_;
    for (i64 t = 0; t < times; ++t) {
      Elem r = zero();
      for (int i = 0; i < k_; ++i) {
        if (base_->is_zero(x[i])) continue;
        for (int j = 0; j < k_; ++j) r[j] = base_->add(r[j], base_->mul(x[i], frob_[i][j]));
      }
      x = std::move(r);
    }
    return x;
  }

  Poly<Base> to_poly(const Elem& a) const { return Poly<Base>(*base_, a); }
  Elem from_poly(const Poly<Base>& p) const {
    Poly<Base> r = p.deg() >= k_ ? p % mod_ : p;
    Elem e = zero();
    for (size_t i = 0; i < r.c.size(); ++i) e[i] = r.c[i];
    return e;
  }
  // p(x) for p with base-field coefficients.
  Elem eval_base(const Poly<Base>& p, const Elem& x) const {
    Elem r = zero();
    for (size_t i = p.c.size(); i-- > 0;) {
      r = mul(r, x);
      r[0] = base_->add(r[0], p.c[i]);
    }
    return r;
  }

  template <class R>
  Elem random(R& rng) const {
    Elem r(k_);
    for (auto& x : r) x = base_->random(rng);
    return r;
  }

  std::string encode(const Elem& a) const {
    std::string s;
    for (int i = 0; i < k_; ++i) {
      if (i) s += '/';
      s += base_->encode(a[i]);
    }
    return s;
  }
  Elem decode(const std::string& s) const {
    Poly<Base> p = decode_poly(*base_, s);
    if (p.deg() >= k_) throw Error(Errc::Parse, "extension element has too many coordinates");
    return from_poly(p);
  }

 private:
  std::shared_ptr<const Base> base_;
  Poly<Base> mod_;
  int k_ = 0;
  u128 order_ = 0;
  std::vector<Elem> frob_;
};

using Ext = ExtField<Fq>;
using ExtPtr = std::shared_ptr<const Ext>;
using ExtElem = Ext::Elem;
using FqPoly = Poly<Fq>;

template <class Base>
std::shared_ptr<const ExtField<Base>> ext_make(std::shared_ptr<const Base> base, const Poly<Base>& modulus) {
  return std::make_shared<const ExtField<Base>>(std::move(base), modulus, true);
}

// Prime-field construction plus a seeded search for a degree-m modulus.
inline FqPtr field_make(u32 p, u32 m, u64 seed) {
  if (!is_prime_u64(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
  if (p < 5) throw Error(Errc::CharTooSmall, "characteristic must be at least 5");
  if (m < 1) throw Error(Errc::Reducible, "extension degree must be >= 1");
  {
    u128 q = 1;
    for (u32 i = 0; i < m; ++i) {
      q *= p;
      if (q > Fq::kMaxOrder) throw Error(Errc::FieldTooLarge, "q exceeds the 2^20 desk cap");
    }
  }
  auto fp = std::make_shared<const Fq>(p, std::vector<u32>{0, 1});
  if (m == 1) return fp;
  Rng rng(seed);
  for (;;) {
    FqPoly f = random_monic(*fp, static_cast<int>(m), rng);
    if (is_irreducible(f)) return std::make_shared<const Fq>(p, f.c);
  }
}

// Square root in a finite field of odd order (Tonelli-Shanks). Returns false
// for non-squares.
template <class F>
bool field_sqrt(const F& f, const typename F::Elem& a, typename F::Elem& out, Rng& rng) {
  if (f.is_zero(a)) {
    out = f.zero();
    return true;
  }
  const u128 qm1 = f.order() - 1;
  if (!f.eq(field_pow(f, a, qm1 / 2), f.one())) return false;
  u128 t = qm1;
  int s = 0;
  while (!(t & 1)) {
    t >>= 1;
    ++s;
  }
  typename F::Elem z;
  do {
    z = f.random(rng);
  } while (f.is_zero(z) || f.eq(field_pow(f, z, qm1 / 2), f.one()));
  auto c = field_pow(f, z, t);
  auto x = field_pow(f, a, (t + 1) / 2);
  auto b = field_pow(f, a, t);
  int mm = s;
  while (!f.eq(b, f.one())) {
    int i = 0;
    auto bb = b;
    while (!f.eq(bb, f.one())) {
      bb = f.mul(bb, bb);
      ++i;
    }
    auto w = c;
    for (int j = 0; j < mm - i - 1; ++j) w = f.mul(w, w);
    x = f.mul(x, w);
    c = f.mul(w, w);
    b = f.mul(b, c);
    mm = i;
  }
  // deterministic choice of the two roots
  auto nx = f.neg(x);
  out = f.less(nx, x) ? nx : x;
  return true;
}

inline bool field_sqrt(const Fq& f, const u32& a, u32& out, Rng&) { return f.sqrt(a, out); }

}  // namespace ebdl
