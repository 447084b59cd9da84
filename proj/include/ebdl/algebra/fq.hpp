#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ebdl/algebra/integer.hpp"

namespace ebdl {

// F_q with q = p^m. Elements are their canonical codes sum d_i p^i, so the
// digit encoding is unique per element. Multiplication goes through
// discrete-log tables built from a primitive element.
class Fq {
 public:
  using Elem = u32;
  static constexpr u64 kMaxOrder = u64{1} << 20;

  // modulus: monic irreducible of degree m over F_p, digits low degree first.
  Fq(u32 p, std::vector<u32> modulus) : p_(p), mod_(std::move(modulus)) {
    if (!is_prime_u64(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
    if (p < 5) throw Error(Errc::CharTooSmall, "characteristic must be at least 5");
    if (mod_.size() < 2 || mod_.back() != 1) throw Error(Errc::Reducible, "modulus must be monic of degree >= 1");
    m_ = static_cast<u32>(mod_.size() - 1);
    q_ = 1;
    for (u32 i = 0; i < m_; ++i) {
      q_ *= p_;
      if (q_ > kMaxOrder) throw Error(Errc::FieldTooLarge, "q exceeds the 2^20 desk cap");
    }
    build_tables();
  }

  u32 p() const { return p_; }
  u32 m() const { return m_; }
  u64 q() const { return q_; }
  u128 order() const { return q_; }
  u32 characteristic() const { return p_; }
  const std::vector<u32>& modulus() const { return mod_; }
  Elem generator() const { return gen_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(Elem a) const { return a == 0; }
  bool eq(Elem a, Elem b) const { return a == b; }
  bool less(Elem a, Elem b) const { return a < b; }

  Elem add(Elem a, Elem b) const {
    if (m_ == 1) {
      u32 s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    u32 r = 0, pw = 1;
    while (a | b) {
      u32 d = a % p_ + b % p_;
      if (d >= p_) d -= p_;
      r += d * pw;
      pw *= p_;
      a /= p_;
      b /= p_;
    }
    return r;
  }
  Elem neg(Elem a) const {
    if (m_ == 1) return a ? p_ - a : 0;
    u32 r = 0, pw = 1;
    while (a) {
      u32 d = a % p_;
      r += (d ? p_ - d : 0) * pw;
      pw *= p_;
      a /= p_;
    }
    return r;
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Elem inv(Elem a) const {
    if (a == 0) throw Error(Errc::ZeroPolynomial, "inverse of zero");
    u32 l = log_[a];
    return exp_[l == 0 ? 0 : (q_ - 1) - l];
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, u128 e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    return exp_[static_cast<u64>((static_cast<u128>(log_[a]) * (e % (q_ - 1))) % (q_ - 1))];
  }
  // Discrete log to the table generator; a must be nonzero.
  u32 log(Elem a) const { return log_[a]; }
  Elem exp(u64 e) const { return exp_[e % (q_ - 1)]; }

  bool is_square(Elem a) const { return a == 0 || (log_[a] % 2 == 0); }
  // Square root with the smaller code among the two roots.
  bool sqrt(Elem a, Elem& out) const {
    if (a == 0) {
      out = 0;
      return true;
    }
    if (log_[a] % 2) return false;
    Elem r = exp_[log_[a] / 2];
    Elem s = neg(r);
    out = r < s ? r : s;
    return true;
  }
  // -1, 0, +1
  int chi(Elem a) const { return a == 0 ? 0 : (log_[a] % 2 ? -1 : 1); }

  Elem from_int(i64 v) const { return static_cast<Elem>(reduce_signed(v, p_)); }
  Elem from_index(u64 i) const { return static_cast<Elem>(i % q_); }
  template <class R>
  Elem random(R& rng) const {
    return static_cast<Elem>(std::uniform_int_distribution<u64>(0, q_ - 1)(rng));
  }
  template <class R>
  Elem random_nonzero(R& rng) const {
    return static_cast<Elem>(std::uniform_int_distribution<u64>(1, q_ - 1)(rng));
  }

  std::vector<u32> digits(Elem a) const {
    std::vector<u32> d(m_);
    for (u32 i = 0; i < m_; ++i) {
      d[i] = a % p_;
      a /= p_;
    }
    return d;
  }
  Elem from_digits(const std::vector<u32>& d) const {
    if (d.size() != m_) throw Error(Errc::Parse, "element needs exactly m digits");
    u32 r = 0;
    for (u32 i = m_; i-- > 0;) {
      if (d[i] >= p_) throw Error(Errc::Parse, "digit out of range");
      r = r * p_ + d[i];
    }
    return r;
  }

  std::string encode(Elem a) const {
    std::string s;
    auto d = digits(a);
    for (u32 i = 0; i < m_; ++i) {
      if (i) s += ',';
      s += std::to_string(d[i]);
    }
    return s;
  }
  Elem decode(const std::string& s) const {
    std::vector<u32> d;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) throw Error(Errc::Parse, "empty digit in '" + s + "'");
      d.push_back(static_cast<u32>(std::stoul(tok)));
    }
    return from_digits(d);
  }

 private:
  // Product of two codes as polynomials over F_p modulo mod_. Only used while
  // building the tables.
  u32 slow_mul(u32 a, u32 b) const {
    auto da = digits(a), db = digits(b);
    std::vector<u64> prod(2 * m_ - 1, 0);
    for (u32 i = 0; i < m_; ++i)
      for (u32 j = 0; j < m_; ++j) prod[i + j] = (prod[i + j] + u64{da[i]} * db[j]) % p_;
    for (u32 i = 2 * m_ - 1; i-- > m_;) {
      u64 c = prod[i];
      if (!c) continue;
      for (u32 j = 0; j < m_; ++j) prod[i - m_ + j] = (prod[i - m_ + j] + (p_ - c) * mod_[j]) % p_;
      prod[i] = 0;
    }
    u32 r = 0;
    for (u32 i = m_; i-- > 0;) r = r * p_ + static_cast<u32>(prod[i]);
    return r;
  }

  void build_tables() {
    const u64 n = q_ - 1;
    auto primes = prime_divisors(n);
    auto slow_pow = [&](u32 a, u64 e) {
      u32 r = 1;
      while (e) {
        if (e & 1) r = slow_mul(r, a);
        a = slow_mul(a, a);
        e >>= 1;
      }
      return r;
    };
    gen_ = 0;
    for (u32 g = 2; g < q_ && !gen_; ++g) {
      if (m_ > 1 && g < p_) continue;  // nonzero prime-subfield elements cannot generate
      bool ok = true;
      for (u64 r : primes)
        if (slow_pow(g, n / r) == 1) {
          ok = false;
          break;
        }
      if (ok) gen_ = g;
    }
    if (q_ == 2) gen_ = 1;
    if (!gen_) throw Error(Errc::Reducible, "no primitive element; modulus is not irreducible");
    exp_.assign(2 * n, 0);
    log_.assign(q_, 0);
    u32 x = 1;
    for (u64 i = 0; i < n; ++i) {
      exp_[i] = exp_[i + n] = x;
      if (i && x == 1) throw Error(Errc::Reducible, "modulus is not irreducible");
      log_[x] = static_cast<u32>(i);
      x = slow_mul(x, gen_);
    }
  }

  u32 p_ = 0, m_ = 0;
  u64 q_ = 0;
  std::vector<u32> mod_;
  u32 gen_ = 0;
  std::vector<u32> exp_, log_;
};

using FqPtr = std::shared_ptr<const Fq>;

}  // namespace ebdl
