#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace fixrank {

/// Exact rational number in lowest terms with positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }

  /// Accepts "a" or "a/b" with optional leading sign.
  static Rational parse(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(mpz_class(s), mpz_class(1));
      return Rational(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("malformed rational '" + s + "'");
    }
  }

  const mpq_class& value() const { return q_; }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  Rational inv() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    return Rational(mpq_class(1) / q_);
  }

  std::string str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    q_ /= o.q_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

/// Residue modulo a prime. A default-constructed value (modulus 0) is the
/// additive identity of every prime field and adopts the modulus of the
/// other operand in arithmetic.
class Zp {
 public:
  Zp() = default;
  Zp(std::int64_t v, std::uint32_t p) : p_(p) {
    if (p == 0) throw std::invalid_argument("Zp needs a modulus");
    std::int64_t r = v % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    v_ = static_cast<std::uint32_t>(r);
  }

  std::uint32_t value() const { return v_; }
  std::uint32_t modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }

  Zp inv() const {
    if (v_ == 0) throw std::domain_error("inverse of zero");
    std::int64_t a = v_, m = p_, x0 = 1, x1 = 0;
    while (m != 0) {
      std::int64_t q = a / m;
      std::swap(a, m);
      m -= q * a;
      std::swap(x0, x1);
      x1 -= q * x0;
    }
    return Zp(x0, p_);
  }

  std::string str() const { return std::to_string(v_); }

  Zp operator-() const {
    Zp r = *this;
    if (v_ != 0) r.v_ = p_ - v_;
    return r;
  }
  Zp& operator+=(const Zp& o) {
    adopt(o);
    std::uint64_t s = std::uint64_t(v_) + o.v_;
    if (p_ != 0 && s >= p_) s -= p_;
    v_ = static_cast<std::uint32_t>(s);
    return *this;
  }
  Zp& operator-=(const Zp& o) { return *this += -o; }
  Zp& operator*=(const Zp& o) {
    adopt(o);
    v_ = p_ == 0 ? 0 : static_cast<std::uint32_t>(std::uint64_t(v_) * o.v_ % p_);
    return *this;
  }
  Zp& operator/=(const Zp& o) { return *this *= o.inv(); }
  friend Zp operator+(Zp a, const Zp& b) { return a += b; }
  friend Zp operator-(Zp a, const Zp& b) { return a -= b; }
  friend Zp operator*(Zp a, const Zp& b) { return a *= b; }
  friend Zp operator/(Zp a, const Zp& b) { return a /= b; }
  friend bool operator==(const Zp& a, const Zp& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Zp& a, const Zp& b) { return a.v_ <=> b.v_; }

 private:
  void adopt(const Zp& o) {
    if (p_ == 0) p_ = o.p_;
  }
  std::uint32_t v_ = 0;
  std::uint32_t p_ = 0;
};

/// The field Q.
struct RationalField {
  using value_type = Rational;

  Rational zero() const { return {}; }
  Rational one() const { return Rational(1); }
  Rational from_int(std::int64_t v) const { return Rational(static_cast<long>(v)); }
  /// Number of elements; 0 stands for an infinite field.
  std::uint64_t order() const { return 0; }
  bool finite() const { return false; }
  /// k-th element of the canonical enumeration 0, 1, 2, ...
  Rational element(std::uint64_t k) const { return from_int(static_cast<std::int64_t>(k)); }
  std::string name() const { return "q"; }
  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// GF(p) for a prime p.
class PrimeField {
 public:
  using value_type = Zp;

  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (!is_prime(p) || p > (1u << 30)) throw std::invalid_argument("gf(" + std::to_string(p) + "): modulus is not a supported prime");
  }

  std::uint32_t characteristic() const { return p_; }
  Zp zero() const { return Zp(0, p_); }
  Zp one() const { return Zp(1, p_); }
  Zp from_int(std::int64_t v) const { return Zp(v, p_); }
  std::uint64_t order() const { return p_; }
  bool finite() const { return true; }
  Zp element(std::uint64_t k) const { return Zp(static_cast<std::int64_t>(k), p_); }
  std::string name() const { return "gf(" + std::to_string(p_) + ")"; }
  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_;
};

template <class F>
using Elem = typename F::value_type;

/// A point of the projective line: a field element, or infinity (nullopt).
template <class E>
using ExtPoint = std::optional<E>;

template <class E>
std::string point_str(const ExtPoint<E>& c) {
  return c ? c->str() : std::string("inf");
}

}  // namespace fixrank
