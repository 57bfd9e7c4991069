#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fixrank/field.hpp"

namespace fixrank {

/// Dense univariate polynomial in s, coefficients lowest degree first.
template <class E>
class Poly {
 public:
  static constexpr int kZeroDegree = -1;

  Poly() = default;
  explicit Poly(std::vector<E> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly constant(const E& c) { return Poly(std::vector<E>{c}); }
  /// c * s^k
  static Poly monomial(const E& c, int k) {
    std::vector<E> v(static_cast<std::size_t>(k) + 1);
    v.back() = c;
    return Poly(std::move(v));
  }
  /// s - root, built from a unit of the field.
  static Poly linear(const E& one, const E& root) { return Poly(std::vector<E>{-root, one}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const E& lead() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
    return c_.back();
  }
  E coeff(int k) const { return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : E{}; }
  std::span<const E> coeffs() const { return c_; }
  bool is_monic() const { return !c_.empty() && c_.back() == c_.back() / c_.back(); }

  E eval(const E& x) const {
    E acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Poly monic() const {
    if (c_.empty()) throw std::domain_error("monic of zero polynomial");
    E inv = c_.back().inv();
    return *this * inv;
  }

  /// Exponent of s dividing this polynomial (0 for the zero polynomial).
  int valuation() const {
    int k = 0;
    while (k < static_cast<int>(c_.size()) && c_[k].is_zero()) ++k;
    return k == static_cast<int>(c_.size()) ? 0 : k;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<E> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  friend Poly operator*(Poly a, const E& k) {
    for (auto& x : a.c_) x *= k;
    a.trim();
    return a;
  }
  friend Poly operator*(const E& k, Poly a) { return std::move(a) * k; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  /// Euclidean division; throws on a zero divisor.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly{}, a};
    std::vector<E> rem = a.c_;
    std::vector<E> quo(a.c_.size() - b.c_.size() + 1);
    E inv = b.c_.back().inv();
    const std::size_t db = b.c_.size() - 1;
    for (std::size_t k = quo.size(); k-- > 0;) {
      E q = rem[k + db] * inv;
      quo[k] = q;
      if (q.is_zero()) continue;
      for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= q * b.c_[j];
    }
    rem.resize(db);
    return {Poly(std::move(quo)), Poly(std::move(rem))};
  }
  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

  /// True iff this divides b. The zero polynomial divides only zero.
  bool divides(const Poly& b) const {
    if (is_zero()) return b.is_zero();
    if (b.is_zero()) return true;
    return (b % *this).is_zero();
  }

  /// Quotient b / this, which must be exact.
  Poly exact_quotient_of(const Poly& b) const {
    auto [q, r] = divmod(b, *this);
    if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
    return q;
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
      if (c_[k].is_zero()) continue;
      if (!out.empty()) out += " + ";
      std::string c = c_[k].str();
      if (k == 0) out += c;
      else {
        if (!(c_[k] == c_[k] / c_[k])) out += "(" + c + ")*";
        out += k == 1 ? "s" : "s^" + std::to_string(k);
      }
    }
    return out;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<E> c_;
};

/// Monic greatest common divisor; both arguments zero is an error.
template <class E>
Poly<E> gcd(Poly<E> a, Poly<E> b) {
  if (a.is_zero() && b.is_zero()) throw std::invalid_argument("gcd of two zero polynomials");
  while (!b.is_zero()) {
    Poly<E> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <class E>
Poly<E> lcm(const Poly<E>& a, const Poly<E>& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return (a * gcd(a, b).exact_quotient_of(b)).monic();
}

template <class E>
Poly<E> pow(const Poly<E>& base, int k, const E& one) {
  Poly<E> r = Poly<E>::constant(one);
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

/// Exponent of (s - root) in a nonzero polynomial.
template <class E>
int root_multiplicity(Poly<E> f, const E& root) {
  if (f.is_zero()) throw std::domain_error("multiplicity in zero polynomial");
  const E one = f.lead() / f.lead();
  const Poly<E> lin = Poly<E>::linear(one, root);
  int k = 0;
  for (;;) {
    auto [q, r] = divmod(f, lin);
    if (!r.is_zero()) return k;
    f = std::move(q);
    ++k;
  }
}

/// Roots in GF(p) of a nonzero polynomial, ascending.
inline std::vector<Zp> field_roots(const PrimeField& field, const Poly<Zp>& f) {
  std::vector<Zp> out;
  if (f.is_zero()) throw std::domain_error("roots of zero polynomial");
  for (std::uint64_t k = 0; k < field.order(); ++k) {
    Zp x = field.element(k);
    if (f.eval(x).is_zero()) out.push_back(x);
  }
  return out;
}

namespace detail {

inline std::vector<mpz_class> divisors(mpz_class n) {
  if (n < 0) n = -n;
  if (n == 0) throw std::domain_error("divisors of zero");
  if (n > mpz_class("1000000000000000000")) throw std::domain_error("rational root search: coefficient too large");
  std::vector<std::pair<mpz_class, int>> fac;
  for (mpz_class d = 2; d * d <= n; ++d) {
    int e = 0;
    while (n % d == 0) { n /= d; ++e; }
    if (e > 0) fac.emplace_back(d, e);
  }
  if (n > 1) fac.emplace_back(n, 1);
  std::vector<mpz_class> divs{1};
  for (auto& [p, e] : fac) {
    std::size_t base = divs.size();
    mpz_class pk = 1;
    for (int i = 0; i < e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
    }
  }
  return divs;
}

}  // namespace detail

/// Rational roots of a nonzero polynomial, ascending (rational root test).
inline std::vector<Rational> field_roots(const RationalField&, const Poly<Rational>& f) {
  if (f.is_zero()) throw std::domain_error("roots of zero polynomial");
  std::vector<Rational> out;
  Poly<Rational> g = f;
  if (g.coeff(0).is_zero()) {
    out.emplace_back(0);
    g = Poly<Rational>(std::vector<Rational>(f.coeffs().begin() + f.valuation(), f.coeffs().end()));
  }
  if (g.degree() >= 1) {
    mpz_class den = 1;
    for (const auto& c : g.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.value().get_den().get_mpz_t());
    std::vector<mpz_class> ic;
    for (const auto& c : g.coeffs()) ic.push_back(mpz_class(c.value() * den));
    auto nums = detail::divisors(ic.front());
    auto dens = detail::divisors(ic.back());
    for (const auto& a : nums)
      for (const auto& b : dens)
        for (int sign : {1, -1}) {
          Rational x(mpz_class(sign * a), b);
          if (g.eval(x).is_zero() && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
        }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fixrank
