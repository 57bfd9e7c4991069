#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "fixrank/poly.hpp"

namespace fixrank {

/// Homogeneous polynomial in (s, t) kept in factored form
///   t^m * t^{deg f} f(s/t),  f monic,
/// or the distinguished zero value.
template <class E>
class HomogPoly {
 public:
  HomogPoly() : zero_(true) {}
  HomogPoly(int inf_mult, Poly<E> finite) : inf_(inf_mult), fin_(std::move(finite)) {
    if (inf_ < 0) throw std::invalid_argument("negative infinite multiplicity");
    if (fin_.is_zero()) throw std::invalid_argument("homogeneous polynomial needs a nonzero finite part");
    if (!fin_.is_monic()) fin_ = fin_.monic();
  }

  static HomogPoly zero() { return HomogPoly(); }
  static HomogPoly one(const E& unit) { return HomogPoly(0, Poly<E>::constant(unit)); }

  bool is_zero() const { return zero_; }
  bool is_one() const { return !zero_ && inf_ == 0 && fin_.degree() == 0; }
  int inf_mult() const { return zero_ ? 0 : inf_; }
  const Poly<E>& finite() const { return fin_; }
  /// Total homogeneous degree; -1 for zero.
  int degree() const { return zero_ ? -1 : inf_ + fin_.degree(); }
  E unit() const { return fin_.lead(); }

  /// Gamma(s, 1).
  Poly<E> dehomogenize() const { return fin_; }

  /// Value at the point (c : 1), or at (1 : 0) for infinity.
  E eval(const ExtPoint<E>& c) const {
    if (zero_) return E{};
    if (!c) return inf_ > 0 ? E{} : fin_.lead();
    return fin_.eval(*c);
  }

  bool divides(const HomogPoly& b) const {
    if (b.zero_) return true;
    if (zero_) return false;
    return inf_ <= b.inf_ && fin_.divides(b.fin_);
  }

  /// b / this; must divide exactly.
  HomogPoly exact_quotient_of(const HomogPoly& b) const {
    if (zero_ || b.zero_ || !divides(b)) throw std::domain_error("inexact homogeneous division");
    return HomogPoly(b.inf_ - inf_, fin_.exact_quotient_of(b.fin_));
  }

  friend HomogPoly operator*(const HomogPoly& a, const HomogPoly& b) {
    if (a.zero_ || b.zero_) return HomogPoly();
    return HomogPoly(a.inf_ + b.inf_, a.fin_ * b.fin_);
  }

  friend bool operator==(const HomogPoly& a, const HomogPoly& b) {
    if (a.zero_ || b.zero_) return a.zero_ == b.zero_;
    return a.inf_ == b.inf_ && a.fin_ == b.fin_;
  }

  std::string str() const {
    if (zero_) return "0";
    std::string t = inf_ == 0 ? "" : (inf_ == 1 ? "t" : "t^" + std::to_string(inf_));
    std::string f = fin_.degree() == 0 ? "" : "[" + fin_.str() + "]";
    if (t.empty() && f.empty()) return "1";
    return t + (t.empty() || f.empty() ? "" : "*") + f;
  }

 private:
  bool zero_ = false;
  int inf_ = 0;
  Poly<E> fin_;
};

/// t^n q(s/t) as (scalar, monic homogeneous part).
template <class E>
std::pair<E, HomogPoly<E>> homogenize(const Poly<E>& q, int total_degree) {
  if (q.is_zero()) throw std::invalid_argument("homogenize: zero polynomial");
  if (q.degree() > total_degree) throw std::invalid_argument("homogenize: degree exceeds total degree");
  return {q.lead(), HomogPoly<E>(total_degree - q.degree(), q.monic())};
}

template <class E>
Poly<E> dehomogenize(const HomogPoly<E>& h) {
  return h.dehomogenize();
}

/// Invertible 2x2 matrix [x y; z w] acting on the projective line.
template <class E>
struct MobiusMap {
  E x, y, z, w;

  MobiusMap(E x_, E y_, E z_, E w_) : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)), w(std::move(w_)) {
    if (det().is_zero()) throw std::invalid_argument("Mobius map must be invertible");
  }

  E det() const { return x * w - y * z; }

  MobiusMap inverse() const {
    E d = det().inv();
    return MobiusMap(w * d, -y * d, -z * d, x * d);
  }

  /// [c 1; 1 0]: sends infinity of the image pencil to the point c.
  static MobiusMap moving_to_infinity(const E& c, const E& one) { return MobiusMap(c, one, one, E{} * one); }
};

/// Phi(sx + ty, sz + tw), returned as (k, monic image) with image * k equal
/// to the substituted polynomial.
template <class E>
std::pair<E, HomogPoly<E>> mobius_homog(const MobiusMap<E>& X, const HomogPoly<E>& h) {
  if (h.is_zero()) return {X.x / X.x, HomogPoly<E>::zero()};
  const Poly<E>& f = h.finite();
  const E one = f.lead();
  const int d = f.degree();
  const int n = h.degree();
  // Dehomogenized image at t = 1: (zs + w)^m * sum_k f_k (xs + y)^k (zs + w)^(d-k).
  const Poly<E> num(std::vector<E>{X.y, X.x});
  const Poly<E> den(std::vector<E>{X.w, X.z});
  std::vector<Poly<E>> num_pow{Poly<E>::constant(one)}, den_pow{Poly<E>::constant(one)};
  for (int k = 1; k <= n; ++k) {
    num_pow.push_back(num_pow.back() * num);
    den_pow.push_back(den_pow.back() * den);
  }
  Poly<E> acc;
  for (int k = 0; k <= d; ++k) {
    const E c = f.coeff(k);
    if (c.is_zero()) continue;
    acc += num_pow[k] * den_pow[d - k] * c;
  }
  acc *= den_pow[h.inf_mult()];
  // acc is a degree-n form evaluated at t=1; its s-degree fixes the new t-power.
  const E k = acc.lead();
  return {k, HomogPoly<E>(n - acc.degree(), acc.monic())};
}

}  // namespace fixrank
