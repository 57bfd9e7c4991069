#pragma once

// Random generators shared by the test binaries. Seeds are fixed so failures
// reproduce.

#include <random>

#include "fixrank/fixrank.hpp"

namespace fixrank::testing {

using Rng = std::mt19937_64;

inline Zp random_element(const PrimeField& f, Rng& g) {
  return f.from_int(static_cast<std::int64_t>(g() % f.characteristic()));
}

// Small integers with an occasional fraction; keeps rational growth tame.
inline Rational random_element(const RationalField&, Rng& g) {
  const long num = static_cast<long>(g() % 7) - 3;
  if (g() % 4 == 0) return Rational(num) / Rational(static_cast<long>(g() % 3) + 2);
  return Rational(num);
}

template <class F>
Matrix<Elem<F>> random_matrix(const F& f, Index m, Index n, Rng& g) {
  Matrix<Elem<F>> a(m, n, f.zero());
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = random_element(f, g);
  return a;
}

template <class F>
Matrix<Elem<F>> random_invertible(const F& f, Index n, Rng& g) {
  for (;;) {
    auto a = random_matrix(f, n, n, g);
    if (!det(a).is_zero()) return a;
  }
}

template <class F>
Pencil<Elem<F>> random_pencil(const F& f, Index n, Rng& g) {
  return Pencil<Elem<F>>(random_matrix(f, n, n, g), random_matrix(f, n, n, g));
}

template <class F>
Pencil<Elem<F>> random_regular_pencil(const F& f, Index n, Rng& g) {
  for (;;) {
    auto p = random_pencil(f, n, g);
    if (is_regular(p)) return p;
  }
}

// A rank-k matrix as a product of random n x k and k x n factors.
template <class F>
Matrix<Elem<F>> random_rank(const F& f, Index n, Index k, Rng& g) {
  for (;;) {
    auto m = random_matrix(f, n, k, g) * random_matrix(f, k, n, g);
    if (rank(m) == k) return m;
  }
}

template <class F>
Poly<Elem<F>> random_poly(const F& f, int deg, Rng& g) {
  std::vector<Elem<F>> c;
  for (int i = 0; i <= deg; ++i) c.push_back(random_element(f, g));
  return Poly<Elem<F>>(std::move(c));
}

// Unimodular polynomial matrix: product of elementary row operations.
template <class F>
PolyMatrix<Elem<F>> random_unimodular(const F& f, Index n, Rng& g, int ops = 6) {
  using P = Poly<Elem<F>>;
  auto u = PolyMatrix<Elem<F>>::identity(n, P::constant(f.one()));
  if (n < 2) return u;
  for (int k = 0; k < ops; ++k) {
    const Index i = g() % n;
    Index j = g() % (n - 1);
    if (j >= i) ++j;
    const P mult = random_poly(f, static_cast<int>(g() % 2), g);
    for (Index c = 0; c < n; ++c) u(i, c) += mult * u(j, c);
  }
  return u;
}

template <class E>
PolyMatrix<E> multiply(const PolyMatrix<E>& a, const PolyMatrix<E>& b) {
  PolyMatrix<E> m(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j)
      for (Index k = 0; k < a.cols(); ++k) m(i, j) += a(i, k) * b(k, j);
  return m;
}

}  // namespace fixrank::testing
