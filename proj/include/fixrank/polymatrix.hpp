#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fixrank/matrix.hpp"
#include "fixrank/poly.hpp"

namespace fixrank {

template <class E>
using PolyMatrix = Matrix<Poly<E>>;

template <class E>
PolyMatrix<E> to_poly_matrix(const Matrix<E>& m) {
  PolyMatrix<E> p(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) p(i, j) = Poly<E>::constant(m(i, j));
  return p;
}

template <class E>
int degree(const PolyMatrix<E>& g) {
  int d = Poly<E>::kZeroDegree;
  for (const auto& x : g.data()) d = std::max(d, x.degree());
  return d;
}

template <class E>
Matrix<E> evaluate(const PolyMatrix<E>& g, const E& x) {
  Matrix<E> m(g.rows(), g.cols());
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j) m(i, j) = g(i, j).eval(x);
  return m;
}

namespace detail {

// Fraction-free elimination. Returns the rank and, for square full-rank
// input, the determinant (sign-corrected) in *det_out.
template <class E>
Index bareiss(PolyMatrix<E> m, Poly<E>* det_out) {
  const Index rows = m.rows(), cols = m.cols();
  Poly<E> prev;  // previous pivot; empty means 1
  Index r = 0;
  bool negate = false;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index p = r;
    int best = -1;
    for (Index i = r; i < rows; ++i) {
      const int d = m(i, c).degree();
      if (d >= 0 && (best < 0 || d < best)) {
        best = d;
        p = i;
      }
    }
    if (best < 0) continue;
    if (p != r) {
      m.swap_rows(p, r);
      negate = !negate;
    }
    for (Index i = r + 1; i < rows; ++i) {
      for (Index j = c + 1; j < cols; ++j) {
        Poly<E> v = m(r, c) * m(i, j) - m(i, c) * m(r, j);
        m(i, j) = prev.is_zero() ? std::move(v) : prev.exact_quotient_of(v);
      }
      m(i, c) = Poly<E>();
    }
    prev = m(r, c);
    ++r;
  }
  if (det_out) {
    if (rows == cols && r == rows && rows > 0) *det_out = negate ? -m(rows - 1, cols - 1) : m(rows - 1, cols - 1);
    else *det_out = Poly<E>();
  }
  return r;
}

}  // namespace detail

/// Rank over the field of fractions F(s).
template <class E>
Index normal_rank(const PolyMatrix<E>& g) {
  return detail::bareiss(g, static_cast<Poly<E>*>(nullptr));
}

/// Determinant of a non-empty square polynomial matrix.
template <class E>
Poly<E> determinant(const PolyMatrix<E>& g) {
  if (!g.square() || g.rows() == 0) throw std::invalid_argument("determinant needs a non-empty square matrix");
  Poly<E> d;
  detail::bareiss(g, &d);
  return d;
}

/// Cofactor expansion along the first row; independent of elimination.
template <class E>
Poly<E> laplace_determinant(const PolyMatrix<E>& g) {
  const Index n = g.rows();
  if (n == 1) return g(0, 0);
  Poly<E> acc;
  IndexList rest_rows(n - 1);
  for (Index i = 1; i < n; ++i) rest_rows[i - 1] = i;
  for (Index j = 0; j < n; ++j) {
    if (g(0, j).is_zero()) continue;
    IndexList cols;
    for (Index k = 0; k < n; ++k)
      if (k != j) cols.push_back(k);
    Poly<E> term = g(0, j) * laplace_determinant(g.submatrix(rest_rows, cols));
    if (j % 2 == 0) acc += term;
    else acc -= term;
  }
  return acc;
}

template <class E>
struct SmithForm {
  std::vector<Poly<E>> invariant_factors;  // monic, gamma_1 | ... | gamma_rho
  std::optional<PolyMatrix<E>> left;       // U with U * G * V = diag
  std::optional<PolyMatrix<E>> right;      // V
  Index rank() const { return invariant_factors.size(); }
};

/// Smith normal form by elementary operations over F[s]. Pivot: nonzero
/// entry of least degree, ties broken row-major.
template <class F>
SmithForm<Elem<F>> smith_form(const F& field, PolyMatrix<Elem<F>> a, bool want_witnesses = false) {
  using E = Elem<F>;
  using P = Poly<E>;
  const Index m = a.rows(), n = a.cols();
  PolyMatrix<E> u, v;
  if (want_witnesses) {
    u = PolyMatrix<E>::identity(m, P::constant(field.one()));
    v = PolyMatrix<E>::identity(n, P::constant(field.one()));
  }
  auto row_axpy = [&](Index dst, Index src, const P& q) {  // row dst -= q * row src
    for (Index j = 0; j < n; ++j)
      if (!a(src, j).is_zero()) a(dst, j) -= q * a(src, j);
    if (want_witnesses)
      for (Index j = 0; j < m; ++j)
        if (!u(src, j).is_zero()) u(dst, j) -= q * u(src, j);
  };
  auto col_axpy = [&](Index dst, Index src, const P& q) {  // col dst -= q * col src
    for (Index i = 0; i < m; ++i)
      if (!a(i, src).is_zero()) a(i, dst) -= a(i, src) * q;
    if (want_witnesses)
      for (Index i = 0; i < n; ++i)
        if (!v(i, src).is_zero()) v(i, dst) -= v(i, src) * q;
  };

  SmithForm<E> out;
  const Index kmax = std::min(m, n);
  for (Index k = 0; k < kmax; ++k) {
    for (;;) {
      Index pi = 0, pj = 0;
      int best = -1;
      for (Index i = k; i < m; ++i)
        for (Index j = k; j < n; ++j) {
          const int d = a(i, j).degree();
          if (d >= 0 && (best < 0 || d < best)) {
            best = d;
            pi = i;
            pj = j;
          }
        }
      if (best < 0) goto done;
      a.swap_rows(k, pi);
      a.swap_cols(k, pj);
      if (want_witnesses) {
        u.swap_rows(k, pi);
        v.swap_cols(k, pj);
      }
      bool clean = true;
      for (Index i = k + 1; i < m; ++i) {
        if (a(i, k).is_zero()) continue;
        row_axpy(i, k, a(i, k) / a(k, k));
        if (!a(i, k).is_zero()) clean = false;
      }
      for (Index j = k + 1; j < n; ++j) {
        if (a(k, j).is_zero()) continue;
        col_axpy(j, k, a(k, j) / a(k, k));
        if (!a(k, j).is_zero()) clean = false;
      }
      if (!clean) continue;
      // Absorb any entry the pivot does not divide.
      bool absorbed = false;
      for (Index i = k + 1; i < m && !absorbed; ++i)
        for (Index j = k + 1; j < n; ++j)
          if (!a(k, k).divides(a(i, j))) {
            row_axpy(k, i, P::constant(-field.one()));
            absorbed = true;
            break;
          }
      if (!absorbed) break;
    }
    {
      const E inv = a(k, k).lead().inv();
      for (Index j = 0; j < n; ++j) a(k, j) = a(k, j) * inv;
      if (want_witnesses)
        for (Index j = 0; j < m; ++j) u(k, j) = u(k, j) * inv;
      out.invariant_factors.push_back(a(k, k));
    }
  }
done:
  if (want_witnesses) {
    out.left = std::move(u);
    out.right = std::move(v);
  }
  return out;
}

/// Determinantal divisors D_1..D_rho as monic gcds of all k x k minors
/// (cofactor expansion). Exponential in size; intended for n <= 5.
template <class F>
std::vector<Poly<Elem<F>>> determinantal_divisors(const F& field, const PolyMatrix<Elem<F>>& g) {
  using P = Poly<Elem<F>>;
  std::vector<P> out;
  const Index kmax = std::min(g.rows(), g.cols());
  for (Index k = 1; k <= kmax; ++k) {
    P acc;
    for_each_combination(g.rows(), k, [&](const IndexList& rs) {
      for_each_combination(g.cols(), k, [&](const IndexList& cs) {
        P minor = laplace_determinant(g.submatrix(rs, cs));
        if (!minor.is_zero()) acc = acc.is_zero() ? minor.monic() : gcd(acc, minor);
        return acc.degree() != 0;
      });
      return acc.degree() != 0;
    });
    if (acc.is_zero()) break;
    out.push_back(acc);
  }
  (void)field;
  return out;
}

/// Invariant factors from determinantal divisors: gamma_k = D_k / D_{k-1}.
template <class F>
std::vector<Poly<Elem<F>>> invariant_factors_by_minors(const F& field, const PolyMatrix<Elem<F>>& g) {
  auto d = determinantal_divisors(field, g);
  std::vector<Poly<Elem<F>>> out;
  for (Index k = 0; k < d.size(); ++k) out.push_back(k == 0 ? d[0] : d[k - 1].exact_quotient_of(d[k]));
  return out;
}

}  // namespace fixrank
