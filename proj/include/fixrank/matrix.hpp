#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fixrank/field.hpp"

namespace fixrank {

using Index = std::size_t;
using IndexList = std::vector<Index>;

/// Dense row-major matrix. T is a field element or a polynomial; a
/// value-initialized T must be the additive identity.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(Index rows, Index cols) : r_(rows), c_(cols), d_(rows * cols) {}
  Matrix(Index rows, Index cols, const T& fill) : r_(rows), c_(cols), d_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    for (const auto& row : rows) {
      if (row.size() != c_) throw std::invalid_argument("ragged matrix literal");
      d_.insert(d_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(Index n, const T& one) {
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  Index rows() const { return r_; }
  Index cols() const { return c_; }
  bool square() const { return r_ == c_; }
  bool empty() const { return d_.empty(); }

  T& operator()(Index i, Index j) { return d_[i * c_ + j]; }
  const T& operator()(Index i, Index j) const { return d_[i * c_ + j]; }

  bool is_zero() const {
    for (const auto& x : d_)
      if (!x.is_zero()) return false;
    return true;
  }

  Matrix submatrix(const IndexList& rs, const IndexList& cs) const {
    Matrix m(rs.size(), cs.size());
    for (Index i = 0; i < rs.size(); ++i)
      for (Index j = 0; j < cs.size(); ++j) m(i, j) = (*this)(rs[i], cs[j]);
    return m;
  }

  Matrix transpose() const {
    Matrix m(c_, r_);
    for (Index i = 0; i < r_; ++i)
      for (Index j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  void swap_rows(Index a, Index b) {
    if (a == b) return;
    for (Index j = 0; j < c_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(Index a, Index b) {
    if (a == b) return;
    for (Index i = 0; i < r_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  /// Block-diagonal sum.
  static Matrix direct_sum(const Matrix& a, const Matrix& b) {
    Matrix m(a.r_ + b.r_, a.c_ + b.c_);
    m.set_block(0, 0, a);
    m.set_block(a.r_, a.c_, b);
    return m;
  }

  void set_block(Index r0, Index c0, const Matrix& b) {
    for (Index i = 0; i < b.r_; ++i)
      for (Index j = 0; j < b.c_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (Index k = 0; k < d_.size(); ++k) d_[k] += o.d_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (Index k = 0; k < d_.size(); ++k) d_[k] -= o.d_[k];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  Matrix operator-() const {
    Matrix m = *this;
    for (auto& x : m.d_) x = -x;
    return m;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("matrix product: dimension mismatch");
    Matrix m(a.r_, b.c_);
    for (Index i = 0; i < a.r_; ++i)
      for (Index k = 0; k < a.c_; ++k) {
        const T& x = a(i, k);
        if (x.is_zero()) continue;
        for (Index j = 0; j < b.c_; ++j) m(i, j) += x * b(k, j);
      }
    return m;
  }
  template <class S>
  Matrix scaled(const S& k) const {
    Matrix m = *this;
    for (auto& x : m.d_) x = x * k;
    return m;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.d_ == b.d_;
  }

  const std::vector<T>& data() const { return d_; }

 private:
  void check_same(const Matrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix sum: dimension mismatch");
  }
  Index r_ = 0, c_ = 0;
  std::vector<T> d_;
};

/// Complement of a sorted index set in {0, ..., n-1}.
inline IndexList complement(const IndexList& s, Index n) {
  IndexList out;
  std::vector<bool> in(n, false);
  for (Index i : s) in.at(i) = true;
  for (Index i = 0; i < n; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

/// Calls fn(subset) for every k-subset of {0..n-1} in lexicographic order;
/// stops early when fn returns false.
template <class Fn>
void for_each_combination(Index n, Index k, Fn&& fn) {
  if (k > n) return;
  IndexList c(k);
  for (Index i = 0; i < k; ++i) c[i] = i;
  for (;;) {
    if (!fn(static_cast<const IndexList&>(c))) return;
    Index i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (Index j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

// ---------------------------------------------------------------------------
// Linear algebra over a field.

template <class E>
struct EchelonForm {
  Matrix<E> reduced;  // reduced row echelon form
  IndexList pivot_cols;
};

template <class E>
EchelonForm<E> rref(Matrix<E> m) {
  IndexList pivots;
  Index row = 0;
  for (Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Index p = row;
    while (p < m.rows() && m(p, col).is_zero()) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, row);
    E inv = m(row, col).inv();
    for (Index j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (Index i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      E f = m(i, col);
      for (Index j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

template <class E>
Index rank(const Matrix<E>& m) {
  return rref(m).pivot_cols.size();
}

template <class E>
E det(Matrix<E> m) {
  if (!m.square()) throw std::invalid_argument("determinant of non-square matrix");
  const Index n = m.rows();
  if (n == 0) throw std::invalid_argument("determinant of empty matrix needs a field unit");
  bool first = true;
  E acc{};
  bool negate = false;
  for (Index col = 0; col < n; ++col) {
    Index p = col;
    while (p < n && m(p, col).is_zero()) ++p;
    if (p == n) return E{};
    if (p != col) {
      m.swap_rows(p, col);
      negate = !negate;
    }
    acc = first ? m(col, col) : acc * m(col, col);
    first = false;
    E inv = m(col, col).inv();
    for (Index i = col + 1; i < n; ++i) {
      if (m(i, col).is_zero()) continue;
      E f = m(i, col) * inv;
      for (Index j = col; j < n; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return negate ? -acc : acc;
}

/// Inverse of a square matrix; throws std::domain_error when singular.
template <class E>
Matrix<E> inverse(const Matrix<E>& m, const E& one) {
  if (!m.square()) throw std::invalid_argument("inverse of non-square matrix");
  const Index n = m.rows();
  Matrix<E> aug(n, 2 * n);
  aug.set_block(0, 0, m);
  aug.set_block(0, n, Matrix<E>::identity(n, one));
  auto e = rref(std::move(aug));
  if (e.pivot_cols.size() < n || (n > 0 && e.pivot_cols[n - 1] >= n)) throw std::domain_error("singular matrix");
  Matrix<E> inv(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

/// Columns form a basis of the null space.
template <class E>
Matrix<E> kernel(const Matrix<E>& m, const E& one) {
  auto e = rref(m);
  const IndexList free_cols = complement(e.pivot_cols, m.cols());
  Matrix<E> k(m.cols(), free_cols.size());
  for (Index f = 0; f < free_cols.size(); ++f) {
    k(free_cols[f], f) = one;
    for (Index r = 0; r < e.pivot_cols.size(); ++r) k(e.pivot_cols[r], f) = -e.reduced(r, free_cols[f]);
  }
  return k;
}

/// Columns form a basis of the column space.
template <class E>
Matrix<E> column_basis(const Matrix<E>& m) {
  auto e = rref(m);
  IndexList rows(m.rows());
  for (Index i = 0; i < m.rows(); ++i) rows[i] = i;
  return m.submatrix(rows, e.pivot_cols);
}

/// Greedy (lexicographically smallest) set of linearly independent rows.
template <class E>
IndexList independent_rows(const Matrix<E>& m) {
  return rref(m.transpose()).pivot_cols;
}

template <class E>
Matrix<E> hcat(const Matrix<E>& a, const Matrix<E>& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hcat: row mismatch");
  Matrix<E> m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

/// Basis of { x : m x in span(u) }.
template <class E>
Matrix<E> preimage(const Matrix<E>& m, const Matrix<E>& u, const E& one) {
  Matrix<E> k = kernel(hcat(m, -u), one);
  IndexList top(m.cols());
  IndexList all(k.cols());
  for (Index i = 0; i < m.cols(); ++i) top[i] = i;
  for (Index j = 0; j < k.cols(); ++j) all[j] = j;
  return column_basis(k.submatrix(top, all));
}

/// Characteristic polynomial coefficients det(sI - m), lowest first, via
/// reduction to upper Hessenberg form.
template <class E>
std::vector<E> charpoly(Matrix<E> h, const E& one) {
  const Index n = h.rows();
  for (Index k = 0; k + 2 <= n; ++k) {
    Index p = k + 1;
    while (p < n && h(p, k).is_zero()) ++p;
    if (p == n) continue;
    if (p != k + 1) {
      h.swap_rows(p, k + 1);
      h.swap_cols(p, k + 1);
    }
    E inv = h(k + 1, k).inv();
    for (Index i = k + 2; i < n; ++i) {
      if (h(i, k).is_zero()) continue;
      E f = h(i, k) * inv;
      for (Index j = 0; j < n; ++j) h(i, j) -= f * h(k + 1, j);
      for (Index j = 0; j < n; ++j) h(j, k + 1) += f * h(j, i);
    }
  }
  // p_k(s) = det of leading k x k block of sI - H.
  std::vector<std::vector<E>> p(n + 1);
  p[0] = {one};
  for (Index k = 1; k <= n; ++k) {
    std::vector<E> cur(k + 1);
    // (s - h_kk) p_{k-1}
    for (Index d = 0; d < p[k - 1].size(); ++d) {
      cur[d + 1] += p[k - 1][d];
      cur[d] -= h(k - 1, k - 1) * p[k - 1][d];
    }
    E prod = one;
    for (Index i = k - 1; i-- > 0;) {
      prod *= h(i + 1, i);
      E c = h(i, k - 1) * prod;
      if (c.is_zero()) continue;
      for (Index d = 0; d < p[i].size(); ++d) cur[d] -= c * p[i][d];
    }
    p[k] = std::move(cur);
  }
  return p[n];
}

}  // namespace fixrank
