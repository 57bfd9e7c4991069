#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fixrank/homog.hpp"
#include "fixrank/polymatrix.hpp"

namespace fixrank {

/// Matrix pencil G(s) = G0 + s*G1.
template <class E>
struct Pencil {
  Matrix<E> g0, g1;

  Pencil() = default;
  Pencil(Matrix<E> a0, Matrix<E> a1) : g0(std::move(a0)), g1(std::move(a1)) {
    if (g0.rows() != g1.rows() || g0.cols() != g1.cols()) throw std::invalid_argument("pencil coefficients differ in shape");
  }
  static Pencil zeros(Index m, Index n) { return Pencil(Matrix<E>(m, n), Matrix<E>(m, n)); }

  Index rows() const { return g0.rows(); }
  Index cols() const { return g0.cols(); }
  bool square() const { return g0.square(); }
  bool is_zero() const { return g0.is_zero() && g1.is_zero(); }

  PolyMatrix<E> poly() const {
    PolyMatrix<E> p(rows(), cols());
    for (Index i = 0; i < rows(); ++i)
      for (Index j = 0; j < cols(); ++j) p(i, j) = Poly<E>(std::vector<E>{g0(i, j), g1(i, j)});
    return p;
  }
  /// G(c); G(infinity) = G1.
  Matrix<E> at(const ExtPoint<E>& c) const { return c ? g0 + g1.scaled(*c) : g1; }
  /// G1 + s*G0.
  Pencil reversed() const { return Pencil(g1, g0); }

  Pencil& operator+=(const Pencil& o) {
    g0 += o.g0;
    g1 += o.g1;
    return *this;
  }
  friend Pencil operator+(Pencil a, const Pencil& b) { return a += b; }
  friend Pencil operator-(Pencil a, const Pencil& b) {
    a.g0 -= b.g0;
    a.g1 -= b.g1;
    return a;
  }
  friend Pencil operator*(const Matrix<E>& q, const Pencil& p) { return Pencil(q * p.g0, q * p.g1); }
  friend Pencil operator*(const Pencil& p, const Matrix<E>& r) { return Pencil(p.g0 * r, p.g1 * r); }
  friend bool operator==(const Pencil& a, const Pencil& b) { return a.g0 == b.g0 && a.g1 == b.g1; }
};

template <class E>
Pencil<E> constant_pencil(const Matrix<E>& m) {
  return Pencil<E>(m, Matrix<E>(m.rows(), m.cols()));
}

/// sI + m.
template <class E>
Pencil<E> monic_pencil(const Matrix<E>& m, const E& one) {
  return Pencil<E>(m, Matrix<E>::identity(m.rows(), one));
}

template <class E>
Index normal_rank(const Pencil<E>& p) {
  return normal_rank(p.poly());
}

template <class E>
bool is_regular(const Pencil<E>& p) {
  return p.square() && p.rows() > 0 && normal_rank(p) == p.rows();
}

/// P_X(s G1 + G0) = s(x G1 + z G0) + (y G1 + w G0).
template <class E>
Pencil<E> mobius_pencil(const MobiusMap<E>& X, const Pencil<E>& g) {
  return Pencil<E>(g.g1.scaled(X.y) + g.g0.scaled(X.w), g.g1.scaled(X.x) + g.g0.scaled(X.z));
}

/// Homogeneous invariant factors Gamma_1 | ... | Gamma_n of a regular pencil.
template <class E>
class WeierstrassStructure {
 public:
  WeierstrassStructure() = default;
  explicit WeierstrassStructure(std::vector<HomogPoly<E>> factors) : f_(std::move(factors)) {}

  Index size() const { return f_.size(); }
  const HomogPoly<E>& operator[](Index i) const { return f_[i]; }
  const std::vector<HomogPoly<E>>& factors() const { return f_; }

  /// 1-based access with the conventions Gamma_i = 1 for i < 1 and
  /// Gamma_i = 0 for i > n.
  HomogPoly<E> at(long i) const {
    if (i < 1) return HomogPoly<E>::one(unit());
    if (i > static_cast<long>(f_.size())) return HomogPoly<E>::zero();
    return f_[i - 1];
  }

  E unit() const {
    for (const auto& h : f_)
      if (!h.is_zero()) return h.unit();
    throw std::logic_error("structure has no nonzero factor");
  }

  int total_degree() const {
    int d = 0;
    for (const auto& h : f_) d += h.degree();
    return d;
  }

  /// Chain-divisible, all nonzero, and degrees summing to the size.
  bool valid() const {
    for (Index i = 0; i < f_.size(); ++i) {
      if (f_[i].is_zero()) return false;
      if (i > 0 && !f_[i - 1].divides(f_[i])) return false;
    }
    return total_degree() == static_cast<int>(f_.size());
  }

  std::vector<int> inf_mults() const {
    std::vector<int> m;
    for (const auto& h : f_) m.push_back(h.inf_mult());
    return m;
  }
  std::vector<Poly<E>> finite_factors() const {
    std::vector<Poly<E>> g;
    for (const auto& h : f_) g.push_back(h.finite());
    return g;
  }

  /// Partial multiplicities m_1 <= ... <= m_n at a base-field point or infinity.
  std::vector<int> partial_multiplicities(const ExtPoint<E>& lambda) const {
    std::vector<int> m;
    for (const auto& h : f_) m.push_back(lambda ? root_multiplicity(h.finite(), *lambda) : h.inf_mult());
    return m;
  }
  int algebraic_multiplicity(const ExtPoint<E>& lambda) const {
    int s = 0;
    for (int x : partial_multiplicities(lambda)) s += x;
    return s;
  }
  /// Whether lambda is an eigenvalue: Gamma_n(lambda, 1) = 0.
  bool has_eigenvalue(const ExtPoint<E>& lambda) const {
    return !f_.empty() && f_.back().eval(lambda).is_zero();
  }
  /// Product of all factors: det of the homogeneous pencil up to a scalar.
  HomogPoly<E> determinant() const {
    HomogPoly<E> acc = HomogPoly<E>::one(unit());
    for (const auto& h : f_) acc = acc * h;
    return acc;
  }

  friend bool operator==(const WeierstrassStructure& a, const WeierstrassStructure& b) { return a.f_ == b.f_; }

  std::string str() const {
    std::string s = "(";
    for (Index i = 0; i < f_.size(); ++i) s += (i ? ", " : "") + f_[i].str();
    return s + ")";
  }

  /// Canonical serialized key for set operations.
  std::string key() const {
    std::string k;
    for (const auto& h : f_) {
      k += std::to_string(h.inf_mult()) + ":";
      for (const auto& c : h.finite().coeffs()) k += c.str() + ",";
      k += ";";
    }
    return k;
  }

 private:
  std::vector<HomogPoly<E>> f_;
};

template <class E>
WeierstrassStructure<E> make_structure(const std::vector<Poly<E>>& finite, const std::vector<int>& inf) {
  std::vector<HomogPoly<E>> f;
  for (Index i = 0; i < finite.size(); ++i) f.emplace_back(inf[i], finite[i]);
  return WeierstrassStructure<E>(std::move(f));
}

namespace detail {

template <class F>
void require_regular_shape(const Pencil<Elem<F>>& a) {
  if (!a.square() || a.rows() == 0) throw std::invalid_argument("not regular: pencil is not square");
}

template <class E>
std::vector<Poly<E>> pad_front(std::vector<Poly<E>> g, Index n, const E& one) {
  std::vector<Poly<E>> out(n - g.size(), Poly<E>::constant(one));
  out.insert(out.end(), g.begin(), g.end());
  return out;
}

}  // namespace detail

/// Weierstrass structure of a regular pencil. Finite parts are the invariant
/// factors of A(s); infinite multiplicities are the s-valuations of the
/// invariant factors of the reversed pencil G1 + s*G0.
template <class F>
WeierstrassStructure<Elem<F>> weierstrass_structure(const F& field, const Pencil<Elem<F>>& a) {
  detail::require_regular_shape<F>(a);
  const Index n = a.rows();
  auto fin = smith_form(field, a.poly()).invariant_factors;
  if (fin.size() != n) throw std::invalid_argument("not regular: determinant vanishes identically");
  auto rev = smith_form(field, a.reversed().poly()).invariant_factors;
  std::vector<int> inf;
  for (const auto& g : rev) inf.push_back(g.valuation());
  auto s = make_structure(fin, inf);
  if (s.total_degree() != static_cast<int>(n)) throw std::logic_error("structure degree sum differs from size");
  return s;
}

/// Same quantity computed from gcds of minors; independent of elimination.
template <class F>
WeierstrassStructure<Elem<F>> weierstrass_structure_by_minors(const F& field, const Pencil<Elem<F>>& a) {
  detail::require_regular_shape<F>(a);
  const Index n = a.rows();
  auto fin = invariant_factors_by_minors(field, a.poly());
  if (fin.size() != n) throw std::invalid_argument("not regular: determinant vanishes identically");
  auto rev = invariant_factors_by_minors(field, a.reversed().poly());
  std::vector<int> inf;
  for (const auto& g : rev) inf.push_back(g.valuation());
  return make_structure(fin, inf);
}

/// Image of a structure under Pi_X, each factor monic-normalized.
template <class E>
WeierstrassStructure<E> mobius_structure(const MobiusMap<E>& X, const WeierstrassStructure<E>& s) {
  std::vector<HomogPoly<E>> f;
  for (const auto& h : s.factors()) f.push_back(mobius_homog(X, h).second);
  return WeierstrassStructure<E>(std::move(f));
}

/// First candidate c with A(c) invertible (c = infinity tests G1).
template <class E>
std::optional<ExtPoint<E>> spectrum_witness(const Pencil<E>& a, const std::vector<ExtPoint<E>>& candidates) {
  if (!a.square()) throw std::invalid_argument("spectrum witness needs a square pencil");
  for (const auto& c : candidates)
    if (rank(a.at(c)) == a.rows()) return c;
  return std::nullopt;
}

/// Canonical candidate order: infinity, then the field enumeration 0, 1, 2, ...
/// (limit caps the number of finite candidates for infinite fields).
template <class F>
std::vector<ExtPoint<Elem<F>>> candidate_points(const F& field, std::uint64_t limit) {
  std::vector<ExtPoint<Elem<F>>> c{std::nullopt};
  const std::uint64_t n = field.finite() ? std::min<std::uint64_t>(field.order(), limit) : limit;
  for (std::uint64_t k = 0; k < n; ++k) c.push_back(field.element(k));
  return c;
}

/// Schur complement G/G(I,J) over a field; throws when the block is singular.
template <class E>
Matrix<E> schur_complement(const Matrix<E>& g, const IndexList& rows, const IndexList& cols, const E& one) {
  if (rows.size() != cols.size()) throw std::invalid_argument("schur complement: |I| != |J|");
  const IndexList rc = complement(rows, g.rows()), cc = complement(cols, g.cols());
  Matrix<E> inv = inverse(g.submatrix(rows, cols), one);
  return g.submatrix(rc, cc) - g.submatrix(rc, cols) * inv * g.submatrix(rows, cc);
}

/// Schur complement over F[s]; the block must be unimodular (constant
/// nonzero determinant) so the complement stays polynomial.
template <class E>
PolyMatrix<E> schur_complement(const PolyMatrix<E>& g, const IndexList& rows, const IndexList& cols) {
  if (rows.size() != cols.size()) throw std::invalid_argument("schur complement: |I| != |J|");
  const IndexList rc = complement(rows, g.rows()), cc = complement(cols, g.cols());
  const PolyMatrix<E> block = g.submatrix(rows, cols);
  const Index k = block.rows();
  if (k == 0) return g.submatrix(rc, cc);
  const Poly<E> d = determinant(block);
  if (d.degree() != 0) throw std::domain_error("schur complement: block is not invertible over F[s]");
  const E dinv = d.lead().inv();
  PolyMatrix<E> inv(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      if (k == 1) {
        inv(0, 0) = Poly<E>::constant(dinv);
        continue;
      }
      // inv(i, j) = (-1)^{i+j} det(block without row j, col i) / det
      IndexList rs = complement({j}, k), cs = complement({i}, k);
      Poly<E> c = determinant(block.submatrix(rs, cs)) * dinv;
      inv(i, j) = (i + j) % 2 ? -c : c;
    }
  return g.submatrix(rc, cc) - g.submatrix(rc, cols) * inv * g.submatrix(rows, cc);
}

/// Strict-equivalence decomposition S*A*T = diag(sI + M, I + sN) with N
/// nilpotent, computed from the Wong limit subspaces.
template <class E>
struct WeierstrassDecomposition {
  Matrix<E> left, right;          // S, T
  Matrix<E> left_inv, right_inv;  // S^{-1}, T^{-1}
  Matrix<E> finite_part;          // M, size n_f
  Matrix<E> nilpotent_part;       // N, size n - n_f
};

template <class F>
WeierstrassDecomposition<Elem<F>> weierstrass_decomposition(const F& field, const Pencil<Elem<F>>& a) {
  using E = Elem<F>;
  if (!is_regular(a)) throw std::invalid_argument("not regular");
  const Index n = a.rows();
  const E one = field.one();
  // V* : V <- G0^{-1}(G1 V), starting from the whole space.
  Matrix<E> v = Matrix<E>::identity(n, one);
  for (;;) {
    Matrix<E> next = preimage(a.g0, a.g1 * v, one);
    if (next.cols() == v.cols()) break;
    v = std::move(next);
  }
  // W* : W <- G1^{-1}(G0 W), starting from {0}.
  Matrix<E> w(n, 0);
  for (;;) {
    Matrix<E> next = preimage(a.g1, a.g0 * w, one);
    if (next.cols() == w.cols()) break;
    w = std::move(next);
  }
  const Index nf = v.cols();
  if (nf + w.cols() != n) throw std::logic_error("Wong subspaces do not split the space");
  WeierstrassDecomposition<E> d;
  d.right_inv = Matrix<E>();
  Matrix<E> t = hcat(v, w);
  Matrix<E> sinv = hcat(a.g1 * v, a.g0 * w);
  d.right = t;
  d.right_inv = inverse(t, one);
  d.left_inv = sinv;
  d.left = inverse(sinv, one);
  const Matrix<E> b0 = d.left * a.g0 * t, b1 = d.left * a.g1 * t;
  IndexList fin(nf), inf(n - nf);
  for (Index i = 0; i < nf; ++i) fin[i] = i;
  for (Index i = nf; i < n; ++i) inf[i - nf] = i;
  d.finite_part = b0.submatrix(fin, fin);
  d.nilpotent_part = b1.submatrix(inf, inf);
  const Pencil<E> expect(Matrix<E>::direct_sum(d.finite_part, Matrix<E>::identity(n - nf, one)),
                         Matrix<E>::direct_sum(Matrix<E>::identity(nf, one), d.nilpotent_part));
  if (!(Pencil<E>(b0, b1) == expect)) throw std::logic_error("Weierstrass decomposition failed to block-diagonalize");
  return d;
}

}  // namespace fixrank
