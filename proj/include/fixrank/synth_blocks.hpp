#pragma once

// Building blocks of the synthesis chain for pencils with identity leading
// coefficient: the invertible pair E, I + E; full-rank and rank-inflating
// perturbations; and a certified search for the constant bounded-rank core.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fixrank/structure.hpp"

namespace fixrank {

/// A search that the theory says must succeed came back empty.
class TheoremContradiction : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SynthOptions {
  std::uint64_t seed = 0;                  // 0 keeps the canonical candidate order
  std::uint64_t rational_candidate_cap = 2'000'000;
  std::uint64_t orbit_budget = 4'000'000;  // (K, R) pairs in the orbit search
  bool cross_check_minors = true;          // second structure engine for n <= 4
};

/// E with E and I + E both invertible.
template <class F>
Matrix<Elem<F>> build_E_invertible(const F& field, Index n) {
  using E = Elem<F>;
  const E one = field.one();
  if (!field.finite() || field.order() > 2) {
    if (n < 1) throw std::invalid_argument("build_E_invertible: n must be positive");
    for (std::uint64_t k = 0;; ++k) {
      const E c = field.element(k);
      if (!c.is_zero() && !(c == -one)) return Matrix<E>::identity(n, one).scaled(c);
    }
  }
  if (n < 2) throw std::invalid_argument("build_E_invertible: no such matrix of size 1 over GF(2)");
  Matrix<E> e{{one, one}, {one, field.zero()}};
  for (Index p = 2; p < n; ++p) {
    const Matrix<E> id = Matrix<E>::identity(p, one);
    const Matrix<E> einv = inverse(e, one);
    const Matrix<E> r = einv - inverse(id + e, one);
    Index bi = p, bj = p;
    for (Index i = 0; i < p && bi == p; ++i)
      for (Index j = 0; j < p; ++j)
        if (!r(i, j).is_zero()) {
          bi = i;
          bj = j;
          break;
        }
    if (bi == p) throw std::logic_error("build_E_invertible: difference of inverses vanished");
    Matrix<E> next(p + 1, p + 1, field.zero());
    next.set_block(0, 0, e);
    next(bj, p) = one;
    next(p, bi) = one;
    next(p, p) = einv(bi, bj) - one;
    e = std::move(next);
  }
  if (rank(e) != n || rank(Matrix<E>::identity(n, one) + e) != n)
    throw std::logic_error("build_E_invertible: construction failed");
  return e;
}

/// P(s) = E s + (I + E) B0 - A0, so that A(s) + P(s) = (I + E)(sI + B0).
template <class F>
Pencil<Elem<F>> full_rank_perturb(const F& field, const Pencil<Elem<F>>& a, const Pencil<Elem<F>>& b) {
  using E = Elem<F>;
  detail::require_identity_leading(a, "full_rank_perturb");
  detail::require_identity_leading(b, "full_rank_perturb");
  const Index n = a.rows();
  if (b.rows() != n) throw std::invalid_argument("full_rank_perturb: size mismatch");
  if (n < 2) throw std::invalid_argument("full_rank_perturb: n must be at least 2");
  const Matrix<E> e = build_E_invertible(field, n);
  const Matrix<E> ie = Matrix<E>::identity(n, field.one()) + e;
  return Pencil<E>(ie * b.g0 - a.g0, e);
}

namespace detail {

inline IndexList take(const IndexList& v, Index k) { return IndexList(v.begin(), v.begin() + k); }

inline IndexList set_minus(const IndexList& a, const IndexList& b) {
  IndexList out;
  for (Index x : a)
    if (std::find(b.begin(), b.end(), x) == b.end()) out.push_back(x);
  return out;
}

}  // namespace detail

/// E of rank r - r1 with I + E invertible, zero rows I and zero columns J.
template <class F>
Matrix<Elem<F>> build_E_index_sets(const F& field, Index n, Index r1, Index r, IndexList rows, IndexList cols) {
  using E = Elem<F>;
  if (!(r1 < r && r < n)) throw std::invalid_argument("build_E_index_sets: need r1 < r < n");
  if (rows.size() != r1 || cols.size() != r1) throw std::invalid_argument("build_E_index_sets: |I| and |J| must equal r1");
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  const IndexList ic = complement(rows, n), jc = complement(cols, n);
  const IndexList x = detail::set_minus(ic, detail::set_minus(ic, jc));  // I^c and J^c
  const IndexList y = detail::set_minus(ic, x), z = detail::set_minus(jc, x);
  const Index a = y.size(), d = r - r1;

  IndexList r1set, r2set, s2set;
  if (a >= d) {
    r2set = detail::take(y, d);
    s2set = detail::take(z, d);
  } else if (d - a >= 2) {
    r2set = y;
    s2set = z;
    r1set = detail::take(x, d - a);
  } else if (a >= 1) {
    r1set = detail::take(x, 2);
    r2set = detail::take(y, a - 1);
    s2set = detail::take(z, a - 1);
  } else {
    r2set = {x.at(0)};
    s2set = {x.at(1)};
  }
  const Index xs = r1set.size(), as = r2set.size();

  IndexList order = r1set;
  order.insert(order.end(), r2set.begin(), r2set.end());
  order.insert(order.end(), s2set.begin(), s2set.end());
  IndexList rest = complement(order, n);
  order.insert(order.end(), rest.begin(), rest.end());

  Matrix<E> bar(n, n, field.zero());
  if (xs > 0) bar.set_block(0, 0, build_E_invertible(field, xs));
  for (Index k = 0; k < as; ++k) bar(xs + k, xs + as + k) = field.one();

  Matrix<E> e(n, n, field.zero());
  for (Index k = 0; k < n; ++k)
    for (Index l = 0; l < n; ++l) e(order[k], order[l]) = bar(k, l);

  // The four conclusions, checked on every call.
  if (rank(e) != d) throw std::logic_error("build_E_index_sets: wrong rank");
  if (rank(Matrix<E>::identity(n, field.one()) + e) != n) throw std::logic_error("build_E_index_sets: I + E singular");
  for (Index i : rows)
    for (Index j = 0; j < n; ++j)
      if (!e(i, j).is_zero()) throw std::logic_error("build_E_index_sets: nonzero row in I");
  for (Index j : cols)
    for (Index i = 0; i < n; ++i)
      if (!e(i, j).is_zero()) throw std::logic_error("build_E_index_sets: nonzero column in J");
  return e;
}

/// P(s) = P + E (sI + A0 + P) of normal rank exactly r, where rank P < r < n.
/// A(s) + P(s) = (I + E)(A(s) + P).
template <class F>
Pencil<Elem<F>> inflate_rank(const F& field, const Pencil<Elem<F>>& a, const Matrix<Elem<F>>& p, Index r) {
  using E = Elem<F>;
  detail::require_identity_leading(a, "inflate_rank");
  const Index n = a.rows(), r1 = rank(p);
  if (!(r1 < r && r < n)) throw std::invalid_argument("inflate_rank: need rank(P) < r < n");
  const IndexList rows = independent_rows(p);
  const IndexList cols = rref(p).pivot_cols;
  const Matrix<E> e = build_E_index_sets(field, n, r1, r, rows, cols);
  const Pencil<E> out = constant_pencil(p) + e * (a + constant_pencil(p));
  if (normal_rank(out) != r) throw std::logic_error("inflate_rank: rank of P(s) differs from r");
  const auto tail = schur_complement(out.poly(), rows, cols);
  if (normal_rank(tail) != r - r1) throw std::logic_error("inflate_rank: Schur complement rank bound violated");
  return out;
}

namespace detail {

// Structure of sI + m: only finite invariant factors are possible.
template <class F>
WeierstrassStructure<Elem<F>> monic_structure(const F& field, const Matrix<Elem<F>>& m) {
  auto fin = smith_form(field, monic_pencil(m, field.one()).poly()).invariant_factors;
  return make_structure(fin, std::vector<int>(fin.size(), 0));
}

// Vectors of length n over the given alphabet, nonzero, ordered by support
// size then lexicographically by digit. With normalize, the first nonzero
// entry must be the first nonzero alphabet letter (alphabet[1]).
template <class E>
std::vector<std::vector<E>> candidate_vectors(Index n, const std::vector<E>& alphabet, bool normalize) {
  std::vector<std::pair<Index, std::vector<Index>>> digits;
  std::vector<Index> d(n, 0);
  const Index q = alphabet.size();
  for (;;) {
    Index i = n;
    while (i > 0 && d[i - 1] == q - 1) d[--i] = 0;
    if (i == 0) break;
    ++d[i - 1];
    Index weight = 0, first = 0;
    bool seen = false;
    for (Index k = 0; k < n; ++k)
      if (d[k] != 0) {
        ++weight;
        if (!seen) first = d[k];
        seen = true;
      }
    if (normalize && first != 1) continue;
    digits.emplace_back(weight, d);
  }
  std::stable_sort(digits.begin(), digits.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::vector<E>> out;
  for (const auto& [w, dv] : digits) {
    std::vector<E> v;
    for (Index k : dv) v.push_back(alphabet[k]);
    out.push_back(std::move(v));
  }
  return out;
}

template <class F>
std::vector<std::vector<Elem<F>>> search_alphabets(const F& field) {
  using E = Elem<F>;
  std::vector<std::vector<E>> out;
  if (field.finite()) {
    std::vector<E> all;
    for (std::uint64_t k = 0; k < field.order(); ++k) all.push_back(field.element(k));
    out.push_back(all);
    return out;
  }
  for (int h : {1, 2, 3}) {
    std::vector<E> alpha{field.zero()};
    for (int k = 1; k <= h; ++k) {
      alpha.push_back(field.from_int(k));
      alpha.push_back(field.from_int(-k));
    }
    out.push_back(alpha);
  }
  return out;
}

// Whether g has an irreducible factor not dividing known.
template <class E>
bool has_foreign_factor(Poly<E> g, const Poly<E>& known) {
  for (;;) {
    if (g.degree() <= 0) return false;
    const Poly<E> h = gcd(g, known);
    if (h.degree() == 0) return true;
    g = h.exact_quotient_of(g);
  }
}

}  // namespace detail

template <class E>
struct CoreResult {
  Matrix<E> p;
  bool searched = false;  // false when a closed-form shortcut sufficed
};

namespace detail {

// Coefficients B_0..B_{n-1} of adj(sI + m) = sum_k B_k s^k.
template <class F>
std::vector<Matrix<Elem<F>>> adjugate_coeffs(const F& field, const Matrix<Elem<F>>& m) {
  using E = Elem<F>;
  const Index n = m.rows();
  const Matrix<E> a = -m;  // sI + m = sI - a
  const std::vector<E> c = charpoly(a, field.one());
  std::vector<Matrix<E>> b(n);
  b[n - 1] = Matrix<E>::identity(n, field.one());
  for (Index k = n - 1; k > 0; --k) b[k - 1] = a * b[k] + Matrix<E>::identity(n, field.one()).scaled(c[k]);
  return b;
}

// Rank-one step u v^T with sI + m + u v^T of structure psi, u drawn from the
// candidates and v solved from the determinant identity
//   det(sI + m + u v^T) = det(sI + m) + v^T adj(sI + m) u,
// which is affine in v.
template <class F>
std::optional<Matrix<Elem<F>>> exact_rank_one_step(const F& field, const Matrix<Elem<F>>& m,
                                                   const WeierstrassStructure<Elem<F>>& psi,
                                                   const std::vector<std::vector<Elem<F>>>& us) {
  using E = Elem<F>;
  const Index n = m.rows();
  const auto b = adjugate_coeffs(field, m);
  const Poly<E> base(charpoly(-m, field.one()));
  const Poly<E> rhs = psi.determinant().finite() - base;
  for (const auto& u : us) {
    Matrix<E> uu(n, 1, field.zero());
    for (Index i = 0; i < n; ++i) uu(i, 0) = u[i];
    Matrix<E> aug(n, n + 1, field.zero());
    for (Index k = 0; k < n; ++k) {
      const Matrix<E> w = b[k] * uu;
      for (Index j = 0; j < n; ++j) aug(k, j) = w(j, 0);
      aug(k, n) = rhs.coeff(static_cast<int>(k));
    }
    const auto e = rref(aug);
    if (!e.pivot_cols.empty() && e.pivot_cols.back() == n) continue;  // inconsistent
    Matrix<E> v0(n, 1, field.zero());
    for (Index k = 0; k < e.pivot_cols.size(); ++k) v0(e.pivot_cols[k], 0) = e.reduced(k, n);
    IndexList all(n);
    for (Index i = 0; i < n; ++i) all[i] = i;
    const Matrix<E> ker = kernel(aug.submatrix(all, all), field.one());
    std::vector<Matrix<E>> tries{v0};
    for (Index j = 0; j < ker.cols(); ++j) {
      Matrix<E> kj = ker.submatrix(all, {j});
      tries.push_back(v0 + kj);
      tries.push_back(v0 - kj);
    }
    for (const auto& v : tries) {
      const Matrix<E> step = uu * v.transpose();
      if (monic_structure(field, m + step) == psi) return step;
    }
  }
  return std::nullopt;
}

template <class F>
struct Descent {
  using E = Elem<F>;
  const F& field;
  const WeierstrassStructure<E>& psi;
  const Matrix<E>& b0;
  Index r;
  const SynthOptions& opt;
  Poly<E> known;
  std::vector<std::vector<E>> all_u;
  std::uint64_t tried = 0;
  bool exhausted = false;
  std::mt19937_64 rng{opt.seed};

  bool over_budget() {
    if (field.finite()) return false;
    if (++tried > opt.rational_candidate_cap) exhausted = true;
    return exhausted;
  }

  // Depth-first search over rank-one steps; total accumulates the perturbation.
  std::optional<Matrix<E>> run(const Matrix<E>& m, const Matrix<E>& total, Index d) {
    if (d == 0) return total;
    {
      Matrix<E> finish = total + (b0 - m);
      if (rank(finish) <= r) return finish;
    }
    if (d == 1)
      if (auto step = exact_rank_one_step(field, m, psi, all_u)) return total + *step;
    const Index n = m.rows();
    // det(sI + M') must be divisible by psi_1 ... psi_{n-d+1}.
    Poly<E> need = Poly<E>::constant(field.one());
    for (Index i = 0; i + d <= n; ++i) need = need * psi[i].finite();
    std::vector<std::string> visited;
    for (const auto& alpha : search_alphabets(field)) {
      const auto us = candidate_vectors<E>(n, alpha, true);
      const auto vs = candidate_vectors<E>(n, alpha, false);
      std::vector<std::pair<Index, Index>> pairs;
      for (Index i = 0; i < us.size(); ++i)
        for (Index j = 0; j < vs.size(); ++j) pairs.emplace_back(i, j);
      auto weight = [](const std::vector<E>& v) {
        return std::count_if(v.begin(), v.end(), [](const E& x) { return !x.is_zero(); });
      };
      std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
        return weight(us[x.first]) + weight(vs[x.second]) < weight(us[y.first]) + weight(vs[y.second]);
      });
      if (opt.seed != 0) std::shuffle(pairs.begin(), pairs.end(), rng);
      // First pass keeps the spectrum inside that of the start and target;
      // the second accepts any step.
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& [iu, iv] : pairs) {
          if (over_budget()) return std::nullopt;
          Matrix<E> step(n, n, field.zero());
          for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) step(i, j) = us[iu][i] * vs[iv][j];
          Matrix<E> cand = m + step;
          const Poly<E> det_cand(charpoly(-cand, field.one()));
          if (!need.divides(det_cand)) continue;
          if (pass == 0 && has_foreign_factor(det_cand, known)) continue;
          const auto chi = monic_structure(field, cand);
          if (min_rank(chi, psi) + 1 != d) continue;
          const std::string key = chi.key();
          if (std::find(visited.begin(), visited.end(), key) != visited.end()) continue;
          visited.push_back(key);
          if (auto done = run(cand, total + step, d - 1)) return done;
          if (exhausted) return std::nullopt;
        }
    }
    return std::nullopt;
  }
};

}  // namespace detail

/// Constant P with rank(P) <= r and sI + M + P strictly equivalent to the
/// canonical pencil of psi. Closed-form shortcuts first; otherwise a
/// depth-first descent through rank-one steps, each lowering the minimal rank
/// to psi by one, with the last step solved exactly. Over finite fields every
/// rank-one step is enumerated, so an empty search contradicts the
/// bounded-rank theorem. Over Q the search is height-bounded and may come
/// back empty.
template <class F>
std::optional<CoreResult<Elem<F>>> constant_core(const F& field, const Pencil<Elem<F>>& a,
                                                 const WeierstrassStructure<Elem<F>>& psi, Index r,
                                                 const SynthOptions& opt = {}) {
  using E = Elem<F>;
  detail::require_identity_leading(a, "constant_core");
  const Index n = a.rows();
  for (int m : psi.inf_mults())
    if (m != 0) throw std::invalid_argument("constant_core: target has an infinite part");
  const auto phi = detail::monic_structure(field, a.g0);
  if (!interlace(phi, psi, r).holds) throw std::invalid_argument("constant_core: interlacing fails");
  const Matrix<E> zero(n, n, field.zero());
  if (phi == psi) return CoreResult<E>{zero, false};
  const Matrix<E> b0 = canonical_pencil(field, psi).g0;
  {
    Matrix<E> diff = b0 - a.g0;
    if (rank(diff) <= r) return CoreResult<E>{std::move(diff), false};
  }
  detail::Descent<F> dfs{field, psi, b0, r, opt, phi.determinant().finite() * psi.determinant().finite(), {}};
  for (const auto& alpha : detail::search_alphabets(field)) {
    auto us = detail::candidate_vectors<E>(n, alpha, true);
    dfs.all_u.insert(dfs.all_u.end(), us.begin(), us.end());
    if (!field.finite()) break;
  }
  auto total = dfs.run(a.g0, zero, min_rank(phi, psi));
  if (!total) {
    if (field.finite())
      throw TheoremContradiction("constant_core: rank-one descent found no path over " + field.name());
    return std::nullopt;
  }
  if (rank(*total) > r) throw std::logic_error("constant_core: rank budget exceeded");
  if (!(detail::monic_structure(field, a.g0 + *total) == psi))
    throw std::logic_error("constant_core: descent ended at the wrong structure");
  return CoreResult<E>{std::move(*total), true};
}

}  // namespace fixrank
