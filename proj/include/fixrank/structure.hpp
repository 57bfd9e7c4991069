#pragma once

#include <algorithm>
#include <climits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fixrank/pencil.hpp"

namespace fixrank {

enum class Side { lower, upper };

struct InterlaceViolation {
  Index i;  // 1-based
  Side side;
};

struct InterlaceReport {
  Index r = 0;
  bool holds = true;
  std::optional<InterlaceViolation> first_violation;
};

/// phi_{i-r} | psi_i | phi_{i+r} for 1 <= i <= n, with phi_j = 1 for j < 1
/// and phi_j = 0 for j > n.
template <class E>
InterlaceReport interlace(const WeierstrassStructure<E>& phi, const WeierstrassStructure<E>& psi, Index r) {
  if (phi.size() != psi.size()) throw std::invalid_argument("interlace: structures differ in size");
  InterlaceReport rep;
  rep.r = r;
  const long n = static_cast<long>(phi.size()), rr = static_cast<long>(r);
  for (long i = 1; i <= n; ++i) {
    if (!phi.at(i - rr).divides(psi.at(i))) {
      rep.holds = false;
      rep.first_violation = InterlaceViolation{static_cast<Index>(i), Side::lower};
      return rep;
    }
    if (!psi.at(i).divides(phi.at(i + rr))) {
      rep.holds = false;
      rep.first_violation = InterlaceViolation{static_cast<Index>(i), Side::upper};
      return rep;
    }
  }
  return rep;
}

/// Smallest r >= 0 for which interlacing holds (linear scan).
template <class E>
Index min_rank(const WeierstrassStructure<E>& phi, const WeierstrassStructure<E>& psi) {
  if (phi.size() != psi.size()) throw std::invalid_argument("min_rank: structures differ in size");
  for (Index r = 0;; ++r)
    if (interlace(phi, psi, r).holds) return r;
}

/// Multiplicity form at a single point: m_{i-r}(A) <= m_i(B) <= m_{i+r}(A)
/// with m_j = 0 for j < 1 and m_j = +inf for j > n.
template <class E>
bool interlace_multiplicities(const WeierstrassStructure<E>& phi, const WeierstrassStructure<E>& psi, Index r,
                              const ExtPoint<E>& lambda) {
  const auto a = phi.partial_multiplicities(lambda), b = psi.partial_multiplicities(lambda);
  const long n = static_cast<long>(a.size()), rr = static_cast<long>(r);
  auto ma = [&](long j) { return j < 1 ? 0 : (j > n ? INT_MAX : a[j - 1]); };
  for (long i = 1; i <= n; ++i)
    if (ma(i - rr) > b[i - 1] || b[i - 1] > ma(i + rr)) return false;
  return true;
}

namespace detail {

template <class E>
void require_identity_leading(const Pencil<E>& a, const char* what) {
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (i == j ? a.g1(i, j).is_zero() || !(a.g1(i, j) == a.g1(i, j) / a.g1(i, j)) : !a.g1(i, j).is_zero())
        throw std::invalid_argument(std::string(what) + ": leading coefficient must be the identity");
}

}  // namespace detail

/// min over lambda in F of rank A(lambda) + rank B(lambda), capped at n.
/// Only common F-roots of the determinants can go below 2n. Over fields
/// that are not algebraically closed this is an informational value.
template <class F>
Index const_rank_bound(const F& field, const Pencil<Elem<F>>& a, const Pencil<Elem<F>>& b) {
  detail::require_identity_leading(a, "const_rank_bound");
  detail::require_identity_leading(b, "const_rank_bound");
  if (a.rows() != b.rows()) throw std::invalid_argument("const_rank_bound: size mismatch");
  const Index n = a.rows();
  const auto da = determinant(a.poly()), db = determinant(b.poly());
  Index best = n;
  for (const auto& lam : field_roots(field, da)) {
    if (!db.eval(lam).is_zero()) continue;
    best = std::min(best, rank(a.at(lam)) + rank(b.at(lam)));
  }
  return best;
}

template <class E>
struct ApplicabilityReport {
  bool joint_spectrum_covers_field = false;
  std::optional<ExtPoint<E>> witness_c;
  std::optional<ExtPoint<E>> shared_multiplicity_lambda0;
  bool scalar_exception = false;
};

/// Applicability of the sufficiency results, computed from the two structures.
template <class F>
ApplicabilityReport<Elem<F>> applicability(const F& field, const WeierstrassStructure<Elem<F>>& phi,
                                           const WeierstrassStructure<Elem<F>>& psi) {
  using E = Elem<F>;
  if (phi.size() != psi.size()) throw std::invalid_argument("applicability: structures differ in size");
  const Index n = phi.size();
  ApplicabilityReport<E> rep;
  // A finite union of spectra has at most 2n points, so 2n + 1 finite
  // candidates always contain a witness over an infinite field.
  for (const auto& c : candidate_points(field, 2 * n + 1))
    if (!phi.has_eigenvalue(c) && !psi.has_eigenvalue(c)) {
      rep.witness_c = c;
      break;
    }
  rep.joint_spectrum_covers_field = !rep.witness_c.has_value();

  std::vector<ExtPoint<E>> tested{std::nullopt};
  std::vector<E> roots = field_roots(field, phi[n - 1].finite() * psi[n - 1].finite());
  for (const auto& x : roots) tested.emplace_back(x);
  for (const auto& lam : tested)
    if (phi.partial_multiplicities(lam) == psi.partial_multiplicities(lam)) {
      rep.shared_multiplicity_lambda0 = lam;
      break;
    }
  rep.scalar_exception = n == 1 && field.finite() && field.order() == 2;
  return rep;
}

template <class F>
ApplicabilityReport<Elem<F>> applicability(const F& field, const Pencil<Elem<F>>& a, const Pencil<Elem<F>>& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("applicability: size mismatch");
  return applicability(field, weierstrass_structure(field, a), weierstrass_structure(field, b));
}

/// Companion matrix of a monic polynomial: ones on the subdiagonal, last
/// column -f_0, ..., -f_{d-1}. det(sI - C) = f.
template <class F>
Matrix<Elem<F>> companion(const F& field, const Poly<Elem<F>>& f) {
  if (!f.is_monic()) throw std::invalid_argument("companion: polynomial must be monic");
  const Index d = static_cast<Index>(f.degree());
  Matrix<Elem<F>> c(d, d, field.zero());
  for (Index i = 1; i < d; ++i) c(i, i - 1) = field.one();
  for (Index i = 0; i < d; ++i) c(i, d - 1) = -f.coeff(static_cast<int>(i));
  return c;
}

/// Block-diagonal regular pencil with the given structure: finite blocks
/// sI - C(gamma_i) by ascending i, then blocks I + sN_{m_i} by ascending i.
template <class F>
Pencil<Elem<F>> canonical_pencil(const F& field, const WeierstrassStructure<Elem<F>>& target) {
  using E = Elem<F>;
  if (!target.valid()) throw std::invalid_argument("canonical_pencil: invalid structure chain");
  const Index n = target.size();
  Pencil<E> out(Matrix<E>(n, n, field.zero()), Matrix<E>(n, n, field.zero()));
  Index at = 0;
  for (const auto& h : target.factors()) {
    const Matrix<E> c = companion(field, h.finite());
    for (Index i = 0; i < c.rows(); ++i) {
      out.g1(at + i, at + i) = field.one();
      for (Index j = 0; j < c.cols(); ++j) out.g0(at + i, at + j) = -c(i, j);
    }
    at += c.rows();
  }
  for (const auto& h : target.factors()) {
    const Index m = static_cast<Index>(h.inf_mult());
    for (Index i = 0; i < m; ++i) {
      out.g0(at + i, at + i) = field.one();
      if (i + 1 < m) out.g1(at + i, at + i + 1) = field.one();
    }
    at += m;
  }
  if (at != n) throw std::logic_error("canonical_pencil: block sizes do not add up");
  if (!(weierstrass_structure(field, out) == target))
    throw std::logic_error("canonical_pencil: realized structure differs from target");
  return out;
}

}  // namespace fixrank
