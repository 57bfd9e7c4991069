#pragma once

// Fixed-rank determinant placement: P(s) of normal rank r with
// det(A(s) + P(s)) = k * q(s), k a nonzero scalar.

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "fixrank/synth.hpp"

namespace fixrank {

template <class E>
struct PlaceabilityReport {
  bool holds = false;       // phi_1 ... phi_{n-r} divides Psi
  bool hypothesis = false;  // some point of F or infinity avoids both spectra
  std::optional<ExtPoint<E>> witness_c;
};

template <class E>
HomogPoly<E> leading_product(const WeierstrassStructure<E>& phi, Index count) {
  HomogPoly<E> acc = HomogPoly<E>::one(phi.unit());
  for (Index i = 0; i < count; ++i) acc = acc * phi[i];
  return acc;
}

/// Divisibility test on the homogeneous target, plus the applicability
/// hypothesis of the placement theorem (reported, not enforced).
template <class F>
PlaceabilityReport<Elem<F>> placeable(const F& field, const Pencil<Elem<F>>& a, Index r, const HomogPoly<Elem<F>>& psi) {
  const auto phi = weierstrass_structure(field, a);
  const Index n = phi.size();
  if (psi.degree() != static_cast<int>(n)) throw std::invalid_argument("placeable: deg Psi must equal n");
  if (r > n) throw std::invalid_argument("placeable: r exceeds n");
  PlaceabilityReport<Elem<F>> rep;
  rep.holds = leading_product(phi, n - r).divides(psi);
  for (const auto& c : candidate_points(field, 2 * n + 1))
    if (!phi.has_eigenvalue(c) && !psi.eval(c).is_zero()) {
      rep.witness_c = c;
      break;
    }
  rep.hypothesis = rep.witness_c.has_value();
  return rep;
}

struct PolyPlaceability {
  bool divides = false;        // alpha_1 ... alpha_{n-r} divides q
  bool degree_bound = false;   // sum_{i <= n-r} m_i(inf) <= n - deg q
  bool holds() const { return divides && degree_bound; }
};

/// The same test phrased for a polynomial target q(s).
template <class F>
PolyPlaceability placeable_poly(const F& field, const Pencil<Elem<F>>& a, Index r, const Poly<Elem<F>>& q) {
  if (q.is_zero()) throw std::invalid_argument("placeable_poly: q must be nonzero");
  const auto phi = weierstrass_structure(field, a);
  const Index n = phi.size();
  if (r > n) throw std::invalid_argument("placeable_poly: r exceeds n");
  if (q.degree() > static_cast<int>(n)) throw std::invalid_argument("placeable_poly: deg q exceeds n");
  Poly<Elem<F>> prod = Poly<Elem<F>>::constant(field.one());
  int inf = 0;
  for (Index i = 0; i < n - r; ++i) {
    prod = prod * phi[i].finite();
    inf += phi[i].inf_mult();
  }
  PolyPlaceability rep;
  rep.divides = prod.divides(q);
  rep.degree_bound = inf <= static_cast<int>(n) - q.degree();
  return rep;
}

/// Target chain: psi_i = phi_{i-r} for i < n, psi_n = phi_{n-r} * gamma with
/// gamma = Psi / (phi_1 ... phi_{n-r}).
template <class E>
WeierstrassStructure<E> placement_target(const WeierstrassStructure<E>& phi, Index r, const HomogPoly<E>& psi) {
  const Index n = phi.size();
  const auto gamma = leading_product(phi, n - r).exact_quotient_of(psi);
  std::vector<HomogPoly<E>> f;
  const long rr = static_cast<long>(r);
  for (long i = 1; i < static_cast<long>(n); ++i) f.push_back(phi.at(i - rr));
  f.push_back(phi.at(static_cast<long>(n) - rr) * gamma);
  return WeierstrassStructure<E>(std::move(f));
}

template <class E>
struct PlacementCertificate {
  SynthCertificate<E> cert;
  E k;  // det(A + P)(s) = k * Psi(s, 1)
};

template <class E>
using PlacementResult = std::variant<PlacementCertificate<E>, Refusal>;

template <class F>
PlacementResult<Elem<F>> place(const F& field, const Pencil<Elem<F>>& a, Index r, const HomogPoly<Elem<F>>& psi,
                               const SynthOptions& opt = {}) {
  using E = Elem<F>;
  if (!is_regular(a)) throw std::invalid_argument("not regular");
  const Index n = a.rows();
  if (r > n) return Refusal{RefusalKind::RankOutOfRange, "rank out of range", "r must satisfy 0 <= r <= n"};
  const auto rep = placeable(field, a, r, psi);
  if (!rep.holds)
    return Refusal{RefusalKind::InterlacingFails, "placement divisibility fails",
                   "phi_1 ... phi_{n-r} does not divide the target determinant"};
  const auto phi = weierstrass_structure(field, a);
  auto res = synthesize(field, a, placement_target(phi, r, psi), r, opt);
  if (auto* ref = std::get_if<Refusal>(&res)) return *ref;
  auto cert = std::get<SynthCertificate<E>>(std::move(res));
  const Poly<E> d = determinant((a + cert.p).poly());
  const Poly<E> target = psi.dehomogenize();
  if (d.degree() != target.degree() || !(d.monic() == target))
    throw std::logic_error("place: determinant of A + P is not a multiple of the target");
  const int mu_inf = cert.achieved.algebraic_multiplicity(std::nullopt);
  if (d.degree() != static_cast<int>(n) - mu_inf) throw std::logic_error("place: degree of det(A + P) inconsistent");
  return PlacementCertificate<E>{std::move(cert), d.lead()};
}

/// Polynomial target q(s), homogenized to total degree n.
template <class F>
PlacementResult<Elem<F>> place_poly(const F& field, const Pencil<Elem<F>>& a, Index r, const Poly<Elem<F>>& q,
                                    const SynthOptions& opt = {}) {
  if (!is_regular(a)) throw std::invalid_argument("not regular");
  const Index n = a.rows();
  if (r > n) return Refusal{RefusalKind::RankOutOfRange, "rank out of range", "r must satisfy 0 <= r <= n"};
  if (q.is_zero()) throw std::invalid_argument("place: q must be nonzero");
  if (q.degree() > static_cast<int>(n))
    return Refusal{RefusalKind::InterlacingFails, "degree condition fails", "deg q exceeds n"};
  const auto rep = placeable_poly(field, a, r, q);
  if (!rep.divides)
    return Refusal{RefusalKind::InterlacingFails, "placement divisibility fails",
                   "alpha_1 ... alpha_{n-r} does not divide q"};
  if (!rep.degree_bound)
    return Refusal{RefusalKind::InterlacingFails, "degree condition fails",
                   "sum of the first n-r infinite multiplicities exceeds n - deg q"};
  return place(field, a, r, homogenize(q, static_cast<int>(n)).second, opt);
}

}  // namespace fixrank
