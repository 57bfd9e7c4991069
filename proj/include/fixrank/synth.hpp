#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fixrank/synth_blocks.hpp"

namespace fixrank {

enum class Step { FullRank, ConstantCore, Inflate, LeadingConjugate, Mobius, Scalar, SearchBackend, Deflate };

inline const char* step_name(Step s) {
  switch (s) {
    case Step::FullRank: return "FullRank";
    case Step::ConstantCore: return "ConstantCore";
    case Step::Inflate: return "Inflate";
    case Step::LeadingConjugate: return "LeadingConjugate";
    case Step::Mobius: return "Mobius";
    case Step::Scalar: return "Scalar";
    case Step::SearchBackend: return "SearchBackend";
    case Step::Deflate: return "Deflate";
  }
  return "?";
}

template <class E>
struct PathStep {
  Step step;
  std::optional<ExtPoint<E>> point;  // the point c of Mobius(c) or the deflated eigenvalue
};

template <class E>
struct SynthCertificate {
  Pencil<E> p;
  Index rank_p = 0;
  WeierstrassStructure<E> achieved;
  std::vector<PathStep<E>> path;
};

enum class RefusalKind { InterlacingFails, RankOutOfRange, ScalarException, NoApplicabilityPath, NotCovered, BackendExhausted };

struct Refusal {
  RefusalKind kind;
  std::string code;    // machine-readable reason
  std::string detail;  // human-readable diagnostics
};

template <class E>
using SynthResult = std::variant<SynthCertificate<E>, Refusal>;

/// Whether rank P = r and A + P has structure psi. For n <= 4 the structure
/// is also recomputed from gcds of minors and both engines must agree.
template <class F>
bool verify_certificate(const F& field, const Pencil<Elem<F>>& a, const Pencil<Elem<F>>& p,
                        const WeierstrassStructure<Elem<F>>& psi, Index r, bool cross_check_minors = true) {
  if (p.rows() != a.rows() || p.cols() != a.cols()) return false;
  if (normal_rank(p) != r) return false;
  const Pencil<Elem<F>> sum = a + p;
  if (!is_regular(sum)) return false;
  const auto got = weierstrass_structure(field, sum);
  if (cross_check_minors && sum.rows() <= 4) {
    if (!(weierstrass_structure_by_minors(field, sum) == got))
      throw std::logic_error("structure engines disagree on " + got.str());
  }
  return got == psi;
}

/// 1x1 case: r = 0 needs equal structures; r = 1 uses p = c*b - a with the
/// first nonzero c making a != c*b, except over GF(2) where that requires a != b.
template <class F>
SynthResult<Elem<F>> scalar_synth(const F& field, const Pencil<Elem<F>>& a, const Pencil<Elem<F>>& b, Index r) {
  using E = Elem<F>;
  if (a.rows() != 1 || a.cols() != 1 || b.rows() != 1 || b.cols() != 1)
    throw std::invalid_argument("scalar_synth: pencils must be 1x1");
  if (a.is_zero() || b.is_zero()) throw std::invalid_argument("scalar_synth: zero pencil");
  if (r > 1) return Refusal{RefusalKind::RankOutOfRange, "rank out of range", "r must be 0 or 1 for n = 1"};
  const auto sa = weierstrass_structure(field, a), sb = weierstrass_structure(field, b);
  auto cert = [&](Pencil<E> p) {
    SynthCertificate<E> c;
    c.rank_p = r;
    c.achieved = sb;
    c.path = {{Step::Scalar, std::nullopt}};
    c.p = std::move(p);
    return c;
  };
  if (r == 0) {
    if (sa == sb) return cert(Pencil<E>::zeros(1, 1));
    return Refusal{RefusalKind::InterlacingFails, "interlacing fails", "r = 0 requires equal structures"};
  }
  if (field.finite() && field.order() == 2) {
    if (a == b)
      return Refusal{RefusalKind::ScalarException, "scalar exception",
                     "over GF(2) with n = 1 and r = 1 the target must differ from a(s)"};
    return cert(b - a);
  }
  for (std::uint64_t k = 1;; ++k) {
    const E c = field.element(k);
    const Pencil<E> cb(b.g0.scaled(c), b.g1.scaled(c));
    if (!(cb == a)) return cert(cb - a);
  }
}

namespace detail {

template <class E>
std::string interlace_detail(const InterlaceReport& rep, Index r0) {
  const auto& v = *rep.first_violation;
  return "first violation at i = " + std::to_string(v.i) + " (" + (v.side == Side::lower ? "lower" : "upper") +
         " divisibility); minimal rank is " + std::to_string(r0);
}

// Structure of an n x n pencil keeping only the last k factors of psi
// (finite parts or infinite multiplicities).
template <class E>
WeierstrassStructure<E> tail_finite(const WeierstrassStructure<E>& psi, Index k) {
  std::vector<Poly<E>> f;
  for (Index i = psi.size() - k; i < psi.size(); ++i) f.push_back(psi[i].finite());
  return make_structure(f, std::vector<int>(k, 0));
}

template <class E>
WeierstrassStructure<E> tail_infinite(const WeierstrassStructure<E>& psi, Index k, const E& one) {
  std::vector<int> m;
  for (Index i = psi.size() - k; i < psi.size(); ++i) m.push_back(psi[i].inf_mult());
  return make_structure(std::vector<Poly<E>>(k, Poly<E>::constant(one)), m);
}

}  // namespace detail

template <class F>
SynthResult<Elem<F>> synthesize(const F& field, const Pencil<Elem<F>>& a, const WeierstrassStructure<Elem<F>>& psi,
                                 Index r, const SynthOptions& opt = {});

namespace detail {

// sI + M form, structure psi without infinite part, witness at infinity.
template <class F>
SynthResult<Elem<F>> synth_monic(const F& field, const Pencil<Elem<F>>& a, const WeierstrassStructure<Elem<F>>& psi,
                                 Index r, const SynthOptions& opt) {
  using E = Elem<F>;
  const Index n = a.rows();
  SynthCertificate<E> c;
  c.rank_p = r;
  c.achieved = psi;
  if (r == n) {
    c.p = full_rank_perturb(field, a, canonical_pencil(field, psi));
    c.path.push_back({Step::FullRank, std::nullopt});
    return c;
  }
  auto core = constant_core(field, a, psi, r, opt);
  if (!core)
    return Refusal{RefusalKind::BackendExhausted, "backend exhausted",
                   "bounded-height search over Q found no rank-one descent step"};
  c.path.push_back({Step::ConstantCore, std::nullopt});
  if (core->searched) c.path.push_back({Step::SearchBackend, std::nullopt});
  if (rank(core->p) == r) {
    c.p = constant_pencil(core->p);
  } else {
    c.p = inflate_rank(field, a, core->p, r);
    c.path.push_back({Step::Inflate, std::nullopt});
  }
  return c;
}

// A with invertible leading coefficient: solve for sI + A1^{-1} A0 and map back by A1.
template <class F>
SynthResult<Elem<F>> synth_leading(const F& field, const Pencil<Elem<F>>& a, const WeierstrassStructure<Elem<F>>& psi,
                                   Index r, const SynthOptions& opt) {
  using E = Elem<F>;
  const Matrix<E> a1inv = inverse(a.g1, field.one());
  auto res = synth_monic(field, monic_pencil(a1inv * a.g0, field.one()), psi, r, opt);
  if (auto* c = std::get_if<SynthCertificate<E>>(&res)) {
    c->p = a.g1 * c->p;
    c->path.insert(c->path.begin(), {Step::LeadingConjugate, std::nullopt});
  }
  return res;
}

// Shared multiplicities at infinity: split A into its finite and infinite
// Weierstrass blocks, solve each block, and couple them in the off-diagonal
// block when extra rank is needed. Block-triangular pencils whose diagonal
// blocks have disjoint spectra are strictly equivalent to the block-diagonal
// ones, so the coupling only changes the rank.
template <class F>
std::optional<Pencil<Elem<F>>> synth_deflate_infinite(const F& field, const Pencil<Elem<F>>& a,
                                                      const WeierstrassStructure<Elem<F>>& psi, Index r,
                                                      const SynthOptions& opt) {
  using E = Elem<F>;
  const Index n = a.rows();
  const auto dec = weierstrass_decomposition(field, a);
  const Index nf = dec.finite_part.rows(), ni = n - nf;
  if (nf == 0 || ni == 0) return std::nullopt;
  const Pencil<E> af = monic_pencil(dec.finite_part, field.one());
  const Pencil<E> ai(Matrix<E>::identity(ni, field.one()), dec.nilpotent_part);
  const auto psi_f = tail_finite(psi, nf);
  const auto psi_i = tail_infinite(psi, ni, field.one());
  if (!psi_f.valid() || !psi_i.valid()) return std::nullopt;
  const Index rf_min = min_rank(weierstrass_structure(field, af), psi_f);

  auto solve = [&](const Pencil<E>& blk, const WeierstrassStructure<E>& target, Index rb) -> std::optional<Pencil<E>> {
    auto res = synthesize(field, blk, target, rb, opt);
    if (auto* c = std::get_if<SynthCertificate<E>>(&res)) return c->p;
    return std::nullopt;
  };
  // Splits without coupling first, then coupled ones with growing deficit.
  for (Index deficit = 0; deficit <= r; ++deficit)
    for (Index rf = std::min(nf, r - deficit) + 1; rf-- > rf_min;) {
      if (rf + deficit > r) continue;
      const Index ri = r - deficit - rf;
      if (ri > ni) continue;
      auto pf = solve(af, psi_f, rf);
      if (!pf) continue;
      auto pi = solve(ai, psi_i, ri);
      if (!pi) continue;
      Pencil<E> q(Matrix<E>(n, n, field.zero()), Matrix<E>(n, n, field.zero()));
      q.g0.set_block(0, 0, pf->g0);
      q.g1.set_block(0, 0, pf->g1);
      q.g0.set_block(nf, nf, pi->g0);
      q.g1.set_block(nf, nf, pi->g1);
      Index have = normal_rank(q);
      for (Index i = 0; i < nf && have < r; ++i)
        for (Index j = nf; j < n && have < r; ++j)
          for (int lead = 0; lead < 2 && have < r; ++lead) {
            Pencil<E> trial = q;
            (lead ? trial.g1 : trial.g0)(i, j) += field.one();
            const Index got = normal_rank(trial);
            if (got == have + 1) {
              q = std::move(trial);
              have = got;
            }
          }
      if (have != r) continue;
      return dec.left_inv * q * dec.right_inv;
    }
  return std::nullopt;
}

// Invertible n x n matrices with entries from the alphabet, identity first,
// then in digit order; at most cap of them.
template <class F>
std::vector<Matrix<Elem<F>>> invertible_matrices(const F& field, Index n, const std::vector<Elem<F>>& alpha,
                                                 std::uint64_t cap) {
  using E = Elem<F>;
  std::vector<Matrix<E>> out{Matrix<E>::identity(n, field.one())};
  std::vector<Index> d(n * n, 0);
  for (;;) {
    Index i = n * n;
    while (i > 0 && d[i - 1] == alpha.size() - 1) d[--i] = 0;
    if (i == 0 || out.size() >= cap) break;
    ++d[i - 1];
    Matrix<E> m(n, n, field.zero());
    for (Index k = 0; k < n * n; ++k) m(k / n, k % n) = alpha[d[k]];
    if (rank(m) == n && !(m == out.front())) out.push_back(std::move(m));
  }
  return out;
}

// Every P with A + P strictly equivalent to C has the form K C R - A. Scan
// pairs (K, R) for one with the requested normal rank.
template <class F>
std::optional<Pencil<Elem<F>>> orbit_search(const F& field, const Pencil<Elem<F>>& a,
                                            const WeierstrassStructure<Elem<F>>& psi, Index r, std::uint64_t budget) {
  using E = Elem<F>;
  const Index n = a.rows();
  const Pencil<E> c = canonical_pencil(field, psi);
  std::vector<E> alpha;
  if (field.finite())
    for (std::uint64_t k = 0; k < field.order(); ++k) alpha.push_back(field.element(k));
  else
    alpha = {field.zero(), field.one(), -field.one()};
  const auto mats = invertible_matrices(field, n, alpha, budget);
  std::uint64_t tried = 0;
  for (const auto& k : mats) {
    const Pencil<E> kc = k * c;
    for (const auto& rr : mats) {
      if (++tried > budget) return std::nullopt;
      Pencil<E> p = kc * rr - a;
      if (normal_rank(p) == r) return p;
    }
  }
  return std::nullopt;
}

template <class F>
SynthResult<Elem<F>> finish(const F& field, const Pencil<Elem<F>>& a, const WeierstrassStructure<Elem<F>>& psi, Index r,
                            SynthResult<Elem<F>> res, const SynthOptions& opt) {
  using E = Elem<F>;
  if (auto* c = std::get_if<SynthCertificate<E>>(&res)) {
    if (!verify_certificate(field, a, c->p, psi, r, opt.cross_check_minors))
      throw std::logic_error("synthesized certificate failed verification");
    c->rank_p = r;
    c->achieved = psi;
  }
  return res;
}

}  // namespace detail

/// Pencil P(s) of normal rank r with A(s) + P(s) strictly equivalent to any
/// pencil with structure psi, or a refusal naming the failed condition.
template <class F>
SynthResult<Elem<F>> synthesize(const F& field, const Pencil<Elem<F>>& a, const WeierstrassStructure<Elem<F>>& psi,
                                 Index r, const SynthOptions& opt) {
  using E = Elem<F>;
  if (!is_regular(a)) throw std::invalid_argument("not regular");
  const Index n = a.rows();
  if (psi.size() != n || !psi.valid()) throw std::invalid_argument("target is not a valid structure of size n");
  if (r > n) return Refusal{RefusalKind::RankOutOfRange, "rank out of range", "r must satisfy 0 <= r <= n"};
  const auto phi = weierstrass_structure(field, a);
  const auto rep = interlace(phi, psi, r);
  if (!rep.holds) return Refusal{RefusalKind::InterlacingFails, "interlacing fails", detail::interlace_detail<E>(rep, min_rank(phi, psi))};

  if (n == 1) return detail::finish(field, a, psi, r, scalar_synth(field, a, canonical_pencil(field, psi), r), opt);
  if (r == 0) {
    SynthCertificate<E> c;
    c.p = Pencil<E>::zeros(n, n);
    c.path = {{Step::ConstantCore, std::nullopt}};
    return detail::finish(field, a, psi, r, SynthResult<E>(c), opt);
  }

  const auto app = applicability(field, phi, psi);
  if (app.witness_c) {
    const ExtPoint<E> c = *app.witness_c;
    if (!c) return detail::finish(field, a, psi, r, detail::synth_leading(field, a, psi, r, opt), opt);
    const auto x = MobiusMap<E>::moving_to_infinity(*c, field.one());
    auto res = detail::synth_leading(field, mobius_pencil(x, a), mobius_structure(x, psi), r, opt);
    if (auto* cert = std::get_if<SynthCertificate<E>>(&res)) {
      cert->p = mobius_pencil(x.inverse(), cert->p);
      cert->path.insert(cert->path.begin(), {Step::Mobius, c});
    }
    return detail::finish(field, a, psi, r, std::move(res), opt);
  }
  if (app.shared_multiplicity_lambda0) {
    const ExtPoint<E> lam = *app.shared_multiplicity_lambda0;
    std::optional<Pencil<E>> p;
    if (!lam) {
      p = detail::synth_deflate_infinite(field, a, psi, r, opt);
    } else {
      const auto x = MobiusMap<E>::moving_to_infinity(*lam, field.one());
      p = detail::synth_deflate_infinite(field, mobius_pencil(x, a), mobius_structure(x, psi), r, opt);
      if (p) p = mobius_pencil(x.inverse(), *p);
    }
    Step how = Step::Deflate;
    if (!p) {
      p = detail::orbit_search(field, a, psi, r, opt.orbit_budget);
      how = Step::SearchBackend;
    }
    if (!p)
      return Refusal{RefusalKind::NotCovered, "deflation not covered",
                     "shared multiplicities at " + point_str(lam) +
                         " but neither block deflation nor the orbit search reached the requested rank"};
    SynthCertificate<E> c;
    c.p = std::move(*p);
    c.path = {{how, lam}};
    return detail::finish(field, a, psi, r, SynthResult<E>(c), opt);
  }
  return Refusal{RefusalKind::NoApplicabilityPath, "no applicability path",
                 "every point of the projective line is an eigenvalue and no eigenvalue has equal multiplicities"};
}

/// Target given as a pencil B instead of a structure.
template <class F>
SynthResult<Elem<F>> synthesize(const F& field, const Pencil<Elem<F>>& a, const Pencil<Elem<F>>& b, Index r,
                                const SynthOptions& opt = {}) {
  if (!is_regular(b)) throw std::invalid_argument("not regular: target pencil");
  if (b.rows() != a.rows()) throw std::invalid_argument("target pencil differs in size");
  return synthesize(field, a, weierstrass_structure(field, b), r, opt);
}

}  // namespace fixrank
