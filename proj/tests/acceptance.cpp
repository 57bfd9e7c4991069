// Acceptance run: one PASS/FAIL line per criterion, each with a time bound.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "support.hpp"

using namespace fixrank;
using namespace fixrank::testing;

namespace {

using R = Rational;
using Clock = std::chrono::steady_clock;

// Collects failed checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  long checks = 0;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures.size() < 20) failures.push_back(what);
    if (!ok && failures.size() == 20) failures.push_back("(further failures suppressed)");
  }
};

bool run(int id, const std::string& title, double limit_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = secs <= limit_s;
  const bool ok = c.failures.empty() && in_time;
  std::printf("[%s] %d %s: %ld checks, %.2f s (limit %.0f s)\n", ok ? "PASS" : "FAIL", id, title.c_str(), c.checks,
              secs, limit_s);
  for (const auto& f : c.failures) std::printf("       %s\n", f.c_str());
  if (!in_time) std::printf("       time limit exceeded\n");
  std::fflush(stdout);
  return ok;
}

template <class E>
const SynthCertificate<E>* cert_of(const SynthResult<E>& r) {
  return std::get_if<SynthCertificate<E>>(&r);
}

template <class E>
std::string refusal_code(const SynthResult<E>& r) {
  auto* ref = std::get_if<Refusal>(&r);
  return ref ? ref->code : std::string("certificate");
}

Pencil<Zp> diag_pencil(const PrimeField& f, const std::vector<std::pair<int, int>>& entries) {
  const Index n = entries.size();
  Matrix<Zp> g0(n, n, f.zero()), g1(n, n, f.zero());
  for (Index i = 0; i < n; ++i) {
    g0(i, i) = f.from_int(entries[i].first);
    g1(i, i) = f.from_int(entries[i].second);
  }
  return Pencil<Zp>(g0, g1);
}

// ---------------------------------------------------------------- 1

void diagonal_example(Check& c) {
  RationalField q;
  const auto one = Poly<R>::constant(R(1)), lin = Poly<R>::linear(R(1), R(1)), s = Poly<R>::linear(R(1), R(0));
  const auto a = monic_pencil(Matrix<R>::identity(3, R(-1)), R(1));
  Matrix<R> b0 = Matrix<R>::identity(3, R(-1));
  b0(2, 2) = R(0);
  const auto b = monic_pencil(b0, R(1));
  const auto phi = weierstrass_structure(q, a), psi = weierstrass_structure(q, b);
  c.expect(phi == make_structure<R>({lin, lin, lin}, {0, 0, 0}), "phi = (s-t, s-t, s-t), got " + phi.str());
  c.expect(psi == make_structure<R>({one, lin, s * lin}, {0, 0, 0}), "psi = (1, s-t, s(s-t)), got " + psi.str());
  c.expect(min_rank(phi, psi) == 1, "min_rank = 1");
  const auto r1 = synthesize(q, a, b, 1);
  const auto* c1 = cert_of(r1);
  c.expect(c1 != nullptr, "r = 1 certificate: " + refusal_code(r1));
  if (c1) {
    c.expect(c1->p.g1.is_zero(), "r = 1 certificate is a constant matrix");
    c.expect(verify_certificate(q, a, c1->p, psi, 1), "r = 1 certificate verifies");
  }
  const auto r2 = synthesize(q, a, b, 2);
  const auto* c2 = cert_of(r2);
  c.expect(c2 != nullptr, "r = 2 certificate: " + refusal_code(r2));
  if (c2) c.expect(verify_certificate(q, a, c2->p, psi, 2) && normal_rank(c2->p) == 2, "r = 2 certificate verifies");
  // P(s) = [[0, s-1, 0], [0, 0, 0], [0, 0, 1]]
  Matrix<R> h0(3, 3, R(0)), h1(3, 3, R(0));
  h0(0, 1) = R(-1);
  h1(0, 1) = R(1);
  h0(2, 2) = R(1);
  c.expect(verify_certificate(q, a, Pencil<R>(h0, h1), psi, 2), "explicit rank-2 pencil verifies");
}

// ---------------------------------------------------------------- 2

template <class F>
void five_by_five(const F& f, Check& c) {
  using E = Elem<F>;
  using P = Poly<E>;
  const P one = P::constant(f.one()), lin = P::linear(f.one(), f.one());
  const auto phi = make_structure<E>({one, one, one, one, one}, {0, 0, 1, 2, 2});
  const auto psi = make_structure<E>({one, one, lin, lin, lin * lin * lin}, {0, 0, 0, 0, 0});
  const auto a = canonical_pencil(f, phi);
  c.expect(min_rank(phi, psi) == 3, f.name() + ": min_rank = 3");
  for (Index r = 0; r <= 5; ++r) {
    const auto res = synthesize(f, a, psi, r);
    if (r < 3) {
      c.expect(refusal_code(res) == "interlacing fails", f.name() + ": refusal at r = " + std::to_string(r));
    } else {
      const auto* cert = cert_of(res);
      c.expect(cert && verify_certificate(f, a, cert->p, psi, r),
               f.name() + ": verified certificate at r = " + std::to_string(r) + " (" + refusal_code(res) + ")");
    }
  }
}

// ---------------------------------------------------------------- 3

void bordered_example(Check& c) {
  PrimeField f(2);
  const auto a = diag_pencil(f, {{1, 0}, {1, 1}, {1, 1}, {1, 1}});
  const auto b = diag_pencil(f, {{1, 0}, {1, 1}, {1, 1}, {0, 1}});
  const auto phi = weierstrass_structure(f, a), psi = weierstrass_structure(f, b);
  const auto app = applicability(f, phi, psi);
  c.expect(!app.witness_c.has_value(), "no witness point");
  c.expect(app.shared_multiplicity_lambda0.has_value() && !app.shared_multiplicity_lambda0->has_value(),
           "shared multiplicities at infinity");
  const std::vector<int> want{0, 0, 0, 1};
  c.expect(phi.partial_multiplicities(std::nullopt) == want, "A multiplicities at infinity = (0,0,0,1)");
  c.expect(psi.partial_multiplicities(std::nullopt) == want, "B multiplicities at infinity = (0,0,0,1)");
  Matrix<Zp> h0(4, 4, f.zero()), h1(4, 4, f.zero());
  h0(1, 2) = f.one();
  h1(1, 2) = f.one();
  h0(3, 3) = f.one();
  c.expect(verify_certificate(f, a, Pencil<Zp>(h0, h1), psi, 2), "explicit blockdiag(0, P(s)) verifies at r = 2");
  const auto res = synthesize(f, a, b, 2);
  const auto* cert = cert_of(res);
  c.expect(cert && verify_certificate(f, a, cert->p, psi, 2), "synthesized rank-2 certificate: " + refusal_code(res));
}

// ---------------------------------------------------------------- 4

void scalar_gf2(Check& c) {
  PrimeField f(2);
  std::vector<Pencil<Zp>> all;
  for (int a0 = 0; a0 < 2; ++a0)
    for (int a1 = 0; a1 < 2; ++a1) all.push_back(diag_pencil(f, {{a0, a1}}));
  std::vector<Pencil<Zp>> regular;
  for (const auto& p : all)
    if (is_regular(p)) regular.push_back(p);
  c.expect(regular.size() == 3, "three regular scalar pencils over GF(2)");
  for (const auto& a : regular)
    for (Index r = 0; r <= 1; ++r) {
      // Enumerated reachability against the rule, and the synthesizer against both.
      for (const auto& b : regular) {
        bool reach = false;
        for (const auto& p : all)
          if (normal_rank(p) == r && a + p == b) reach = true;
        const bool rule = r == 0 ? a == b : !(a == b);
        c.expect(reach == rule, "reachability rule for r = " + std::to_string(r));
        const auto res = synthesize(f, a, b, r);
        const auto* cert = cert_of(res);
        c.expect((cert != nullptr) == rule, "synthesizer agrees with the rule");
        if (cert) c.expect(verify_certificate(f, a, cert->p, weierstrass_structure(f, b), r), "scalar certificate");
        if (r == 1 && a == b) c.expect(refusal_code(res) == "scalar exception", "refusal names the scalar exception");
      }
    }
}

// ---------------------------------------------------------------- 5, 6

struct SweepStats {
  long bases = 0, slices = 0, extra = 0, sufficiency_checked = 0;
  std::vector<std::string> necessity_failures, sufficiency_failures;
};

// Base pencils for one table: every regular pencil when fewer than 20 exist,
// otherwise 20 distinct random ones.
std::vector<Pencil<Zp>> sweep_bases(const PrimeField& f, Index n, Rng& g) {
  std::vector<Pencil<Zp>> out;
  const std::uint64_t total = pencil_count(f.characteristic(), n);
  if (n == 1) {
    for (std::uint64_t k = 0; k < total; ++k) {
      auto p = decode_pencil(f, n, k);
      if (is_regular(p)) out.push_back(p);
    }
    return out;
  }
  std::set<std::uint64_t> seen;
  while (out.size() < 20) {
    auto p = random_regular_pencil(f, n, g);
    if (seen.insert(encode_pencil(f, p)).second) out.push_back(p);
  }
  return out;
}

const SweepStats& oracle_sweep() {
  static SweepStats st;
  static bool done = false;
  if (done) return st;
  done = true;
  Rng g(2024);
  for (auto [p, n] : {std::pair<std::uint32_t, Index>{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}}) {
    PrimeField f(p);
    OracleTable t(f, n);
    t.build();
    const auto universe = all_structures(f, n);
    const std::string tag = f.name() + " n=" + std::to_string(n);
    for (const auto& a : sweep_bases(f, n, g)) {
      ++st.bases;
      const auto phi = weierstrass_structure(f, a);
      const auto reach = reachable_by_rank(t, a);
      for (Index r = 0; r <= n; ++r) {
        ++st.slices;
        const auto cmp = compare(t, a, r, universe, reach[r]);
        st.extra += static_cast<long>(cmp.extra.size());
        for (const auto& x : cmp.extra)
          st.necessity_failures.push_back(tag + " r=" + std::to_string(r) + " extra " + x.str());
        std::set<std::string> reach_keys;
        for (const auto& x : cmp.reachable) reach_keys.insert(x.key());
        for (const auto& psi : cmp.predicate) {
          if (theory_verdict(f, phi, psi, r) != Verdict::Feasible) continue;
          ++st.sufficiency_checked;
          const std::string what = tag + " r=" + std::to_string(r) + " psi=" + psi.str();
          if (!reach_keys.count(psi.key())) st.sufficiency_failures.push_back(what + " unreachable");
          const auto res = synthesize(f, a, psi, r);
          const auto* cert = cert_of(res);
          if (!cert || !verify_certificate(f, a, cert->p, psi, r))
            st.sufficiency_failures.push_back(what + " synthesis: " + refusal_code(res));
        }
      }
    }
  }
  return st;
}

void necessity(Check& c) {
  const auto& st = oracle_sweep();
  c.expect(st.bases >= 3 + 20 + 20 + 8 + 20, "base pencil count");
  c.checks += st.slices;
  for (const auto& x : st.necessity_failures) c.expect(false, x);
}

void sufficiency(Check& c) {
  const auto& st = oracle_sweep();
  c.checks += st.sufficiency_checked;
  c.expect(st.sufficiency_checked > 0, "some feasible instances were checked");
  for (const auto& x : st.sufficiency_failures) c.expect(false, x);
}

// ---------------------------------------------------------------- 7

template <class F>
MobiusMap<Elem<F>> random_mobius(const F& f, Rng& g) {
  for (;;) {
    auto x = random_element(f, g), y = random_element(f, g), z = random_element(f, g), w = random_element(f, g);
    if (!(x * w - y * z).is_zero()) return MobiusMap<Elem<F>>(x, y, z, w);
  }
}

template <class F>
void smith_suite(const F& f, Rng& g, Check& c) {
  for (int t = 0; t < 1000; ++t) {
    const Index n = 1 + g() % 3;
    const auto a = random_pencil(f, n, g).poly();
    const auto sf = smith_form(f, a);
    const auto moved = multiply(multiply(random_unimodular(f, n, g), a), random_unimodular(f, n, g));
    c.expect(smith_form(f, moved).invariant_factors == sf.invariant_factors, "Smith form unimodular invariance");
    const auto dd = determinantal_divisors(f, a);
    bool chain = true;
    for (Index k = 1; k < dd.size(); ++k) chain = chain && dd[k - 1].divides(dd[k]);
    c.expect(chain, "D_{k-1} divides D_k");
  }
}

template <class F>
void pencil_suite(const F& f, Rng& g, Check& c) {
  for (int t = 0; t < 1000; ++t) {
    const Index n = 1 + g() % 4;
    const auto a = random_regular_pencil(f, n, g);
    const auto s = weierstrass_structure(f, a);
    c.expect(s.total_degree() == static_cast<int>(n), "degrees sum to n");
    const auto x = random_mobius(f, g);
    const auto img = mobius_pencil(x, a);
    c.expect(mobius_pencil(x.inverse(), img) == a, "Mobius involution");
    c.expect(weierstrass_structure(f, img) == mobius_structure(x, s), "structure transport under Mobius maps");
    c.expect(weierstrass_structure(f, canonical_pencil(f, s)) == s, "canonical pencil round trip");
  }
}

void schur_suite(Rng& g, Check& c) {
  PrimeField f(3);
  int done = 0;
  while (done < 1000) {
    const auto m = random_matrix(f, 4, 4, g);
    const Index k = 1 + g() % 3;
    IndexList rows, cols;
    for (Index i = 0; i < 4; ++i)
      if (rows.size() < k && g() % 2) rows.push_back(i);
    for (Index i = 0; i < 4; ++i)
      if (cols.size() < k && g() % 2) cols.push_back(i);
    if (rows.size() != k || cols.size() != k || det(m.submatrix(rows, cols)).is_zero()) continue;
    const auto s = schur_complement(m, rows, cols, f.one());
    c.expect(rank(m) == k + rank(s), "Schur rank identity");
    const Zp lhs = det(m), rhs = det(m.submatrix(rows, cols)) * det(s);
    c.expect(lhs == rhs || lhs == -rhs, "Schur determinant identity");
    ++done;
  }
}

void property_suites(Check& c) {
  Rng g(7);
  smith_suite(PrimeField(2), g, c);
  smith_suite(PrimeField(3), g, c);
  smith_suite(RationalField{}, g, c);
  pencil_suite(PrimeField(2), g, c);
  pencil_suite(PrimeField(5), g, c);
  pencil_suite(RationalField{}, g, c);
  schur_suite(g, c);
}

// ---------------------------------------------------------------- 8

void e_matrix_constructions(Check& c) {
  PrimeField f2(2);
  for (Index n = 2; n <= 8; ++n) {
    const auto e = build_E_invertible(f2, n);
    c.expect(!det(e).is_zero() && !det(Matrix<Zp>::identity(n, f2.one()) + e).is_zero(),
             "E and I + E invertible, n = " + std::to_string(n));
  }
  auto subsets = [](Index n, Index k) {
    std::vector<IndexList> out;
    for_each_combination(n, k, [&](const IndexList& s) {
      out.push_back(s);
      return true;
    });
    return out;
  };
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    for (Index n = 2; n <= 5; ++n)
      for (Index r = 1; r < n; ++r)
        for (Index r1 = 0; r1 < r; ++r1) {
          int used = 0;
          for (const auto& rows : subsets(n, r1))
            for (const auto& cols : subsets(n, r1)) {
              if (used++ >= 200) break;
              const auto e = build_E_index_sets(f, n, r1, r, rows, cols);
              bool zero_rows = true, zero_cols = true;
              for (Index i : rows)
                for (Index j = 0; j < n; ++j) zero_rows = zero_rows && e(i, j).is_zero();
              for (Index j : cols)
                for (Index i = 0; i < n; ++i) zero_cols = zero_cols && e(i, j).is_zero();
              std::ostringstream tag;
              tag << f.name() << " n=" << n << " r1=" << r1 << " r=" << r;
              c.expect(rank(e) == r - r1, tag.str() + ": rank r - r1");
              c.expect(!det(Matrix<Zp>::identity(n, f.one()) + e).is_zero(), tag.str() + ": I + E invertible");
              c.expect(zero_rows, tag.str() + ": rows I vanish");
              c.expect(zero_cols, tag.str() + ": columns J vanish");
            }
        }
  }
}

// ---------------------------------------------------------------- 9

template <class F>
void placement_suite(const F& f, Rng& g, Check& c) {
  using E = Elem<F>;
  int cases = 0;
  while (cases < 500) {
    const Index n = 1 + g() % 3;
    const auto a = random_regular_pencil(f, n, g);
    const Index r = g() % (n + 1);
    Poly<E> q;
    if (g() % 2) {
      const auto phi = weierstrass_structure(f, a);
      q = Poly<E>::constant(f.one());
      for (Index i = 0; i < n - r; ++i) q = q * phi[i].finite();
      while (q.degree() < static_cast<int>(n) && g() % 3) q = q * Poly<E>::linear(f.one(), random_element(f, g));
    } else {
      q = random_poly(f, static_cast<int>(g() % (n + 1)), g);
      if (q.is_zero()) continue;
      q = q.monic();
    }
    ++cases;
    const auto psi = homogenize(q, static_cast<int>(n)).second;
    const auto hom = placeable(f, a, r, psi);
    const bool poly = placeable_poly(f, a, r, q).holds();
    c.expect(hom.holds == poly, f.name() + ": homogeneous and polynomial predicates agree");
    const auto res = place_poly(f, a, r, q);
    if (const auto* pc = std::get_if<PlacementCertificate<E>>(&res)) {
      const auto d = laplace_determinant((a + pc->cert.p).poly());
      c.expect(!pc->k.is_zero() && d == q * pc->k, f.name() + ": det(A + P) = k q");
      c.expect(normal_rank(pc->cert.p) == r, f.name() + ": rank of P");
    } else {
      const auto& ref = std::get<Refusal>(res);
      // Refusal is legitimate when the predicate fails or the hypothesis does not hold.
      c.expect(!poly || !hom.hypothesis, f.name() + ": unexpected refusal " + ref.code);
    }
  }
}

void placement(Check& c) {
  Rng g(9);
  placement_suite(PrimeField(3), g, c);
  placement_suite(RationalField{}, g, c);
}

}  // namespace

int main() {
  int failed = 0;
  failed += !run(1, "diagonal 3x3 example end to end", 1, diagonal_example);
  failed += !run(2, "minimal rank 3 example, n = 5, over Q and GF(3)", 10, [](Check& c) {
    five_by_five(RationalField{}, c);
    five_by_five(PrimeField(3), c);
  });
  failed += !run(3, "shared infinite multiplicities over GF(2)", 5, bordered_example);
  failed += !run(4, "scalar pencils over GF(2), exhaustive", 1, scalar_gf2);
  // 5 and 6 share one sweep; the budget covers both.
  failed += !run(5, "oracle necessity sweep (extra is empty)", 600, necessity);
  failed += !run(6, "oracle sufficiency where the theory applies", 600, sufficiency);
  failed += !run(7, "algebra and pencil property suites", 120, property_suites);
  failed += !run(8, "E-matrix constructions", 60, e_matrix_constructions);
  failed += !run(9, "determinant placement over GF(3) and Q", 120, placement);
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
