#include <gtest/gtest.h>

#include "support.hpp"

using namespace fixrank;
using namespace fixrank::testing;

namespace {

using R = Rational;

template <class E>
struct Atoms {
  Poly<E> one, lin, s;  // 1, s - 1, s
};

template <class F>
Atoms<Elem<F>> atoms(const F& f) {
  using P = Poly<Elem<F>>;
  return {P::constant(f.one()), P::linear(f.one(), f.one()), P::linear(f.one(), f.zero())};
}

template <class F>
WeierstrassStructure<Elem<F>> diagonal_phi(const F& f) {
  auto a = atoms(f);
  return make_structure<Elem<F>>({a.lin, a.lin, a.lin}, {0, 0, 0});
}

template <class F>
WeierstrassStructure<Elem<F>> diagonal_psi(const F& f) {
  auto a = atoms(f);
  return make_structure<Elem<F>>({a.one, a.lin, a.s * a.lin}, {0, 0, 0});
}

template <class F>
std::pair<WeierstrassStructure<Elem<F>>, WeierstrassStructure<Elem<F>>> five_by_five(const F& f) {
  auto a = atoms(f);
  auto cube = a.lin * a.lin * a.lin;
  return {make_structure<Elem<F>>({a.one, a.one, a.one, a.one, a.one}, {0, 0, 1, 2, 2}),
          make_structure<Elem<F>>({a.one, a.one, a.lin, a.lin, cube}, {0, 0, 0, 0, 0})};
}

// sI - M with M given row by row.
Pencil<R> shifted(const Matrix<R>& m) { return monic_pencil(-m, R(1)); }

template <class E>
bool splits(const WeierstrassStructure<E>& s, const std::vector<E>& points) {
  for (const auto& h : s.factors()) {
    int d = 0;
    for (const auto& x : points) d += root_multiplicity(h.finite(), x);
    if (d != h.finite().degree()) return false;
  }
  return true;
}

}  // namespace

TEST(Interlace, ExampleStructuresAtRankTwo) {
  RationalField q;
  auto rep = interlace(diagonal_phi(q), diagonal_psi(q), 2);
  EXPECT_TRUE(rep.holds);
  EXPECT_FALSE(rep.first_violation.has_value());
}

TEST(Interlace, RankZeroForcesEquality) {
  RationalField q;
  EXPECT_TRUE(interlace(diagonal_phi(q), diagonal_phi(q), 0).holds);
  auto rep = interlace(diagonal_phi(q), diagonal_psi(q), 0);
  EXPECT_FALSE(rep.holds);
  ASSERT_TRUE(rep.first_violation.has_value());
  EXPECT_EQ(rep.first_violation->i, 1u);
  EXPECT_EQ(rep.first_violation->side, Side::lower);
}

TEST(Interlace, SizeMismatchThrows) {
  RationalField q;
  auto [phi, psi] = five_by_five(q);
  EXPECT_THROW(interlace(phi, diagonal_phi(q), 1), std::invalid_argument);
}

TEST(MinRank, Examples) {
  RationalField q;
  auto [phi, psi] = five_by_five(q);
  EXPECT_EQ(min_rank(phi, psi), 3u);
  EXPECT_EQ(min_rank(diagonal_phi(q), diagonal_psi(q)), 1u);
  EXPECT_EQ(min_rank(phi, phi), 0u);
  PrimeField g3(3);
  auto [phi3, psi3] = five_by_five(g3);
  EXPECT_EQ(min_rank(phi3, psi3), 3u);
}

// Exhaustive over all structure pairs of size <= 3 over GF(2) and GF(3):
// full rank always interlaces, the relation is monotone in r and symmetric,
// min_rank is the first passing r, and on split structures the divisibility
// form agrees with the multiplicity form at every point of F and infinity.
TEST(InterlaceProperty, ExhaustiveSmallFields) {
  long pairs = 0;
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    std::vector<Zp> points;
    for (std::uint32_t k = 0; k < p; ++k) points.push_back(f.element(k));
    for (Index n = 1; n <= 3; ++n) {
      const auto all = all_structures(f, n);
      for (const auto& phi : all)
        for (const auto& psi : all) {
          ++pairs;
          EXPECT_TRUE(interlace(phi, psi, n).holds);
          const Index r0 = min_rank(phi, psi);
          for (Index r = 0; r <= n; ++r) {
            const bool h = interlace(phi, psi, r).holds;
            EXPECT_EQ(h, r >= r0);
            EXPECT_EQ(h, interlace(psi, phi, r).holds);
            bool pointwise = interlace_multiplicities(phi, psi, r, ExtPoint<Zp>());
            for (const auto& x : points) pointwise = pointwise && interlace_multiplicities(phi, psi, r, ExtPoint<Zp>(x));
            if (h) EXPECT_TRUE(pointwise);
            if (splits(phi, points) && splits(psi, points)) EXPECT_EQ(h, pointwise);
          }
        }
    }
  }
  EXPECT_GT(pairs, 1000);
}

TEST(ConstRankBound, Examples) {
  RationalField q;
  Matrix<R> c = Matrix<R>::identity(3, R(2));
  EXPECT_EQ(const_rank_bound(q, shifted(c), shifted(c)), 0u);
  Matrix<R> a = Matrix<R>::identity(3, R(1));
  Matrix<R> b = a;
  b(2, 2) = R(0);
  EXPECT_EQ(const_rank_bound(q, shifted(a), shifted(b)), 1u);
  EXPECT_EQ(const_rank_bound(q, shifted(a), shifted(Matrix<R>::identity(3, R(5)))), 3u);
  Pencil<R> bad(a, a.scaled(R(2)));
  EXPECT_THROW(const_rank_bound(q, bad, shifted(a)), std::invalid_argument);
}

TEST(Applicability, BorderedExampleHasNoWitnessButSharedInfinity) {
  PrimeField f(2);
  auto a = atoms(f);
  auto phi = make_structure<Zp>({a.one, a.lin, a.lin, a.lin}, {0, 0, 0, 1});
  auto psi = make_structure<Zp>({a.one, a.one, a.lin, a.s * a.lin}, {0, 0, 0, 1});
  auto rep = applicability(f, phi, psi);
  EXPECT_TRUE(rep.joint_spectrum_covers_field);
  EXPECT_FALSE(rep.witness_c.has_value());
  ASSERT_TRUE(rep.shared_multiplicity_lambda0.has_value());
  EXPECT_FALSE(rep.shared_multiplicity_lambda0->has_value());
  EXPECT_FALSE(rep.scalar_exception);
}

TEST(Applicability, WitnessAtInfinityForMonicPencils) {
  PrimeField f(2);
  auto rep = applicability(f, diagonal_phi(f), diagonal_psi(f));
  ASSERT_TRUE(rep.witness_c.has_value());
  EXPECT_FALSE(rep.witness_c->has_value());
  auto a = atoms(f);
  auto s1 = make_structure<Zp>({a.s}, {0});
  EXPECT_TRUE(applicability(f, s1, s1).scalar_exception);
}

TEST(Applicability, RationalPairsAlwaysHaveWitness) {
  Rng g(41);
  RationalField q;
  for (int t = 0; t < 200; ++t) {
    const Index n = 1 + g() % 3;
    auto rep = applicability(q, random_regular_pencil(q, n, g), random_regular_pencil(q, n, g));
    EXPECT_TRUE(rep.witness_c.has_value());
    EXPECT_FALSE(rep.joint_spectrum_covers_field);
  }
}

TEST(CanonicalPencil, Examples) {
  PrimeField f(2);
  auto a = atoms(f);
  auto target = make_structure<Zp>({a.one, a.lin, a.lin, a.lin}, {0, 0, 0, 1});
  auto c = canonical_pencil(f, target);
  EXPECT_EQ(weierstrass_structure(f, c), target);
  RationalField q;
  EXPECT_EQ(weierstrass_structure(q, canonical_pencil(q, diagonal_phi(q))), diagonal_phi(q));
  auto pure = make_structure<R>({Poly<R>::constant(R(1)), Poly<R>::constant(R(1))}, {1, 1});
  auto p = canonical_pencil(q, pure);
  EXPECT_EQ(determinant(p.poly()), Poly<R>::constant(R(1)));
  EXPECT_EQ(rank(p.g1), 0u);
  auto broken = make_structure<R>({Poly<R>::constant(R(1))}, {0});
  EXPECT_THROW(canonical_pencil(q, broken), std::invalid_argument);
}

TEST(CanonicalPencilProperty, RoundTripAllSmallStructures) {
  int count = 0;
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    for (Index n = 1; n <= 4; ++n)
      for (const auto& s : all_structures(f, n)) {
        EXPECT_EQ(weierstrass_structure(f, canonical_pencil(f, s)), s);
        ++count;
      }
  }
  EXPECT_GT(count, 200);
}

TEST(CanonicalPencilProperty, RoundTripRandomRational) {
  Rng g(42);
  RationalField q;
  for (int t = 0; t < 200; ++t) {
    auto s = weierstrass_structure(q, random_regular_pencil(q, 1 + g() % 4, g));
    EXPECT_EQ(weierstrass_structure(q, canonical_pencil(q, s)), s);
  }
}
