// Unit and property tests for the Z/q linear algebra kernel. Expected values
// come from brute-force enumeration of spans over tiny rings.

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "demuskin/errors.hpp"
#include "demuskin/zq/isotropic_search.hpp"
#include "demuskin/zq/matrix.hpp"
#include "demuskin/zq/submodule.hpp"

using namespace demuskin;
using namespace demuskin::zq;

namespace {

// ---------------------------------------------------------------------------
// Brute-force oracles
// ---------------------------------------------------------------------------

std::vector<Vector> all_vectors(const Ring& r, std::size_t d) {
  std::vector<Vector> out;
  Vector v(d, 0);
  while (true) {
    out.push_back(v);
    std::size_t i = 0;
    while (i < d && ++v[i] == r.modulus()) v[i++] = 0;
    if (i == d) break;
  }
  return out;
}

// The additive closure of the rows: enumerate all integer combinations.
std::set<Vector> brute_span(const ZqMatrix& m) {
  const Ring& r = m.ring();
  std::set<Vector> span;
  Vector coeff(m.rows(), 0);
  while (true) {
    Vector v(m.cols(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) v[j] = r.add(v[j], r.mul(coeff[i], m(i, j)));
    span.insert(v);
    std::size_t i = 0;
    while (i < coeff.size() && ++coeff[i] == r.modulus()) coeff[i++] = 0;
    if (i == coeff.size()) break;
  }
  return span;
}

ZqMatrix random_matrix(std::mt19937_64& rng, const Ring& r, std::size_t rows, std::size_t cols) {
  ZqMatrix m(r, rows, cols);
  std::uniform_int_distribution<std::int64_t> dist(0, r.modulus() - 1);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, dist(rng));
  return m;
}

// Non-uniform entries: bias towards multiples of p so non-free spans show up.
ZqMatrix random_chain_matrix(std::mt19937_64& rng, const Ring& r, std::size_t rows, std::size_t cols) {
  ZqMatrix m = random_matrix(rng, r, rows, cols);
  std::bernoulli_distribution scale(0.5);
  for (std::size_t i = 0; i < rows; ++i)
    if (scale(rng))
      for (std::size_t j = 0; j < cols; ++j) m.set(i, j, m(i, j) * r.prime());
  return m;
}

ZqMatrix standard_gram(const Ring& r, std::size_t d) {
  // <e0, e1> = 1, then <e_{2k}, e_{2k+1}> = -1 for the later pairs
  ZqMatrix g(r, d, d);
  g.set(0, 1, 1);
  g.set(1, 0, -1);
  for (std::size_t k = 2; k + 1 < d; k += 2) {
    g.set(k, k + 1, -1);
    g.set(k + 1, k, 1);
  }
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// howell_form
// ---------------------------------------------------------------------------

TEST(HowellForm, IdentityIsFixed) {
  const Ring r(3, 2);
  const auto id = ZqMatrix::identity(r, 3);
  EXPECT_EQ(howell_form(id), id);
}

TEST(HowellForm, NonUnitPivotKeepsItsValuation) {
  const Ring r(3, 2);
  const std::vector<std::int64_t> e{3, 0, 0, 1};
  const ZqMatrix m(r, 2, 2, e);
  const ZqMatrix h = howell_form(m);
  EXPECT_EQ(brute_span(h), brute_span(m));
  EXPECT_EQ(h, m);  // pivots 3 and 1, left to right
  EXPECT_EQ(howell_form(h), h);
  EXPECT_FALSE(Submodule(m).is_free());
}

TEST(HowellForm, AddsAnnihilatorRows) {
  // span{(3,1)} over Z/9 contains (0,3) = 3*(3,1); the Howell basis must expose it
  const Ring r(3, 2);
  const std::vector<std::int64_t> e{3, 1};
  const ZqMatrix h = howell_form(ZqMatrix(r, 1, 2, e));
  ASSERT_EQ(h.rows(), 2u);
  EXPECT_EQ(h.row(1), (Vector{0, 3}));
  EXPECT_EQ(brute_span(h), brute_span(ZqMatrix(r, 1, 2, e)));
  // a unimodular vector spans a free summand even though its pivot is 3
  const Submodule s(h);
  EXPECT_TRUE(s.is_free());
  EXPECT_EQ(s.rank(), 1u);
  ASSERT_TRUE(s.free_basis().has_value());
  EXPECT_EQ(s.free_basis()->rows(), 1u);
}

TEST(Freeness, MatchesGroupStructureOracle) {
  // S = sum Z/p^{e_i} is free iff |S| = |S[p]|^k, with S[p] the p-torsion
  std::mt19937_64 rng(19);
  for (const Ring& r : {Ring(3, 2), Ring(5, 2)}) {
    int free_seen = 0, non_free_seen = 0;
    for (int trial = 0; trial < 80; ++trial) {
      const ZqMatrix m = random_chain_matrix(rng, r, 1 + trial % 2, 3);
      const auto span = brute_span(m);
      std::size_t torsion = 0;
      for (const auto& v : span) {
        bool killed = true;
        for (auto x : v) killed = killed && r.mul(x, r.prime()) == 0;
        torsion += killed;
      }
      std::size_t torsion_pow = 1;
      for (int k = 0; k < r.exponent(); ++k) torsion_pow *= torsion;
      const bool expected = span.size() == torsion_pow;
      const Submodule s(m);
      EXPECT_EQ(s.is_free(), expected);
      if (expected) {
        ++free_seen;
        ASSERT_TRUE(s.free_basis().has_value());
        EXPECT_EQ(Submodule(*s.free_basis()), s);
        EXPECT_EQ(s.free_basis()->rows(), s.rank());
        std::size_t full = 1;
        for (std::size_t k = 0; k < s.rank(); ++k) full *= static_cast<std::size_t>(r.modulus());
        EXPECT_EQ(span.size(), full);
      } else {
        ++non_free_seen;
        EXPECT_FALSE(s.free_basis().has_value());
      }
    }
    EXPECT_GT(free_seen, 5);
    EXPECT_GT(non_free_seen, 5);
  }
}

TEST(HowellForm, ZeroMatrix) {
  const Ring r(5, 1);
  EXPECT_EQ(howell_form(ZqMatrix(r, 3, 4)).rows(), 0u);
}

TEST(HowellForm, IdempotentAndSpanPreservingOnRandomMatrices) {
  std::mt19937_64 rng(11);
  for (const Ring& r : {Ring(3, 1), Ring(3, 2), Ring(5, 1)}) {
    for (int trial = 0; trial < 60; ++trial) {
      const ZqMatrix m = random_chain_matrix(rng, r, 1 + trial % 3, 3);
      const ZqMatrix h = howell_form(m);
      EXPECT_EQ(howell_form(h), h);
      EXPECT_EQ(brute_span(h), brute_span(m));
    }
  }
}

TEST(HowellForm, CanonicalForEqualSpans) {
  // Random generating sets of one span must give identical Howell bases.
  std::mt19937_64 rng(12);
  const Ring r(3, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const ZqMatrix m = random_chain_matrix(rng, r, 3, 4);
    const ZqMatrix mix = random_matrix(rng, r, 5, 3);
    ZqMatrix stacked(r, 8, 4);
    const ZqMatrix combos = mix * m;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j) stacked.set(i, j, m(i, j));
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 4; ++j) stacked.set(3 + i, j, combos(i, j));
    EXPECT_EQ(howell_form(stacked), howell_form(m));
  }
}

TEST(HowellForm, LogOrderMatchesSpanSize) {
  std::mt19937_64 rng(13);
  const Ring r(3, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const ZqMatrix m = random_chain_matrix(rng, r, 2, 3);
    const auto span = brute_span(m);
    std::size_t size = 1;
    for (int k = 0; k < Submodule(m).log_order(); ++k) size *= 3;
    EXPECT_EQ(span.size(), size);
  }
}

// ---------------------------------------------------------------------------
// kernel, solve, inverse
// ---------------------------------------------------------------------------

TEST(Kernel, IdentityHasZeroKernel) {
  EXPECT_TRUE(kernel(ZqMatrix::identity(Ring(3, 1), 4)).is_zero());
}

TEST(Kernel, ZeroMapHasFullKernel) {
  const Ring r(3, 1);
  EXPECT_EQ(kernel(ZqMatrix(r, 4, 4)), Submodule::full(r, 4));
}

TEST(Kernel, ThreeOverNine) {
  const Ring r(3, 2);
  const std::vector<std::int64_t> e{3};
  const Submodule k = kernel(ZqMatrix(r, 1, 1, e));
  // oracle: residues v with 3v = 0 mod 9
  std::set<Vector> expected;
  for (std::int64_t v = 0; v < 9; ++v)
    if ((3 * v) % 9 == 0) expected.insert(Vector{v});
  EXPECT_EQ(brute_span(k.basis()), expected);
  EXPECT_EQ(k, Submodule::span(r, 1, {{3}}));
}

TEST(Kernel, MatchesBruteForceOnRandomMatrices) {
  std::mt19937_64 rng(14);
  const Ring r(3, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const ZqMatrix m = random_chain_matrix(rng, r, 2, 3);
    std::set<Vector> expected;
    for (const auto& v : all_vectors(r, 3)) {
      bool in = true;
      for (std::size_t i = 0; i < m.rows() && in; ++i) in = dot(r, v, m.row(i)) == 0;
      if (in) expected.insert(v);
    }
    EXPECT_EQ(brute_span(kernel(m).basis()), expected);
  }
}

TEST(Intersection, MatchesBruteForce) {
  std::mt19937_64 rng(15);
  const Ring r(3, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const ZqMatrix a = random_chain_matrix(rng, r, 2, 3), b = random_chain_matrix(rng, r, 2, 3);
    const auto sa = brute_span(a), sb = brute_span(b);
    std::set<Vector> expected;
    for (const auto& v : sa)
      if (sb.count(v)) expected.insert(v);
    EXPECT_EQ(brute_span(intersection(Submodule(a), Submodule(b)).basis()), expected);
  }
}

TEST(Intersection, CoordinatePlanes) {
  const Ring r(5, 1);
  const Submodule xy = Submodule::span(r, 3, {{1, 0, 0}, {0, 1, 0}});
  const Submodule yz = Submodule::span(r, 3, {{0, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(intersection(xy, yz), Submodule::span(r, 3, {{0, 1, 0}}));
  EXPECT_EQ(intersection(xy, Submodule(r, 3)), Submodule(r, 3));
}

TEST(Solve, FindsPreimagesAndRejectsOutsiders) {
  std::mt19937_64 rng(15);
  const Ring r(5, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const ZqMatrix a = random_matrix(rng, r, 2, 4);
    const Vector x0{static_cast<Residue>(trial % 5), 2};
    const Vector b = mul(x0, a);
    const auto x = solve_left(a, b);
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(mul(*x, a), b);
  }
  const Ring r9(3, 2);
  const std::vector<std::int64_t> e{3, 0};
  EXPECT_FALSE(solve_left(ZqMatrix(r9, 1, 2, e), Vector{1, 0}).has_value());
}

TEST(Inverse, RoundTripsAndDetectsSingular) {
  std::mt19937_64 rng(16);
  const Ring r(3, 2);
  int invertible = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const ZqMatrix m = random_matrix(rng, r, 3, 3);
    const auto inv = inverse(m);
    if (!inv) continue;
    ++invertible;
    EXPECT_EQ(m * *inv, ZqMatrix::identity(r, 3));
    EXPECT_EQ(*inv * m, ZqMatrix::identity(r, 3));
  }
  EXPECT_GT(invertible, 20);
  const std::vector<std::int64_t> e{1, 2, 2, 4};
  EXPECT_FALSE(inverse(ZqMatrix(r, 2, 2, e)).has_value());
}

// ---------------------------------------------------------------------------
// forms, complements, isotropy
// ---------------------------------------------------------------------------

TEST(OrthogonalComplement, OfZeroIsEverything) {
  const Ring r(3, 1);
  const BilinearForm form(standard_gram(r, 4));
  EXPECT_EQ(orthogonal_complement(form, Submodule(r, 4)), Submodule::full(r, 4));
}

TEST(OrthogonalComplement, OfEverythingIsZeroWhenNondegenerate) {
  const Ring r(3, 1);
  const BilinearForm form(standard_gram(r, 4));
  EXPECT_TRUE(orthogonal_complement(form, Submodule::full(r, 4)).is_zero());
}

TEST(OrthogonalComplement, BocksteinKernelInstanceAgainstEnumeration) {
  const Ring r(3, 1);
  const BilinearForm form(standard_gram(r, 4));
  const Submodule ker_b = Submodule::span(r, 4, {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  std::set<Vector> expected;
  for (const auto& v : all_vectors(r, 4)) {
    bool perp = true;
    for (const auto& w : ker_b.basis_rows()) perp = perp && form.pair(v, w) == 0;
    if (perp) expected.insert(v);
  }
  const Submodule perp = orthogonal_complement(form, ker_b);
  EXPECT_EQ(brute_span(perp.basis()), expected);
  EXPECT_EQ(perp, Submodule::span(r, 4, {{1, 0, 0, 0}}));
}

TEST(OrthogonalComplement, DimensionMismatchThrows) {
  const Ring r(3, 1);
  EXPECT_THROW(orthogonal_complement(BilinearForm(standard_gram(r, 4)), Submodule(r, 3)), InputError);
}

TEST(OrthogonalComplement, DoubleComplementOfFreeSubmodules) {
  std::mt19937_64 rng(17);
  for (const Ring& r : {Ring(3, 1), Ring(3, 2), Ring(5, 1)}) {
    const BilinearForm form(standard_gram(r, 6));
    int tested = 0;
    for (int trial = 0; trial < 80; ++trial) {
      const Submodule s(random_matrix(rng, r, 1 + trial % 3, 6));
      if (!s.is_free()) continue;
      ++tested;
      const Submodule perp = orthogonal_complement(form, s);
      EXPECT_EQ(orthogonal_complement(form, perp), s);
      EXPECT_EQ(perp.log_order() + s.log_order(), 6 * r.exponent());
    }
    EXPECT_GT(tested, 20);
  }
}

TEST(Isotropy, Examples) {
  const Ring r(3, 1);
  const BilinearForm form(standard_gram(r, 4));
  EXPECT_EQ(form.symmetry(), Symmetry::Antisymmetric);
  EXPECT_TRUE(is_totally_isotropic(form, Submodule(r, 4)));
  EXPECT_TRUE(is_totally_isotropic(form, Submodule::span(r, 4, {{0, 1, 0, 0}})));
  EXPECT_FALSE(is_totally_isotropic(form, Submodule::span(r, 4, {{0, 1, 0, 0}, {1, 0, 0, 0}})));
}

// ---------------------------------------------------------------------------
// eigen_split
// ---------------------------------------------------------------------------

TEST(EigenSplit, IdentityAndMinusIdentity) {
  const Ring r(3, 1);
  const auto id = ZqMatrix::identity(r, 3);
  auto s = eigen_split(id);
  EXPECT_EQ(s.plus, Submodule::full(r, 3));
  EXPECT_TRUE(s.minus.is_zero());
  s = eigen_split(id.scaled(r.neg(1)));
  EXPECT_TRUE(s.plus.is_zero());
  EXPECT_EQ(s.minus, Submodule::full(r, 3));
}

TEST(EigenSplit, DiagonalSigns) {
  const Ring r(3, 1);
  const std::vector<std::int64_t> diag{1, -1, -1, 1};
  const auto s = eigen_split(ZqMatrix::diagonal(r, diag));
  EXPECT_EQ(s.plus, Submodule::span(r, 4, {{1, 0, 0, 0}, {0, 0, 0, 1}}));
  EXPECT_EQ(s.minus, Submodule::span(r, 4, {{0, 1, 0, 0}, {0, 0, 1, 0}}));
}

TEST(EigenSplit, RejectsNonInvolution) {
  const Ring r(5, 1);
  const std::vector<std::int64_t> diag{2, 1};
  EXPECT_THROW(eigen_split(ZqMatrix::diagonal(r, diag)), PreconditionError);
}

TEST(EigenSplit, ProjectorIdentitiesOnConjugatedInvolutions) {
  std::mt19937_64 rng(18);
  for (const Ring& r : {Ring(3, 1), Ring(3, 2), Ring(5, 2)}) {
    for (int trial = 0; trial < 30; ++trial) {
      const ZqMatrix p = random_matrix(rng, r, 4, 4);
      const auto pinv = inverse(p);
      if (!pinv) continue;
      const std::vector<std::int64_t> diag{1, -1, trial % 2 ? 1 : -1, -1};
      const ZqMatrix a = p * ZqMatrix::diagonal(r, diag) * *pinv;
      const auto s = eigen_split(a);
      const auto id = ZqMatrix::identity(r, 4);
      EXPECT_EQ(s.projector_plus + s.projector_minus, id);
      EXPECT_TRUE((s.projector_plus * s.projector_minus).is_zero());
      EXPECT_EQ(s.projector_plus * s.projector_plus, s.projector_plus);
      EXPECT_TRUE(s.plus.is_free());
      EXPECT_TRUE(s.minus.is_free());
      EXPECT_EQ(s.plus.rank() + s.minus.rank(), 4u);
      EXPECT_EQ(s.plus + s.minus, Submodule::full(r, 4));
    }
  }
}

// ---------------------------------------------------------------------------
// exhaustive isotropic oracle
// ---------------------------------------------------------------------------

TEST(IsotropicOracle, StandardFormRankFour) {
  const Ring r(3, 1);
  const BilinearForm form(standard_gram(r, 4));
  EXPECT_EQ(max_isotropic_oracle(form, Submodule::full(r, 4)), 2);
}

TEST(IsotropicOracle, InsideBocksteinKernelEveryMaximalContainsPerp) {
  const Ring r(3, 1);
  const BilinearForm form(standard_gram(r, 4));
  const Submodule ker_b = Submodule::span(r, 4, {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  const Submodule perp = orthogonal_complement(form, ker_b);
  const auto res = search_isotropic_summands(form, ker_b, true);
  EXPECT_EQ(res.max_rank, 2);
  ASSERT_FALSE(res.maximal.empty());
  for (const auto& v : res.maximal) EXPECT_TRUE(v.contains(perp));
}

TEST(IsotropicOracle, ZeroFormIsFullyIsotropic) {
  const Ring r(3, 1);
  EXPECT_EQ(max_isotropic_oracle(BilinearForm(ZqMatrix(r, 2, 2)), Submodule::full(r, 2)), 2);
}

TEST(IsotropicOracle, HalfRankForNondegenerateForms) {
  for (auto [ring, d] : {std::pair{Ring(3, 1), 6}, std::pair{Ring(3, 2), 4}, std::pair{Ring(5, 1), 4}}) {
    const BilinearForm form(standard_gram(ring, static_cast<std::size_t>(d)));
    EXPECT_EQ(max_isotropic_oracle(form, Submodule::full(ring, static_cast<std::size_t>(d))), d / 2);
  }
}

TEST(IsotropicOracle, SerialAndParallelAgree) {
  const Ring r(3, 1);
  const BilinearForm form(standard_gram(r, 6));
  const Submodule full = Submodule::full(r, 6);
  const auto a = search_isotropic_summands(form, full, true, Execution::Serial);
  const auto b = search_isotropic_summands(form, full, true, Execution::Parallel);
  EXPECT_EQ(a.max_rank, b.max_rank);
  EXPECT_EQ(a.maximal_count, b.maximal_count);
  EXPECT_EQ(a.maximal, b.maximal);
  EXPECT_EQ(a.candidates, b.candidates);
  // Lagrangians of a symplectic F_3^6: (3+1)(3^2+1)(3^3+1) = 1120
  EXPECT_EQ(a.maximal_count, 1120u);
}

TEST(IsotropicOracle, CountsSummandsExactlyOnce) {
  // every free rank-1 summand of (Z/9)^2 is isotropic for the zero form:
  // unimodular vectors / units = (81 - 9) / 6 = 12 lines
  const Ring r(3, 2);
  const auto lines = isotropic_summands_of_rank(BilinearForm(ZqMatrix(r, 2, 2)), Submodule::full(r, 2), 1);
  EXPECT_EQ(lines.size(), 12u);
  std::set<std::vector<Residue>> distinct;
  for (const auto& l : lines) distinct.insert(l.basis().entries());
  EXPECT_EQ(distinct.size(), 12u);
}

TEST(IsotropicOracle, GuardRejectsLargeInstances) {
  const Ring r25(5, 2);
  EXPECT_THROW(max_isotropic_oracle(BilinearForm(standard_gram(r25, 2)), Submodule::full(r25, 2)), GuardExceeded);
  const Ring r3(3, 1);
  EXPECT_THROW(max_isotropic_oracle(BilinearForm(standard_gram(r3, 8)), Submodule::full(r3, 8)), GuardExceeded);
}

TEST(IsotropicOracle, AgreesWithSpanEnumeration) {
  // distinct free isotropic spans of r-tuples of vectors, r = 1 and 2
  struct Case {
    Ring ring;
    std::size_t d;
    bool symplectic;
  };
  for (const Case& c : {Case{Ring(3, 2), 2, false}, Case{Ring(3, 2), 2, true}, Case{Ring(3, 1), 4, true},
                        Case{Ring(3, 2), 3, false}, Case{Ring(5, 1), 3, false}}) {
    const BilinearForm form(c.symplectic ? standard_gram(c.ring, c.d) : ZqMatrix(c.ring, c.d, c.d));
    const auto vectors = all_vectors(c.ring, c.d);
    std::set<std::vector<Residue>> rank1, rank2;
    for (const auto& u : vectors) {
      const Submodule s = Submodule::span(c.ring, c.d, {u});
      if (s.is_free() && s.rank() == 1 && is_totally_isotropic(form, s)) rank1.insert(s.basis().entries());
      if (c.ring.modulus() * c.ring.modulus() > 100) continue;
      for (const auto& v : vectors) {
        const Submodule t = Submodule::span(c.ring, c.d, {u, v});
        if (t.is_free() && t.rank() == 2 && is_totally_isotropic(form, t)) rank2.insert(t.basis().entries());
      }
    }
    const Submodule full = Submodule::full(c.ring, c.d);
    EXPECT_EQ(isotropic_summands_of_rank(form, full, 1).size(), rank1.size());
    if (c.ring.modulus() * c.ring.modulus() <= 100)
      EXPECT_EQ(isotropic_summands_of_rank(form, full, 2).size(), rank2.size());
  }
}
