// Free quotient construction. Certificates are cross-checked in the original
// generators: the normal closure of the killed generators must contain the
// relator, be stable under the action, and have V as its annihilator mod F^2.

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "demuskin/builder/quotient.hpp"
#include "demuskin/errors.hpp"

using namespace demuskin;
using namespace demuskin::builder;
using core::standard_involution;
using core::standard_presentation;
using zq::Vector;
using zq::ZqMatrix;

namespace {

ClassTwoElement gen(const words::Frame& f, std::size_t k) { return ClassTwoElement::generator(f, k); }

Vector unit_vector(std::size_t d, std::size_t k, zq::Residue value = 1) {
  Vector e(d, 0);
  e[k] = value;
  return e;
}

Submodule span(const DemushkinPresentation& pres, const std::vector<Vector>& rows) {
  return Submodule::span(pres.modulus().ring_q(), pres.rank(), rows);
}

// dual coordinates: g* = 0, x_i* = i + 1
Submodule coordinate_span(const DemushkinPresentation& pres, const std::vector<std::size_t>& idx) {
  std::vector<Vector> rows;
  for (std::size_t k : idx) rows.push_back(unit_vector(pres.rank(), k));
  return span(pres, rows);
}

ClassTwoElement random_element(std::mt19937_64& rng, const words::Frame& f) {
  ClassTwoElement u(f);
  std::uniform_int_distribution<std::int64_t> g(0, f.modulus.q2 - 1), c(0, f.modulus.q - 1);
  for (std::size_t i = 0; i < f.rank; ++i) u.set_gen_exp(i, g(rng));
  for (std::size_t i = 0; i < f.rank; ++i)
    for (std::size_t j = i + 1; j < f.rank; ++j) u.set_comm_exp(i, j, c(rng));
  return u;
}

ClassTwoEndo random_automorphism(std::mt19937_64& rng, const words::Frame& f) {
  while (true) {
    std::vector<ClassTwoElement> images;
    for (std::size_t k = 0; k < f.rank; ++k) images.push_back(random_element(rng, f));
    ClassTwoEndo e(f, images);
    if (e.is_automorphism()) return e;
  }
}

struct Transported {
  DemushkinPresentation pres;
  InvolutionAction action;
  Submodule V;
};

// Moves (pres, sigma, V) along the automorphism beta: relator beta^-1(w),
// action beta^-1 sigma beta, character chi o beta, functionals phi -> phi L^T.
Transported transport(const DemushkinPresentation& pres, const ClassTwoEndo& sigma, const Submodule& v,
                      const ClassTwoEndo& beta) {
  const ClassTwoEndo back = invert_auto(beta);
  DemushkinPresentation moved(pres.generators(), pres.modulus(), apply_endo(back, pres.relator()),
                              core::pull_back_character(pres.chi(), beta));
  const InvolutionAction action = core::make_action(moved, compose(back, compose(sigma, beta)));
  const ZqMatrix lt = beta.linear_part().transpose();
  std::vector<Vector> rows;
  for (const Vector& r : v.basis_rows()) rows.push_back(zq::mul(r, lt));
  return {moved, action, span(moved, rows)};
}

// Independent reading of a certificate in the original generators.
void expect_realizes(const DemushkinPresentation& pres, const InvolutionAction& action,
                     const FreeQuotientCertificate& cert) {
  const words::Frame& f = pres.frame();
  std::vector<ClassTwoElement> killed;
  for (std::size_t k : cert.killed) killed.push_back(cert.basis_change.image(k));
  const words::NormalSubgroup kill(f, killed);
  EXPECT_TRUE(kill.contains(pres.relator()));
  for (const auto& x : killed) EXPECT_TRUE(kill.contains(apply_endo(action.endo, x)));
  // the quotient's H^1 is the annihilator of the killed part of F/F^2
  const zq::Ring rq = pres.modulus().ring_q();
  for (const Vector& phi : cert.V.basis_rows())
    for (const Vector& x : kill.abelian_image().basis_rows()) EXPECT_EQ(zq::dot(rq, phi, x), 0);
  EXPECT_EQ(f.rank - kill.abelian_image().rank(), cert.V.rank());
}

std::string describe(const FreeQuotientCertificate& c) {
  const auto& f = c.flags;
  std::string out = "flags " + std::to_string(f.v.usable()) + std::to_string(f.v.gamma_condition()) +
                    std::to_string(f.adapted) + std::to_string(f.relator_contained) + std::to_string(f.surjective_mod_f2) +
                    std::to_string(f.delta_invariant_kill) + std::to_string(f.v_realized);
  for (const auto& n : c.notes) out += "; " + n;
  return out;
}

bool partners_apart(const std::vector<std::size_t>& kept) {
  std::set<std::size_t> s(kept.begin(), kept.end());
  for (std::size_t k : kept)
    if (s.count(k ^ 1)) return false;
  return true;
}

const std::vector<zq::Modulus> kSweepModuli{zq::Modulus(3, 1), zq::Modulus(3, 2), zq::Modulus(5, 1)};

}  // namespace

// ---------------------------------------------------------------------------
// build_V and validate_V
// ---------------------------------------------------------------------------

TEST(BuildV, RankSixMixedSignature) {
  const auto pres = standard_presentation(4, zq::Modulus(3, 1));
  const auto v = build_V(pres, standard_involution(pres), {1, 1});
  EXPECT_EQ(v.V, coordinate_span(pres, {0, 3, 4}));  // g*, x2*, x3*
  EXPECT_TRUE(v.checks.usable());
  EXPECT_TRUE(v.checks.maximal);
  EXPECT_TRUE(v.checks.contains_gamma);
  EXPECT_EQ(v.V.rank(), 3u);
}

TEST(BuildV, ExtremeSignatures) {
  const auto pres = standard_presentation(4, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  EXPECT_EQ(build_V(pres, action, {2, 0}).V, coordinate_span(pres, {0, 3, 5}));
  EXPECT_EQ(build_V(pres, action, {0, 2}).V, coordinate_span(pres, {0, 2, 4}));
}

TEST(BuildV, RankFour) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  EXPECT_EQ(build_V(pres, action, {1, 0}).V, coordinate_span(pres, {0, 3}));
  EXPECT_EQ(build_V(pres, action, {0, 1}).V, coordinate_span(pres, {0, 2}));
}

TEST(BuildV, RankTwoKeepsOnlyGamma) {
  const auto pres = standard_presentation(0, zq::Modulus(5, 1));
  const auto v = build_V(pres, standard_involution(pres), {0, 0});
  EXPECT_EQ(v.V, coordinate_span(pres, {0}));
  EXPECT_TRUE(v.checks.maximal);
}

TEST(BuildV, Rejections) {
  const auto pres = standard_presentation(4, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  EXPECT_THROW(build_V(pres, action, {1, 0}), InputError);
  EXPECT_THROW(build_V(pres, action, {3, -1}), InputError);
  const auto trivial = core::make_action(pres, ClassTwoEndo::identity(pres.frame()));
  EXPECT_THROW(build_V(pres, trivial, {1, 1}), PreconditionError);
}

TEST(ValidateV, GammaLine) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto v = validate_V(pres, standard_involution(pres), core::gamma_line(pres));
  EXPECT_TRUE(v.checks.free);
  EXPECT_TRUE(v.checks.delta_invariant);
  EXPECT_TRUE(v.checks.isotropic);
  EXPECT_TRUE(v.checks.in_bockstein_kernel);
  EXPECT_FALSE(v.checks.maximal);
  EXPECT_TRUE(v.checks.contains_gamma);
}

TEST(ValidateV, FailingFlags) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  const auto x0 = validate_V(pres, action, coordinate_span(pres, {1}));
  EXPECT_FALSE(x0.checks.in_bockstein_kernel);
  EXPECT_TRUE(x0.checks.isotropic);
  const auto both = validate_V(pres, action, coordinate_span(pres, {0, 1}));
  EXPECT_FALSE(both.checks.isotropic);
  EXPECT_FALSE(both.checks.usable());
  const auto mixed = validate_V(pres, action, span(pres, {unit_vector(4, 2), unit_vector(4, 3)}));
  EXPECT_TRUE(mixed.checks.delta_invariant);
  // x1 is negated and x2 fixed
  const auto sum = validate_V(pres, action, span(pres, {Vector{0, 0, 1, 1}}));
  EXPECT_FALSE(sum.checks.delta_invariant);
  const auto nine = standard_presentation(2, zq::Modulus(3, 2));
  const auto torsion = validate_V(nine, standard_involution(nine), span(nine, {Vector{0, 0, 3, 0}}));
  EXPECT_FALSE(torsion.checks.free);
  EXPECT_TRUE(torsion.checks.isotropic);
  EXPECT_THROW(validate_V(pres, action, Submodule(pres.modulus().ring_q(), 6)), InputError);
}

TEST(ValidateV, GammaConditionOnlyBindsMaximalV) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  const auto small = validate_V(pres, action, coordinate_span(pres, {3}));
  EXPECT_TRUE(small.checks.usable());
  EXPECT_TRUE(small.checks.gamma_condition());
  const auto big = validate_V(pres, action, coordinate_span(pres, {2, 3}));
  EXPECT_FALSE(big.checks.isotropic);
}

// ---------------------------------------------------------------------------
// adapted_basis
// ---------------------------------------------------------------------------

TEST(AdaptedBasis, BuiltVIsAlreadyAdapted) {
  for (const auto& m : kSweepModuli)
    for (int n : {2, 4}) {
      const auto pres = standard_presentation(n, m);
      const auto action = standard_involution(pres);
      for (int up = 0; up <= n / 2; ++up) {
        const auto ab = adapted_basis(pres, action, build_V(pres, action, {up, n / 2 - up}));
        EXPECT_EQ(ab.basis, ClassTwoEndo::identity(pres.frame()));
        EXPECT_EQ(ab.relator, pres.relator());
      }
    }
}

TEST(AdaptedBasis, RankTwoIsIdentity) {
  for (const auto& m : kSweepModuli) {
    const auto pres = standard_presentation(0, m);
    const auto action = standard_involution(pres);
    const auto ab = adapted_basis(pres, action, validate_V(pres, action, core::gamma_line(pres)));
    EXPECT_EQ(ab.basis, ClassTwoEndo::identity(pres.frame()));
    EXPECT_EQ(ab.kept, (std::vector<std::size_t>{0}));
  }
}

TEST(AdaptedBasis, MixedLineUnderTrivialAction) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto trivial = core::make_action(pres, ClassTwoEndo::identity(pres.frame()));
  const Submodule v = span(pres, {unit_vector(4, 0), Vector{0, 0, 1, 1}});
  const auto ab = adapted_basis(pres, trivial, validate_V(pres, trivial, v));
  EXPECT_NE(ab.basis, ClassTwoEndo::identity(pres.frame()));
  EXPECT_EQ(ab.relator, core::standard_relator(pres.frame()));
  EXPECT_EQ(apply_endo(invert_auto(ab.basis), pres.relator()), ab.relator);
  EXPECT_TRUE(partners_apart(ab.kept));
  std::vector<Vector> realized;
  for (std::size_t k : ab.kept) realized.push_back(ab.dual.row(k));
  EXPECT_EQ(span(pres, realized), v);
  // re-validate in the new basis: the kept coordinates themselves
  const DemushkinPresentation rebased(pres.generators(), pres.modulus(), ab.relator, pres.chi());
  const auto moved = core::make_action(rebased, ab.action);
  EXPECT_TRUE(validate_V(rebased, moved, coordinate_span(rebased, ab.kept)).checks.usable());
}

TEST(AdaptedBasis, NonCoordinateInvariantV) {
  // g*, x2* + x4*, x1* - x3* under the standard involution
  const auto pres = standard_presentation(4, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  const Submodule v = span(pres, {unit_vector(6, 0), Vector{0, 0, 0, 1, 0, 1}, Vector{0, 0, 1, 0, 2, 0}});
  const auto checked = validate_V(pres, action, v);
  ASSERT_TRUE(checked.checks.usable());
  ASSERT_TRUE(checked.checks.maximal);
  const auto ab = adapted_basis(pres, action, checked);
  EXPECT_EQ(ab.relator, core::standard_relator(pres.frame()));
  EXPECT_TRUE(partners_apart(ab.kept));
  EXPECT_EQ(ab.kept.size(), 3u);
  for (std::size_t k = 0; k < 6; ++k) {
    const auto& img = ab.action.image(k);
    EXPECT_TRUE(img == gen(pres.frame(), k) || img == words::inverse(gen(pres.frame(), k)));
  }
  const auto cert = free_quotient(pres, action, checked);
  ASSERT_TRUE(cert.green());
  EXPECT_EQ(*cert.signature, (Signature{1, 1}));
  expect_realizes(pres, action, cert);
}

TEST(AdaptedBasis, RejectsUnusableV) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  EXPECT_THROW(adapted_basis(pres, action, validate_V(pres, action, coordinate_span(pres, {0, 1}))),
               PreconditionError);
}

TEST(AdaptedBasis, RandomConjugatesOfBuiltV) {
  std::mt19937_64 rng(41);
  for (const auto& m : kSweepModuli)
    for (int n : {2, 4}) {
      const auto pres = standard_presentation(n, m);
      const auto action = standard_involution(pres);
      for (int up = 0; up <= n / 2; ++up) {
        const auto v = build_V(pres, action, {up, n / 2 - up});
        const auto moved = transport(pres, action.endo, v.V, random_automorphism(rng, pres.frame()));
        const auto checked = validate_V(moved.pres, moved.action, moved.V);
        ASSERT_TRUE(checked.checks.usable());
        const auto ab = adapted_basis(moved.pres, moved.action, checked);
        EXPECT_EQ(ab.relator, core::standard_relator(pres.frame()));
        EXPECT_EQ(apply_endo(invert_auto(ab.basis), moved.pres.relator()), ab.relator);
        EXPECT_EQ(compose(invert_auto(ab.basis), compose(moved.action.endo, ab.basis)), ab.action);
        EXPECT_TRUE(partners_apart(ab.kept));
        const auto cert = free_quotient(moved.pres, moved.action, checked);
        ASSERT_TRUE(cert.green()) << "n=" << n << " q=" << m.q << " u+=" << up << " " << describe(cert);
        EXPECT_EQ(*cert.signature, (Signature{up, n / 2 - up}));
        expect_realizes(moved.pres, moved.action, cert);
      }
    }
}

TEST(AdaptedBasis, PlusScalarAction) {
  // fix g and x0, negate x1 and x2: the cup form is preserved
  const auto pres = standard_presentation(2, zq::Modulus(5, 1));
  const auto& f = pres.frame();
  const auto action = core::make_action(
      pres, ClassTwoEndo(f, {gen(f, 0), gen(f, 1), words::inverse(gen(f, 2)), words::inverse(gen(f, 3))}));
  ASSERT_EQ(action.h2_scalar, 1);
  std::mt19937_64 rng(5);
  for (const auto& rows : {std::vector<Vector>{unit_vector(4, 0), unit_vector(4, 2)},
                           std::vector<Vector>{unit_vector(4, 0), Vector{0, 0, 1, 3}}}) {
    const auto moved = transport(pres, action.endo, span(pres, rows), random_automorphism(rng, f));
    const auto cert = free_quotient(moved.pres, moved.action, validate_V(moved.pres, moved.action, moved.V));
    ASSERT_TRUE(cert.green()) << describe(cert);
    EXPECT_EQ(*cert.signature, (Signature{0, 1}));
    expect_realizes(moved.pres, moved.action, cert);
  }
}

// ---------------------------------------------------------------------------
// free_quotient
// ---------------------------------------------------------------------------

TEST(FreeQuotient, RankFourFixedSignature) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  const auto cert = free_quotient(pres, action, build_V(pres, action, {1, 0}));
  ASSERT_TRUE(cert.green());
  EXPECT_EQ(cert.killed, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(cert.kept, (std::vector<std::size_t>{0, 3}));
  EXPECT_TRUE(words::quotient_kill({1, 2}, cert.relator).is_identity());
  EXPECT_EQ(cert.kept.size(), 2u);
  EXPECT_EQ(cert.V_realized, cert.V);
  EXPECT_EQ(*cert.signature, (Signature{1, 0}));
  expect_realizes(pres, action, cert);
}

TEST(FreeQuotient, RankSixNegatedSignature) {
  const auto pres = standard_presentation(4, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  const auto cert = free_quotient(pres, action, build_V(pres, action, {0, 2}));
  ASSERT_TRUE(cert.green());
  EXPECT_EQ(cert.killed, (std::vector<std::size_t>{1, 3, 5}));
  EXPECT_EQ(cert.kept, (std::vector<std::size_t>{0, 2, 4}));
  expect_realizes(pres, action, cert);
}

TEST(FreeQuotient, AdversarialVIsRed) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  const auto cert = free_quotient(pres, action, validate_V(pres, action, coordinate_span(pres, {2, 3})));
  EXPECT_FALSE(cert.green());
  EXPECT_FALSE(cert.flags.v.isotropic);
  EXPECT_FALSE(cert.flags.v.contains_gamma);
  EXPECT_FALSE(cert.flags.adapted);
  EXPECT_FALSE(cert.signature.has_value());
  EXPECT_THROW(signature_of(cert, action), PreconditionError);
}

TEST(FreeQuotient, NonMaximalVWithoutGamma) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  const auto cert = free_quotient(pres, action, validate_V(pres, action, coordinate_span(pres, {3})));
  ASSERT_TRUE(cert.green());
  EXPECT_EQ(cert.kept.size(), 1u);
  expect_realizes(pres, action, cert);
}

TEST(FreeQuotient, NotesRecordTheLiftingStep) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  const auto cert = free_quotient(pres, action, build_V(pres, action, {0, 1}));
  ASSERT_FALSE(cert.notes.empty());
  EXPECT_NE(cert.notes.front().find("lifts"), std::string::npos);
}

// ---------------------------------------------------------------------------
// signature_of, uniqueness_check, factoring_check
// ---------------------------------------------------------------------------

TEST(SignatureOf, LocalFieldShadowAtFive) {
  const auto pres = standard_presentation(4, zq::Modulus(5, 1));
  const auto action = standard_involution(pres);
  const auto cert = free_quotient(pres, action, build_V(pres, action, {0, 2}));
  ASSERT_TRUE(cert.green());
  const Signature sig = signature_of(cert, action);
  EXPECT_EQ(sig, (Signature{0, 2}));
  EXPECT_EQ(sig.u_plus + 1, 1);
  EXPECT_EQ(sig.u_minus, 2);
  EXPECT_EQ(cert.kept.size(), 3u);
}

TEST(SignatureOf, SmallCertificates) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  EXPECT_EQ(signature_of(free_quotient(pres, action, build_V(pres, action, {1, 0})), action), (Signature{1, 0}));
  EXPECT_EQ(signature_of(free_quotient(pres, action, build_V(pres, action, {0, 1})), action), (Signature{0, 1}));
}

TEST(Uniqueness, FixedCertificatesAreTheCoinvariants) {
  for (int n : {2, 4}) {
    const auto pres = standard_presentation(n, zq::Modulus(3, 1));
    const auto action = standard_involution(pres);
    const auto cert = free_quotient(pres, action, build_V(pres, action, {n / 2, 0}));
    EXPECT_TRUE(uniqueness_check(pres, action, cert));
    const auto coinv = core::coinvariants(pres, action);
    EXPECT_EQ(coinv.rank, cert.kept.size());
  }
}

TEST(Uniqueness, OtherSignaturesAreRejected) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  const auto cert = free_quotient(pres, action, build_V(pres, action, {0, 1}));
  EXPECT_THROW(uniqueness_check(pres, action, cert), PreconditionError);
  const auto red = free_quotient(pres, action, validate_V(pres, action, coordinate_span(pres, {2, 3})));
  EXPECT_THROW(uniqueness_check(pres, action, red), PreconditionError);
}

TEST(Uniqueness, DetectsADifferentQuotient) {
  // a (1,0)-shaped but smaller kill: keeping only x2 leaves g alive in the quotient
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  const auto cert = free_quotient(pres, action, build_V(pres, action, {1, 0}));
  auto tampered = cert;
  tampered.killed = {1, 2, 3};
  EXPECT_FALSE(uniqueness_check(pres, action, tampered));
}

TEST(Factoring, BuiltVContainsGamma) {
  for (const auto& m : kSweepModuli)
    for (int n : {0, 2, 4}) {
      const auto pres = standard_presentation(n, m);
      const auto action = standard_involution(pres);
      for (int up = 0; up <= n / 2; ++up) EXPECT_TRUE(factoring_check(pres, build_V(pres, action, {up, n / 2 - up})));
    }
}

TEST(Factoring, RejectsNonMaximalV) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  EXPECT_THROW(factoring_check(pres, validate_V(pres, action, core::gamma_line(pres))), PreconditionError);
}

TEST(Factoring, ExhaustiveConverseAtThree) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  const zq::Ring r = pres.modulus().ring_q();
  const auto inv = core::invariants(pres);
  const Submodule gamma = core::gamma_line(pres);

  // brute force over pairs of dual vectors in ker B
  std::vector<Vector> ker;
  for (int code = 0; code < 81; ++code) {
    Vector v{code % 3, code / 3 % 3, code / 9 % 3, code / 27};
    if (zq::dot(r, v, inv.bockstein) == 0) ker.push_back(v);
  }
  std::set<std::vector<Vector>> seen;
  int isotropic_planes = 0;
  for (const auto& a : ker)
    for (const auto& b : ker) {
      const Submodule s = span(pres, {a, b});
      if (s.rank() != 2 || inv.cup.pair(a, a) != 0 || inv.cup.pair(a, b) != 0 || inv.cup.pair(b, b) != 0) continue;
      EXPECT_TRUE(s.contains(gamma));
      if (seen.insert(s.basis_rows()).second) ++isotropic_planes;
    }
  EXPECT_GT(isotropic_planes, 0);

  const zq::Submodule ker_b = zq::kernel(ZqMatrix::from_rows(r, 4, {inv.bockstein}));
  const auto planes = zq::isotropic_summands_of_rank(inv.cup, ker_b, 2, zq::Execution::Serial);
  EXPECT_EQ(static_cast<int>(planes.size()), isotropic_planes);
  for (const auto& s : planes) EXPECT_TRUE(factoring_check(pres, validate_V(pres, action, s)));
  EXPECT_EQ(zq::max_isotropic_oracle(inv.cup, ker_b), 2);
}

TEST(Factoring, RankTwoPresentation) {
  const auto pres = standard_presentation(0, zq::Modulus(3, 2));
  const auto action = standard_involution(pres);
  EXPECT_TRUE(factoring_check(pres, validate_V(pres, action, core::gamma_line(pres))));
}

// ---------------------------------------------------------------------------
// properties
// ---------------------------------------------------------------------------

TEST(Sweep, EverySignatureIsRealized) {
  for (const auto& m : kSweepModuli)
    for (int n : {2, 4, 6}) {
      const auto pres = standard_presentation(n, m);
      const auto action = standard_involution(pres);
      const zq::Ring r = m.ring_q();
      const auto inv = core::invariants(pres);
      for (int up = 0; up <= n / 2; ++up) {
        const Signature sig{up, n / 2 - up};
        const auto v = build_V(pres, action, sig);
        const auto cert = free_quotient(pres, action, v);
        ASSERT_TRUE(cert.green()) << "n=" << n << " q=" << m.q << " u+=" << up;
        EXPECT_EQ(*cert.signature, sig);
        EXPECT_EQ(cert.kept.size(), static_cast<std::size_t>(n / 2 + 1));
        EXPECT_TRUE(words::quotient_kill(std::set<std::size_t>(cert.killed.begin(), cert.killed.end()), cert.relator)
                        .is_identity());
        // V_realized is a free isotropic summand inside ker B of at most maximal rank
        EXPECT_TRUE(cert.V_realized.is_free());
        EXPECT_TRUE(zq::is_totally_isotropic(inv.cup, cert.V_realized));
        for (const Vector& row : cert.V_realized.basis_rows()) EXPECT_EQ(zq::dot(r, row, inv.bockstein), 0);
        EXPECT_LE(cert.V_realized.rank(), static_cast<std::size_t>(n / 2 + 1));
        if (up == n / 2) EXPECT_TRUE(uniqueness_check(pres, action, cert));
      }
    }
}

TEST(Sweep, KillSetIsStable) {
  const auto pres = standard_presentation(4, zq::Modulus(5, 1));
  const auto action = standard_involution(pres);
  for (int up = 0; up <= 2; ++up) {
    const auto cert = free_quotient(pres, action, build_V(pres, action, {up, 2 - up}));
    std::vector<ClassTwoElement> killed;
    for (std::size_t k : cert.killed) killed.push_back(cert.basis_change.image(k));
    const words::NormalSubgroup kill(pres.frame(), killed);
    std::vector<ClassTwoElement> moved;
    for (const auto& x : killed) moved.push_back(apply_endo(action.endo, x));
    EXPECT_TRUE(kill.contains(words::NormalSubgroup(pres.frame(), moved)));
    EXPECT_TRUE(words::NormalSubgroup(pres.frame(), moved).contains(kill));
  }
}

TEST(Sweep, SignatureDoesNotDetermineTheQuotient) {
  const auto pres = standard_presentation(4, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  const auto certs = enumerate_certificates(pres, action, {1, 1});
  ASSERT_GE(certs.size(), 2u);
  std::set<std::vector<Vector>> kernels;
  for (const auto& c : certs) {
    EXPECT_EQ(*c.signature, (Signature{1, 1}));
    kernels.insert(kill_kernel_mod_f2(c).basis_rows());
  }
  EXPECT_GE(kernels.size(), 2u);
  EXPECT_EQ(certs.size(), enumerate_certificates(pres, action, {1, 1}, zq::Execution::Serial).size());
}

TEST(Sweep, KillKernelOfBuiltCertificate) {
  const auto pres = standard_presentation(2, zq::Modulus(3, 1));
  const auto action = standard_involution(pres);
  const auto cert = free_quotient(pres, action, build_V(pres, action, {1, 0}));
  EXPECT_EQ(kill_kernel_mod_f2(cert), coordinate_span(pres, {1, 2}));
}
