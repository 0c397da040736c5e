#include "demuskin/core/action.hpp"

#include <algorithm>
#include <set>

#include "demuskin/errors.hpp"

namespace demuskin::core {
namespace {

using words::inverse;
using words::power;

ClassTwoElement gen(const Frame& f, std::size_t k) { return ClassTwoElement::generator(f, k); }

// Unit exponents t with w^t = image; prefers `hint`.
std::optional<Residue> relator_power(const ClassTwoElement& w, const ClassTwoElement& image, Residue hint) {
  const zq::Ring rq = w.frame().modulus.ring_q();
  if (power(w, hint) == image) return hint;
  for (Residue t = 1; t < rq.modulus(); ++t)
    if (rq.is_unit(t) && power(w, t) == image) return t;
  return std::nullopt;
}

std::optional<Residue> form_scalar(const zq::ZqMatrix& gram, const zq::ZqMatrix& transformed, Residue hint) {
  if (transformed == gram.scaled(hint)) return hint;
  const zq::Ring& r = gram.ring();
  for (Residue mu = 0; mu < r.modulus(); ++mu)
    if (transformed == gram.scaled(mu)) return mu;
  return std::nullopt;
}

}  // namespace

CharacterData pull_back_character(const CharacterData& chi, const ClassTwoEndo& basis) {
  const Frame& f = basis.frame();
  if (chi.values.size() != f.rank) throw InputError("character and basis have different ranks");
  const zq::Ring r2 = f.modulus.ring_q2();
  CharacterData out;
  for (std::size_t k = 0; k < f.rank; ++k) {
    Residue v = 1;
    for (std::size_t l = 0; l < f.rank; ++l) v = r2.mul(v, r2.pow(chi.values[l], basis.image(k).gen_exp(l)));
    out.values.push_back(v);
  }
  return out;
}

InvolutionAction make_action(const DemushkinPresentation& pres, const ClassTwoEndo& endo) {
  const Frame& f = pres.frame();
  if (!(endo.frame() == f)) throw InputError("action lives on a different generator set");
  if (!(compose(endo, endo) == ClassTwoEndo::identity(f))) throw ActionError("action is not an involution on F/F^3");

  const zq::Ring rq = f.modulus.ring_q();
  const Residue minus_one = rq.neg(1);
  const ClassTwoElement& w = pres.relator();
  const auto t = relator_power(w, apply_endo(endo, w), minus_one);
  if (!t) throw ActionError("action does not send the relator to a power of itself");

  const zq::ZqMatrix lin = endo.linear_part();
  const zq::ZqMatrix gram = invariants(pres).cup.gram();
  const auto mu = form_scalar(gram, lin.transpose() * gram * lin, *t);
  if (!mu) throw ActionError("action does not rescale the cup form");

  InvolutionAction out{endo, lin, *mu, *t, {}};
  if (*mu != *t)
    out.warnings.push_back("relator power " + std::to_string(*t) + " differs from the cup-form scalar " +
                           std::to_string(*mu));
  if (*t != 1 && *t != minus_one)
    out.warnings.push_back("relator power " + std::to_string(*t) + " is not +1 or -1");
  return out;
}

ClassTwoEndo standard_involution_endo(const Frame& frame) {
  std::vector<ClassTwoElement> images;
  for (std::size_t k = 0; k < frame.rank; ++k) {
    const bool negated = k == 1 || (k >= 2 && k % 2 == 0);
    images.push_back(negated ? inverse(gen(frame, k)) : gen(frame, k));
  }
  return ClassTwoEndo(frame, std::move(images));
}

InvolutionAction standard_involution(const DemushkinPresentation& pres) {
  return make_action(pres, standard_involution_endo(pres.frame()));
}

InvolutionAction lift_involution(const DemushkinPresentation& pres, const zq::ZqMatrix& linear,
                                 const ClassTwoEndo& perturbation) {
  const Frame& f = pres.frame();
  const zq::Ring rq = f.modulus.ring_q();
  if (linear.rows() != f.rank || linear.cols() != f.rank) throw InputError("linear part has the wrong shape");
  const zq::ZqMatrix lin = linear.reduced_to(rq);
  if (!(lin * lin == zq::ZqMatrix::identity(rq, f.rank)))
    throw PreconditionError("linear part is not an involution mod q");
  if (!(perturbation.frame() == f)) throw InputError("perturbation lives on a different generator set");
  if (!(perturbation.linear_part() == lin)) throw PreconditionError("perturbation does not reduce to the linear part");

  const auto bound = static_cast<std::uint64_t>(2 * f.modulus.q * f.modulus.q * f.modulus.q);
  const std::uint64_t order = endo_order(perturbation, bound);
  if (order == 0) throw ActionError("perturbation has no finite order within " + std::to_string(bound));
  std::uint64_t odd = order;
  while (odd % 2 == 0) odd /= 2;
  std::uint64_t rest = odd;
  while (rest % static_cast<std::uint64_t>(f.modulus.p) == 0) rest /= static_cast<std::uint64_t>(f.modulus.p);
  if (order / odd > 2 || rest != 1)
    throw ActionError("perturbation has order " + std::to_string(order) + ", not of the form 2 p^b");
  return make_action(pres, endo_power(perturbation, odd));
}

SymmetrizedBasis symmetrize_basis(const DemushkinPresentation& pres, const InvolutionAction& action) {
  const Frame& f = pres.frame();
  std::vector<ClassTwoElement> new_gens;
  std::vector<int> signs;
  for (std::size_t k = 0; k < f.rank; ++k) {
    const ClassTwoElement g = gen(f, k);
    const ClassTwoElement& img = action.endo.image(k);
    const ClassTwoElement fixed_defect = inverse(g) * img;  // img = g z
    const ClassTwoElement flip_defect = g * img;            // img = g^-1 z
    if (fixed_defect.is_central()) {
      new_gens.push_back(g * central_sqrt(fixed_defect));
      signs.push_back(1);
    } else if (flip_defect.is_central()) {
      new_gens.push_back(inverse(central_sqrt(flip_defect)) * g);
      signs.push_back(-1);
    } else {
      throw ActionError("generator " + pres.generators().label(k) +
                        " is not sent to itself or its inverse modulo F^2");
    }
  }
  const ClassTwoEndo basis(f, std::move(new_gens));
  const ClassTwoEndo back = invert_auto(basis);
  const ClassTwoElement relator = apply_endo(back, pres.relator());
  const ClassTwoEndo conj = compose(back, compose(action.endo, basis));
  for (std::size_t k = 0; k < f.rank; ++k) {
    const ClassTwoElement expected = signs[k] > 0 ? gen(f, k) : inverse(gen(f, k));
    if (!(conj.image(k) == expected)) throw Error("symmetrized action is not clean on " + pres.generators().label(k));
  }
  const DemushkinPresentation rebased(pres.generators(), f.modulus, relator, pull_back_character(pres.chi(), basis));
  return {basis, relator, make_action(rebased, conj)};
}

std::string to_string(CoinvariantKind k) {
  switch (k) {
    case CoinvariantKind::Free:
      return "free";
    case CoinvariantKind::Demushkin:
      return "demushkin";
    case CoinvariantKind::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

CoinvariantResult coinvariants(const DemushkinPresentation& pres, const InvolutionAction& action) {
  const Frame& f = pres.frame();
  const zq::Ring rq = f.modulus.ring_q();

  // eigenbasis of the action on F/F^2, ordered by leading unit column
  const zq::EigenSplit split = zq::eigen_split_rows(action.endo.linear_part());
  const auto plus = split.plus.free_basis(), minus = split.minus.free_basis();
  if (!plus || !minus) throw Error("eigenspaces of an involution must be free");
  std::vector<zq::Vector> rows = plus->row_list();
  for (const auto& r : minus->row_list()) rows.push_back(r);
  auto lead = [&rq](const zq::Vector& v) {
    return std::find_if(v.begin(), v.end(), [&rq](Residue x) { return rq.is_unit(x); }) - v.begin();
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) { return lead(a) < lead(b); });
  const zq::ZqMatrix change = zq::ZqMatrix::from_rows(rq, f.rank, rows);
  if (!zq::is_invertible(change)) throw Error("eigenvectors do not form a basis");

  const ClassTwoEndo eigen_basis = ClassTwoEndo::from_linear(f, change);
  const ClassTwoEndo back = invert_auto(eigen_basis);
  const CharacterData chi = pull_back_character(pres.chi(), eigen_basis);
  const bool same_basis = change == zq::ZqMatrix::identity(rq, f.rank);
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < f.rank; ++k) labels.push_back(same_basis ? pres.generators().label(k) : "y" + std::to_string(k));
  const DemushkinPresentation rebased(GeneratorSet(labels), f.modulus, apply_endo(back, pres.relator()), chi);
  const InvolutionAction diag = make_action(rebased, compose(back, compose(action.endo, eigen_basis)));
  const SymmetrizedBasis sym = symmetrize_basis(rebased, diag);

  std::set<std::size_t> killed;
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < f.rank; ++k) {
    if (sym.action.endo.image(k) == gen(f, k))
      kept.push_back(k);
    else
      killed.insert(k);
  }
  const ClassTwoElement image = words::restrict_to(kept, words::quotient_kill(killed, sym.relator));

  CoinvariantResult out{kept.size(), CoinvariantKind::Free, 0, 0, compose(eigen_basis, sym.basis), kept, image, {}};
  if (!image.is_identity()) {
    const Frame sub{kept.size(), f.modulus};
    const CohomologyData inv = invariants(sub, image);
    if (inv.is_demushkin) {
      out.kind = CoinvariantKind::Demushkin;
      out.m = static_cast<int>(kept.size()) - 2;
      int v = f.modulus.f;
      for (Residue b : inv.bockstein) v = std::min(v, rq.valuation(b));
      if (v < f.modulus.f) {
        out.q_invariant = f.modulus.q;
        for (int i = 0; i < v; ++i) out.q_invariant *= f.modulus.p;
      }
    } else {
      out.kind = CoinvariantKind::Degenerate;
      out.warnings.push_back("relator survives but its cup form is degenerate on the coinvariants");
    }
  }
  if (action.h2_scalar == rq.neg(1) && out.kind != CoinvariantKind::Free)
    out.warnings.push_back("action negates H^2 but the coinvariants are not free");
  return out;
}

}  // namespace demuskin::core
