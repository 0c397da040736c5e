#pragma once

#include <string>
#include <vector>

#include "demuskin/core/presentation.hpp"
#include "demuskin/words/endo.hpp"

namespace demuskin::core {

using words::ClassTwoEndo;

/// An action of Z/2 on the presented group, lifted to F/F^3.
struct InvolutionAction {
  ClassTwoEndo endo;
  /// Action on H^1 = Hom(F/F^2, Z/q) in the column convention: the linear part L
  /// of the endomorphism (row k = image of g_k mod F^2) acting on coordinate
  /// columns of functionals.
  zq::ZqMatrix h1_matrix;
  /// mu with h1^T G h1 = mu G for the cup gram G.
  Residue h2_scalar = 1;
  /// t with endo(w) = w^t.
  Residue relator_power = 1;
  std::vector<std::string> warnings;
};

/// chi on the new generators k -> basis(g_k).
CharacterData pull_back_character(const CharacterData& chi, const ClassTwoEndo& basis);

/// Validates an endomorphism as an action on `pres`: order at most 2 on F/F^3,
/// relator mapped to a power of itself, coherent with the cup form. Throws
/// ActionError otherwise. A mismatch between the relator power and the form
/// scalar is recorded as a warning.
InvolutionAction make_action(const DemushkinPresentation& pres, const ClassTwoEndo& endo);

/// g -> g, x_even -> x_even, x0 -> x0^-1, x_odd -> x_odd^-1.
InvolutionAction standard_involution(const DemushkinPresentation& pres);
/// The endomorphism underlying standard_involution for a frame of even rank.
ClassTwoEndo standard_involution_endo(const Frame& frame);

/// Replaces `perturbation` (which must reduce to `linear` mod F^2) by the odd
/// power of itself that has order 2, then validates it with make_action.
/// Throws PreconditionError if linear^2 != 1 or the linear parts differ, and
/// ActionError if the result does not preserve the relator.
InvolutionAction lift_involution(const DemushkinPresentation& pres, const zq::ZqMatrix& linear,
                                 const ClassTwoEndo& perturbation);

struct SymmetrizedBasis {
  /// old generator k -> new generator k, written in the old generators
  ClassTwoEndo basis;
  /// the relator written in the new generators
  ClassTwoElement relator;
  /// the action on the new generators: each maps to itself or its inverse
  InvolutionAction action;
};

/// For an action sending every generator to (itself or its inverse) times an
/// element of F^2, rebases by central square roots so that the action becomes
/// exactly g -> g^{+-1}. Throws ActionError if the action has another shape.
SymmetrizedBasis symmetrize_basis(const DemushkinPresentation& pres, const InvolutionAction& action);

enum class CoinvariantKind { Free, Demushkin, Degenerate };

std::string to_string(CoinvariantKind k);

struct CoinvariantResult {
  /// H^1-rank of the coinvariant group.
  std::size_t rank = 0;
  CoinvariantKind kind = CoinvariantKind::Free;
  /// For Demushkin: the induced group has n = m and invariant q_invariant
  /// (0 when the truncation cannot see it).
  int m = 0;
  std::int64_t q_invariant = 0;
  /// Eigenbasis of the action on F/F^2: old generator k -> new generator k.
  ClassTwoEndo basis;
  /// Indices (in the new basis) of the +1 generators that survive.
  std::vector<std::size_t> kept;
  /// The image of the relator on the surviving generators.
  ClassTwoElement relator;
  std::vector<std::string> warnings;
};

/// Coinvariants of the action at class 2: generators with eigenvalue -1 are
/// eliminated and the relator is re-collected on the survivors.
CoinvariantResult coinvariants(const DemushkinPresentation& pres, const InvolutionAction& action);

}  // namespace demuskin::core
