#pragma once

#include <optional>
#include <string>
#include <vector>

#include "demuskin/core/action.hpp"
#include "demuskin/zq/isotropic_search.hpp"
#include "demuskin/zq/submodule.hpp"

namespace demuskin::builder {

using core::DemushkinPresentation;
using core::InvolutionAction;
using words::ClassTwoElement;
using words::ClassTwoEndo;
using zq::Submodule;

/// Shape of a free quotient: its F/F^2 has u_plus + 1 fixed
/// and u_minus negated generators.
struct Signature {
  int u_plus = 0;
  int u_minus = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct SubmoduleChecks {
  bool free = false;
  bool delta_invariant = false;
  bool isotropic = false;
  bool in_bockstein_kernel = false;
  /// rank n/2 + 1
  bool maximal = false;
  /// the gamma line lies in V
  bool contains_gamma = false;

  /// the four conditions a kill construction needs
  bool usable() const { return free && delta_invariant && isotropic && in_bockstein_kernel; }
  /// a maximal V must contain the gamma line
  bool gamma_condition() const { return !maximal || contains_gamma; }
};

/// A submodule of H^1 = (Z/q)^{n+2} (coordinates on the dual basis) with its checks.
struct IsotropicSubmodule {
  Submodule V;
  SubmoduleChecks checks;
};

/// Requires the standard relator and the clean standard involution. V is
/// spanned by g*, x2*, x4*, ..., x_{2u+}* and x_{2u+ +1}*, x_{2u+ +3}*, ..., x_{n-1}*.
/// Throws InputError on a signature that does not sum to n/2 and
/// PreconditionError for other presentations or actions.
IsotropicSubmodule build_V(const DemushkinPresentation& pres, const InvolutionAction& action, Signature sig);

/// Computes every flag; never throws on a failing flag.
IsotropicSubmodule validate_V(const DemushkinPresentation& pres, const InvolutionAction& action, const Submodule& v);

struct AdaptedBasis {
  /// old generator k -> new generator k
  ClassTwoEndo basis;
  /// rows: the new dual basis in old coordinates
  zq::ZqMatrix dual;
  /// the relator on the new generators (standard shape)
  ClassTwoElement relator;
  /// the action on the new generators (each maps to itself or its inverse)
  ClassTwoEndo action;
  /// new generators whose duals span V
  std::vector<std::size_t> kept;
};

/// A basis of F/F^3 in which the relator is standard, the action is clean and
/// V is spanned by the duals of generators taken from distinct hyperbolic
/// pairs. Supports actions whose H^2 scalar is -1 or +1 (including the
/// identity). Throws PreconditionError if V fails validation or no adapted
/// basis exists.
AdaptedBasis adapted_basis(const DemushkinPresentation& pres, const InvolutionAction& action,
                           const IsotropicSubmodule& v);

struct CertificateFlags {
  SubmoduleChecks v;
  bool adapted = false;
  bool relator_contained = false;
  bool surjective_mod_f2 = false;
  bool delta_invariant_kill = false;
  bool v_realized = false;

  bool green() const {
    return v.usable() && v.gamma_condition() && adapted && relator_contained && surjective_mod_f2 &&
           delta_invariant_kill && v_realized;
  }
};

struct FreeQuotientCertificate {
  ClassTwoEndo basis_change;
  /// in the new basis
  std::vector<std::size_t> killed;
  std::vector<std::size_t> kept;
  std::optional<Signature> signature;
  CertificateFlags flags;
  Submodule V;
  Submodule V_realized;
  /// relator and action in the new basis
  ClassTwoElement relator;
  ClassTwoEndo action;
  std::vector<std::string> notes;

  bool green() const { return flags.green(); }
};

/// Runs the kill construction for V. Failures are reported through the flags.
FreeQuotientCertificate free_quotient(const DemushkinPresentation& pres, const InvolutionAction& action,
                                      const IsotropicSubmodule& v);

/// (rank of the fixed part - 1, rank of the negated part) of the quotient's
/// F/F^2. Throws PreconditionError for a red certificate or one without fixed
/// generators.
Signature signature_of(const FreeQuotientCertificate& cert, const InvolutionAction& action);

/// Whether the quotient of a (n/2, 0) certificate is the maximal quotient with
/// trivial action, compared inside G/G^3. Throws PreconditionError on a red
/// certificate, another signature, or an action not negating H^2.
bool uniqueness_check(const DemushkinPresentation& pres, const InvolutionAction& action,
                      const FreeQuotientCertificate& cert);

/// gamma_line(pres) lies in V. Throws PreconditionError unless rank V = n/2 + 1.
bool factoring_check(const DemushkinPresentation& pres, const IsotropicSubmodule& v);

/// The kernel of F/F^2 -> quotient: span of killed generators in old coordinates.
Submodule kill_kernel_mod_f2(const FreeQuotientCertificate& cert);

/// Green certificates of every Delta-invariant maximal isotropic V inside ker B
/// with the given signature, found by exhaustive search (small instances only).
std::vector<FreeQuotientCertificate> enumerate_certificates(const DemushkinPresentation& pres,
                                                            const InvolutionAction& action, Signature sig,
                                                            zq::Execution exec = zq::Execution::Parallel);

}  // namespace demuskin::builder
