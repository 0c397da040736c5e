#pragma once

#include <cstdint>
#include <vector>

#include "demuskin/words/element.hpp"
#include "demuskin/zq/matrix.hpp"
#include "demuskin/zq/submodule.hpp"

namespace demuskin::words {

/// An endomorphism of F/F^3 given by the images of the generators.
class ClassTwoEndo {
 public:
  ClassTwoEndo(Frame frame, std::vector<ClassTwoElement> images);
  static ClassTwoEndo identity(const Frame& frame);
  /// Generator substitution g_k -> prod_l g_l^{rows[k][l]} (no commutator part).
  static ClassTwoEndo from_linear(const Frame& frame, const zq::ZqMatrix& rows);

  const Frame& frame() const { return frame_; }
  const std::vector<ClassTwoElement>& images() const { return images_; }
  const ClassTwoElement& image(std::size_t k) const { return images_.at(k); }

  /// Row k holds gen_exp of the k-th image reduced mod q (the action on F/F^2).
  zq::ZqMatrix linear_part() const;
  /// Same with exponents mod q^2.
  zq::ZqMatrix linear_part_q2() const;
  bool is_automorphism() const;

  friend bool operator==(const ClassTwoEndo&, const ClassTwoEndo&) = default;

 private:
  Frame frame_;
  std::vector<ClassTwoElement> images_;
};

ClassTwoElement apply_endo(const ClassTwoEndo& e, const ClassTwoElement& u);
/// outer o inner: apply `inner` first.
ClassTwoEndo compose(const ClassTwoEndo& outer, const ClassTwoEndo& inner);
ClassTwoEndo endo_power(const ClassTwoEndo& e, std::uint64_t k);
/// Inverse automorphism. Throws PreconditionError when the linear part is singular.
ClassTwoEndo invert_auto(const ClassTwoEndo& e);
/// Smallest k >= 1 with e^k = id, searching up to `bound`; 0 if not found.
std::uint64_t endo_order(const ClassTwoEndo& e, std::uint64_t bound);

/// The normal subgroup of F/F^3 generated by a list of elements.
/// Membership is decided exactly: M = <r_k> * [M, F] with [M, F] central and
/// M / [M, F] abelian, so x lies in M iff its gen_exp is a combination e of the
/// r_k (mod q^2) and x * (prod r_k^{e_k})^{-1} falls in the central subgroup
/// spanned by [r_k, g_l] and the images of the relation lattice of the r_k.
class NormalSubgroup {
 public:
  NormalSubgroup(Frame frame, std::vector<ClassTwoElement> generators);

  const Frame& frame() const { return frame_; }
  const std::vector<ClassTwoElement>& generators() const { return generators_; }

  bool contains(const ClassTwoElement& x) const;
  bool contains(const NormalSubgroup& other) const;
  /// Image in F/F^2 = (Z/q)^d.
  const zq::Submodule& abelian_image() const { return abelian_image_; }
  /// M intersected with F^2/F^3 after removing the generator part; used for membership.
  const zq::Submodule& central_part() const { return central_; }

 private:
  ClassTwoElement word_for(const zq::Vector& exponents) const;

  Frame frame_;
  std::vector<ClassTwoElement> generators_;
  zq::ZqMatrix gen_matrix_;  // rows: gen_exp of generators, mod q^2
  zq::Submodule central_;    // over Z/q in central coordinates
  zq::Submodule abelian_image_;
};

/// (F/F^3) / <central relators>: the class-2 window of a one-or-more-relator group
/// whose relators lie in F^2.
class TruncatedQuotient {
 public:
  TruncatedQuotient(GeneratorSet gens, Frame frame, std::vector<ClassTwoElement> central_relators);

  const GeneratorSet& generators() const { return gens_; }
  const std::vector<ClassTwoElement>& relators() const { return subgroup_.generators(); }
  const NormalSubgroup& relation_subgroup() const { return subgroup_; }

 private:
  GeneratorSet gens_;
  NormalSubgroup subgroup_;
};

/// u = v in the quotient, i.e. u v^{-1} lies in the span of the central relators.
bool quotient_equal(const TruncatedQuotient& tq, const ClassTwoElement& u, const ClassTwoElement& v);

}  // namespace demuskin::words
