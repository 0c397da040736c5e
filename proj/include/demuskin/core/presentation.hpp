#pragma once

#include <string>
#include <vector>

#include "demuskin/words/element.hpp"
#include "demuskin/zq/submodule.hpp"

namespace demuskin::core {

using words::ClassTwoElement;
using words::Frame;
using words::GeneratorSet;
using zq::Modulus;
using zq::Residue;

/// The cyclotomic character on generators, one unit of Z/q^2 each.
struct CharacterData {
  std::vector<Residue> values;

  /// chi(g) = 1 + q on the first generator and 1 elsewhere.
  static CharacterData standard(std::size_t rank, const Modulus& m);
  friend bool operator==(const CharacterData&, const CharacterData&) = default;
};

/// A one-relator pro-p presentation seen through F/F^3. The standard one is
/// <g, x0, ..., xn | x0^q [x0, g] [x1, x2] ... [x_{n-1}, x_n]>.
class DemushkinPresentation {
 public:
  /// Validates that the relator lies in F^2, the rank is even and at least 2,
  /// and chi is a unit congruent to 1 mod q on every generator.
  DemushkinPresentation(GeneratorSet gens, Modulus modulus, ClassTwoElement relator, CharacterData chi);

  /// rank - 2
  int n() const { return static_cast<int>(gens_.size()) - 2; }
  std::size_t rank() const { return gens_.size(); }
  const Modulus& modulus() const { return frame_.modulus; }
  const Frame& frame() const { return frame_; }
  const GeneratorSet& generators() const { return gens_; }
  const ClassTwoElement& relator() const { return relator_; }
  const CharacterData& chi() const { return chi_; }

 private:
  GeneratorSet gens_;
  Frame frame_;
  ClassTwoElement relator_;
  CharacterData chi_;
};

/// x0^q [x0, g] [x1, x2] ... over labels g, x0, ..., xn. Throws InputError for odd
/// or negative n.
DemushkinPresentation standard_presentation(int n, const Modulus& modulus);
/// The relator of standard_presentation in a given frame.
ClassTwoElement standard_relator(const Frame& frame);

struct CohomologyData {
  std::size_t h1_rank = 0;
  /// <u, v> on H^1 = Hom(F/F^2, Z/q); entry (i, j) is the exponent of [g_j, g_i]
  /// in the relator for i < j, antisymmetrized.
  zq::BilinearForm cup;
  /// B on the dual basis: gen_exp / q of the relator.
  zq::Vector bockstein;
  bool is_demushkin = false;          // cup form nondegenerate
  bool bockstein_surjective = false;  // some coordinate of B is a unit
};

/// Cup form and Bockstein read off a central relator. Throws InputError if the
/// relator does not lie in F^2.
CohomologyData invariants(const Frame& frame, const ClassTwoElement& relator);
CohomologyData invariants(const DemushkinPresentation& pres);

/// g_k -> i (chi(g_k) - 1) / q mod q.
zq::Vector delta_map(const DemushkinPresentation& pres, std::int64_t i);
/// Span of delta_map(pres, 1): the image of H^1 of the cyclotomic quotient.
zq::Submodule gamma_line(const DemushkinPresentation& pres);

}  // namespace demuskin::core
