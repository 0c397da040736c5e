#include "demuskin/core/presentation.hpp"

#include <algorithm>

#include "demuskin/errors.hpp"

namespace demuskin::core {

CharacterData CharacterData::standard(std::size_t rank, const Modulus& m) {
  CharacterData chi;
  chi.values.assign(rank, 1);
  if (rank > 0) chi.values[0] = 1 + m.q;
  return chi;
}

DemushkinPresentation::DemushkinPresentation(GeneratorSet gens, Modulus modulus, ClassTwoElement relator,
                                             CharacterData chi)
    : gens_(std::move(gens)),
      frame_{gens_.size(), modulus},
      relator_(std::move(relator)),
      chi_(std::move(chi)) {
  if (gens_.size() < 2 || gens_.size() % 2 != 0)
    throw InputError("presentation needs an even number of generators, at least 2 (got " +
                     std::to_string(gens_.size()) + ")");
  if (!(relator_.frame() == frame_)) throw InputError("relator does not live on the presentation's generators");
  if (!relator_.is_central()) throw InputError("relator does not lie in F^2");
  if (chi_.values.size() != gens_.size()) throw InputError("character needs one value per generator");
  const zq::Ring r2 = modulus.ring_q2();
  for (auto& v : chi_.values) {
    v = r2.reduce(v);
    if (!r2.is_unit(v)) throw InputError("character value " + std::to_string(v) + " is not a unit mod q^2");
    if ((v - 1) % modulus.q != 0)
      throw InputError("character value " + std::to_string(v) + " is not congruent to 1 mod q");
  }
}

ClassTwoElement standard_relator(const Frame& frame) {
  if (frame.rank < 2 || frame.rank % 2 != 0) throw InputError("standard relator needs an even rank >= 2");
  auto gen = [&frame](std::size_t i) { return ClassTwoElement::generator(frame, i); };
  ClassTwoElement w = power(gen(1), frame.modulus.q) * words::commutator(gen(1), gen(0));
  for (std::size_t k = 2; k + 1 < frame.rank; k += 2) w = w * words::commutator(gen(k), gen(k + 1));
  return w;
}

DemushkinPresentation standard_presentation(int n, const Modulus& modulus) {
  if (n < 0 || n % 2 != 0) throw InputError("n must be even and nonnegative (got " + std::to_string(n) + ")");
  GeneratorSet gens = GeneratorSet::standard(n);
  const Frame frame{gens.size(), modulus};
  return DemushkinPresentation(gens, modulus, standard_relator(frame), CharacterData::standard(gens.size(), modulus));
}

CohomologyData invariants(const Frame& frame, const ClassTwoElement& relator) {
  if (!relator.is_central()) throw InputError("invariants: relator does not lie in F^2");
  const zq::Ring rq = frame.modulus.ring_q();
  const std::size_t d = frame.rank;
  zq::ZqMatrix gram(rq, d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      gram.set(i, j, relator.comm_exp(i, j));
      gram.set(j, i, rq.neg(relator.comm_exp(i, j)));
    }
  zq::Vector b(d);
  for (std::size_t i = 0; i < d; ++i) b[i] = relator.gen_exp(i) / frame.modulus.q;
  CohomologyData out{d, zq::BilinearForm(gram), b, false, false};
  out.is_demushkin = out.cup.is_nondegenerate();
  out.bockstein_surjective = std::any_of(b.begin(), b.end(), [&rq](Residue x) { return rq.is_unit(x); });
  return out;
}

CohomologyData invariants(const DemushkinPresentation& pres) { return invariants(pres.frame(), pres.relator()); }

zq::Vector delta_map(const DemushkinPresentation& pres, std::int64_t i) {
  const zq::Ring rq = pres.modulus().ring_q();
  zq::Vector out(pres.rank());
  for (std::size_t k = 0; k < pres.rank(); ++k) out[k] = rq.mul(rq.reduce(i), (pres.chi().values[k] - 1) / pres.modulus().q);
  return out;
}

zq::Submodule gamma_line(const DemushkinPresentation& pres) {
  return zq::Submodule::span(pres.modulus().ring_q(), pres.rank(), {delta_map(pres, 1)});
}

}  // namespace demuskin::core
