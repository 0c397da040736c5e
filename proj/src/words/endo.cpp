#include "demuskin/words/endo.hpp"

#include "demuskin/errors.hpp"

namespace demuskin::words {

ClassTwoEndo::ClassTwoEndo(Frame frame, std::vector<ClassTwoElement> images)
    : frame_(frame), images_(std::move(images)) {
  if (images_.size() != frame_.rank) throw InputError("endomorphism needs one image per generator");
  for (const auto& im : images_)
    if (!(im.frame() == frame_)) throw InputError("endomorphism image lives in another frame");
}

ClassTwoEndo ClassTwoEndo::identity(const Frame& frame) {
  std::vector<ClassTwoElement> images;
  for (std::size_t k = 0; k < frame.rank; ++k) images.push_back(ClassTwoElement::generator(frame, k));
  return ClassTwoEndo(frame, std::move(images));
}

ClassTwoEndo ClassTwoEndo::from_linear(const Frame& frame, const zq::ZqMatrix& rows) {
  if (rows.rows() != frame.rank || rows.cols() != frame.rank) throw InputError("substitution matrix has wrong shape");
  std::vector<ClassTwoElement> images;
  for (std::size_t k = 0; k < frame.rank; ++k) {
    ClassTwoElement im(frame);
    for (std::size_t l = 0; l < frame.rank; ++l) im = im * power(ClassTwoElement::generator(frame, l), rows(k, l));
    images.push_back(std::move(im));
  }
  return ClassTwoEndo(frame, std::move(images));
}

zq::ZqMatrix ClassTwoEndo::linear_part() const { return linear_part_q2().reduced_to(frame_.modulus.ring_q()); }

zq::ZqMatrix ClassTwoEndo::linear_part_q2() const {
  zq::ZqMatrix m(frame_.modulus.ring_q2(), frame_.rank, frame_.rank);
  for (std::size_t k = 0; k < frame_.rank; ++k)
    for (std::size_t l = 0; l < frame_.rank; ++l) m.set(k, l, images_[k].gen_exp(l));
  return m;
}

bool ClassTwoEndo::is_automorphism() const { return zq::is_invertible(linear_part()); }

ClassTwoElement apply_endo(const ClassTwoEndo& e, const ClassTwoElement& u) {
  const Frame& f = e.frame();
  if (!(u.frame() == f)) throw InputError("apply_endo: element lives in another frame");
  ClassTwoElement out(f);
  for (std::size_t k = 0; k < f.rank; ++k)
    if (u.gen_exp(k) != 0) out = out * power(e.image(k), u.gen_exp(k));
  for (std::size_t i = 0; i < f.rank; ++i)
    for (std::size_t j = i + 1; j < f.rank; ++j)
      if (u.comm_exp(i, j) != 0) out = out * power(commutator(e.image(j), e.image(i)), u.comm_exp(i, j));
  return out;
}

ClassTwoEndo compose(const ClassTwoEndo& outer, const ClassTwoEndo& inner) {
  if (!(outer.frame() == inner.frame())) throw InputError("compose: frame mismatch");
  std::vector<ClassTwoElement> images;
  for (const auto& im : inner.images()) images.push_back(apply_endo(outer, im));
  return ClassTwoEndo(inner.frame(), std::move(images));
}

ClassTwoEndo endo_power(const ClassTwoEndo& e, std::uint64_t k) {
  ClassTwoEndo acc = ClassTwoEndo::identity(e.frame()), base = e;
  while (k > 0) {
    if (k & 1) acc = compose(base, acc);
    base = compose(base, base);
    k >>= 1;
  }
  return acc;
}

ClassTwoEndo invert_auto(const ClassTwoEndo& e) {
  const Frame& f = e.frame();
  auto inv_lin = zq::inverse(e.linear_part_q2());
  if (!inv_lin) throw PreconditionError("invert_auto: linear part is not invertible mod q");
  // psi0 inverts e mod F^2; e o psi0 = theta is the identity mod F^2 and fixes F^2/F^3,
  // so theta^{-1}: g -> g z^{-1} where theta(g) = g z.
  const ClassTwoEndo psi0 = ClassTwoEndo::from_linear(f, *inv_lin);
  const ClassTwoEndo theta = compose(e, psi0);
  std::vector<ClassTwoElement> theta_inv;
  for (std::size_t k = 0; k < f.rank; ++k) {
    const ClassTwoElement g = ClassTwoElement::generator(f, k);
    const ClassTwoElement z = inverse(g) * theta.image(k);
    if (!z.is_central()) throw Error("invert_auto: correction term is not central");
    theta_inv.push_back(g * inverse(z));
  }
  return compose(psi0, ClassTwoEndo(f, std::move(theta_inv)));
}

std::uint64_t endo_order(const ClassTwoEndo& e, std::uint64_t bound) {
  const ClassTwoEndo id = ClassTwoEndo::identity(e.frame());
  ClassTwoEndo cur = e;
  for (std::uint64_t k = 1; k <= bound; ++k) {
    if (cur == id) return k;
    cur = compose(e, cur);
  }
  return 0;
}

NormalSubgroup::NormalSubgroup(Frame frame, std::vector<ClassTwoElement> generators)
    : frame_(frame),
      generators_(std::move(generators)),
      gen_matrix_(frame.modulus.ring_q2(), generators_.size(), frame.rank),
      central_(frame.modulus.ring_q(), frame.central_dimension()),
      abelian_image_(frame.modulus.ring_q(), frame.rank) {
  const zq::Ring rq = frame_.modulus.ring_q();
  for (std::size_t k = 0; k < generators_.size(); ++k) {
    if (!(generators_[k].frame() == frame_)) throw InputError("normal subgroup generator lives in another frame");
    for (std::size_t l = 0; l < frame_.rank; ++l) gen_matrix_.set(k, l, generators_[k].gen_exp(l));
  }
  abelian_image_ = zq::Submodule(gen_matrix_.reduced_to(rq));

  std::vector<zq::Vector> central_gens;
  for (const auto& r : generators_)
    for (std::size_t l = 0; l < frame_.rank; ++l)
      central_gens.push_back(commutator(r, ClassTwoElement::generator(frame_, l)).central_coords());
  // relations e with sum e_k a_k = 0 mod q^2 give central elements prod r_k^{e_k}
  if (!generators_.empty()) {
    const zq::Submodule relations = zq::kernel(gen_matrix_.transpose());
    for (const auto& e : relations.basis_rows()) central_gens.push_back(word_for(e).central_coords());
  }
  central_ = zq::Submodule::span(rq, frame_.central_dimension(), central_gens);
}

ClassTwoElement NormalSubgroup::word_for(const zq::Vector& exponents) const {
  ClassTwoElement w(frame_);
  for (std::size_t k = 0; k < generators_.size(); ++k) w = w * power(generators_[k], exponents[k]);
  return w;
}

bool NormalSubgroup::contains(const ClassTwoElement& x) const {
  if (!(x.frame() == frame_)) throw InputError("membership test: element lives in another frame");
  if (generators_.empty()) return x.is_identity();
  const auto e = zq::solve_left(gen_matrix_, x.gen_exps());
  if (!e) return false;
  const ClassTwoElement y = x * inverse(word_for(*e));
  return central_.contains(y.central_coords());
}

bool NormalSubgroup::contains(const NormalSubgroup& other) const {
  for (const auto& g : other.generators())
    if (!contains(g)) return false;
  return true;
}

TruncatedQuotient::TruncatedQuotient(GeneratorSet gens, Frame frame, std::vector<ClassTwoElement> central_relators)
    : gens_(std::move(gens)), subgroup_(frame, std::move(central_relators)) {
  if (gens_.size() != frame.rank) throw InputError("generator set does not match frame rank");
  for (const auto& r : subgroup_.generators())
    if (!r.is_central()) throw InputError("truncated quotient relator does not lie in F^2");
}

bool quotient_equal(const TruncatedQuotient& tq, const ClassTwoElement& u, const ClassTwoElement& v) {
  return tq.relation_subgroup().contains(u * inverse(v));
}

}  // namespace demuskin::words
