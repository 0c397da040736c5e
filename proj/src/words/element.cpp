#include "demuskin/words/element.hpp"

#include <algorithm>

#include "demuskin/errors.hpp"

namespace demuskin::words {

GeneratorSet::GeneratorSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw InputError("generator labels must be non-empty");
    if (!seen.insert(l).second) throw InputError("duplicate generator label '" + l + "'");
  }
}

GeneratorSet GeneratorSet::standard(int n) {
  std::vector<std::string> labels{"g"};
  for (int i = 0; i <= n; ++i) labels.push_back("x" + std::to_string(i));
  return GeneratorSet(std::move(labels));
}

std::optional<std::size_t> GeneratorSet::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t Frame::pair_index(std::size_t i, std::size_t j) const {
  if (!(i < j && j < rank)) throw InputError("commutator coordinate needs i < j < rank");
  return i * rank - i * (i + 1) / 2 + (j - i - 1);
}

ClassTwoElement::ClassTwoElement(Frame frame)
    : frame_(frame), gen_(frame.rank, 0), comm_(frame.pair_count(), 0) {}

ClassTwoElement ClassTwoElement::generator(const Frame& frame, std::size_t i) {
  ClassTwoElement e(frame);
  e.set_gen_exp(i, 1);
  return e;
}

ClassTwoElement ClassTwoElement::from_central(const Frame& frame, const zq::Vector& coords) {
  if (coords.size() != frame.central_dimension()) throw InputError("central coordinate vector has wrong length");
  ClassTwoElement e(frame);
  for (std::size_t i = 0; i < frame.rank; ++i) e.set_gen_exp(i, frame.modulus.q * (coords[i] % frame.modulus.q));
  for (std::size_t k = 0; k < frame.pair_count(); ++k) e.comm_[k] = frame.modulus.ring_q().reduce(coords[frame.rank + k]);
  return e;
}

void ClassTwoElement::set_gen_exp(std::size_t i, std::int64_t v) {
  const std::int64_t m = frame_.modulus.q2;
  gen_.at(i) = ((v % m) + m) % m;
}

void ClassTwoElement::set_comm_exp(std::size_t i, std::size_t j, std::int64_t v) {
  const std::int64_t m = frame_.modulus.q;
  comm_.at(frame_.pair_index(i, j)) = ((v % m) + m) % m;
}

bool ClassTwoElement::is_identity() const {
  return std::all_of(gen_.begin(), gen_.end(), [](Residue x) { return x == 0; }) &&
         std::all_of(comm_.begin(), comm_.end(), [](Residue x) { return x == 0; });
}

bool ClassTwoElement::is_central() const {
  const std::int64_t q = frame_.modulus.q;
  return std::all_of(gen_.begin(), gen_.end(), [q](Residue x) { return x % q == 0; });
}

zq::Vector ClassTwoElement::central_coords() const {
  if (!is_central()) throw PreconditionError("element does not lie in F^2/F^3");
  zq::Vector out;
  out.reserve(frame_.central_dimension());
  for (Residue a : gen_) out.push_back(a / frame_.modulus.q);
  for (Residue c : comm_) out.push_back(c);
  return out;
}

namespace {

void require_same_frame(const ClassTwoElement& u, const ClassTwoElement& v) {
  if (!(u.frame() == v.frame())) throw InputError("elements belong to different generator sets or moduli");
}

// sum_{i<j} a_j b_i coordinates, i.e. the collection cost of moving b past a
void add_cross_terms(const ClassTwoElement& u, const ClassTwoElement& v, std::vector<Residue>& comm,
                     std::int64_t scale) {
  const Frame& f = u.frame();
  const std::int64_t q = f.modulus.q;
  std::size_t k = 0;
  for (std::size_t i = 0; i < f.rank; ++i)
    for (std::size_t j = i + 1; j < f.rank; ++j, ++k) {
      const std::int64_t term = ((u.gen_exp(j) % q) * (v.gen_exp(i) % q)) % q;
      comm[k] = (((comm[k] + scale % q * term) % q) + q) % q;
    }
}

// k(k-1)/2 mod m without overflow for |k| < 2^62
std::int64_t binom2_mod(std::int64_t k, std::int64_t m) {
  std::int64_t a = k, b = k - 1;
  if (a % 2 == 0)
    a /= 2;
  else
    b /= 2;
  a %= m;
  b %= m;
  return (((a * b) % m) + m) % m;
}

}  // namespace

ClassTwoElement multiply(const ClassTwoElement& u, const ClassTwoElement& v) {
  require_same_frame(u, v);
  const Frame& f = u.frame();
  ClassTwoElement out(f);
  std::vector<Residue> comm(f.pair_count());
  for (std::size_t k = 0; k < comm.size(); ++k) comm[k] = (u.comm_exps()[k] + v.comm_exps()[k]) % f.modulus.q;
  add_cross_terms(u, v, comm, 1);
  for (std::size_t i = 0; i < f.rank; ++i) out.set_gen_exp(i, u.gen_exp(i) + v.gen_exp(i));
  std::size_t k = 0;
  for (std::size_t i = 0; i < f.rank; ++i)
    for (std::size_t j = i + 1; j < f.rank; ++j, ++k) out.set_comm_exp(i, j, comm[k]);
  return out;
}

ClassTwoElement power(const ClassTwoElement& u, std::int64_t k) {
  // (a, c)^k = (k a, k c + C(k,2) sum_{i<j} a_j a_i)
  const Frame& f = u.frame();
  const std::int64_t q = f.modulus.q;
  ClassTwoElement out(f);
  for (std::size_t i = 0; i < f.rank; ++i) out.set_gen_exp(i, (k % f.modulus.q2) * u.gen_exp(i));
  const std::int64_t kq = ((k % q) + q) % q;
  const std::int64_t b2 = binom2_mod(k, q);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < f.rank; ++i)
    for (std::size_t j = i + 1; j < f.rank; ++j, ++idx) {
      const std::int64_t self = ((u.gen_exp(j) % q) * (u.gen_exp(i) % q)) % q;
      out.set_comm_exp(i, j, kq * u.comm_exps()[idx] + b2 * self);
    }
  return out;
}

ClassTwoElement inverse(const ClassTwoElement& u) { return power(u, -1); }

ClassTwoElement commutator(const ClassTwoElement& u, const ClassTwoElement& v) {
  return multiply(multiply(inverse(u), inverse(v)), multiply(u, v));
}

ClassTwoElement central_sqrt(const ClassTwoElement& c) {
  if (!c.is_central()) throw PreconditionError("central_sqrt: element does not lie in F^2/F^3");
  return power(c, (c.frame().modulus.q + 1) / 2);
}

ClassTwoElement quotient_kill(const std::set<std::size_t>& killed, const ClassTwoElement& u) {
  const Frame& f = u.frame();
  for (std::size_t k : killed)
    if (k >= f.rank) throw InputError("quotient_kill: generator index out of range");
  ClassTwoElement out(u);
  for (std::size_t k : killed) out.set_gen_exp(k, 0);
  for (std::size_t i = 0; i < f.rank; ++i)
    for (std::size_t j = i + 1; j < f.rank; ++j)
      if (killed.count(i) || killed.count(j)) out.set_comm_exp(i, j, 0);
  return out;
}

ClassTwoElement restrict_to(const std::vector<std::size_t>& kept, const ClassTwoElement& u) {
  const Frame& f = u.frame();
  std::set<std::size_t> killed;
  for (std::size_t i = 0; i < f.rank; ++i)
    if (std::find(kept.begin(), kept.end(), i) == kept.end()) killed.insert(i);
  if (!(quotient_kill(killed, u) == u)) throw PreconditionError("restrict_to: element involves dropped generators");
  if (!std::is_sorted(kept.begin(), kept.end())) throw InputError("restrict_to: kept indices must be increasing");
  ClassTwoElement out(Frame{kept.size(), f.modulus});
  for (std::size_t a = 0; a < kept.size(); ++a) {
    out.set_gen_exp(a, u.gen_exp(kept[a]));
    for (std::size_t b = a + 1; b < kept.size(); ++b) out.set_comm_exp(a, b, u.comm_exp(kept[a], kept[b]));
  }
  return out;
}

}  // namespace demuskin::words
