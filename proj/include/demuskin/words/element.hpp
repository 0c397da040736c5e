#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "demuskin/zq/matrix.hpp"
#include "demuskin/zq/ring.hpp"

namespace demuskin::words {

using zq::Residue;

/// Ordered generator labels. Index 0 is conventionally gamma ("g"), then x0 ... xn.
class GeneratorSet {
 public:
  explicit GeneratorSet(std::vector<std::string> labels);
  /// g, x0, x1, ..., xn
  static GeneratorSet standard(int n);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> index_of(const std::string& label) const;

  friend bool operator==(const GeneratorSet&, const GeneratorSet&) = default;

 private:
  std::vector<std::string> labels_;
};

/// Rank and modulus of a class-2 truncation F/F^3 of the free pro-p group
/// for the q-central series.
struct Frame {
  std::size_t rank = 0;
  zq::Modulus modulus;

  std::size_t pair_count() const { return rank * (rank - (rank > 0 ? 1 : 0)) / 2; }
  /// Dimension over Z/q of F^2/F^3: rank + rank(rank-1)/2.
  std::size_t central_dimension() const { return rank + pair_count(); }
  std::size_t pair_index(std::size_t i, std::size_t j) const;  // i < j

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// Normal form g_1^{a_1} ... g_d^{a_d} * prod_{i<j} [g_j, g_i]^{c_ij} of an
/// element of F/F^3, with a_i mod q^2 and c_ij mod q. Commutator convention:
/// [x, y] = x^-1 y^-1 x y, so g_j g_i = g_i g_j [g_j, g_i].
class ClassTwoElement {
 public:
  /// Identity element.
  explicit ClassTwoElement(Frame frame);
  static ClassTwoElement generator(const Frame& frame, std::size_t i);
  /// Central element of F^2/F^3 from coordinates (gen_exp / q, comm_exp) over Z/q.
  static ClassTwoElement from_central(const Frame& frame, const zq::Vector& coords);

  const Frame& frame() const { return frame_; }
  std::size_t rank() const { return frame_.rank; }

  Residue gen_exp(std::size_t i) const { return gen_.at(i); }
  /// exponent of [g_j, g_i], i < j
  Residue comm_exp(std::size_t i, std::size_t j) const { return comm_.at(frame_.pair_index(i, j)); }
  const std::vector<Residue>& gen_exps() const { return gen_; }
  const std::vector<Residue>& comm_exps() const { return comm_; }

  void set_gen_exp(std::size_t i, std::int64_t v);
  void set_comm_exp(std::size_t i, std::size_t j, std::int64_t v);

  bool is_identity() const;
  /// gen_exp = 0 mod q, i.e. the element lies in F^2/F^3 (and is central).
  bool is_central() const;
  /// Coordinates of a central element over Z/q. Throws PreconditionError otherwise.
  zq::Vector central_coords() const;

  friend bool operator==(const ClassTwoElement&, const ClassTwoElement&) = default;

 private:
  Frame frame_;
  std::vector<Residue> gen_;   // mod q^2
  std::vector<Residue> comm_;  // mod q, upper triangle row-major
};

ClassTwoElement multiply(const ClassTwoElement& u, const ClassTwoElement& v);
ClassTwoElement inverse(const ClassTwoElement& u);
ClassTwoElement power(const ClassTwoElement& u, std::int64_t k);
/// [u, v] = u^-1 v^-1 u v
ClassTwoElement commutator(const ClassTwoElement& u, const ClassTwoElement& v);
/// The unique s in F^2/F^3 with s^2 = c (power by (q+1)/2).
ClassTwoElement central_sqrt(const ClassTwoElement& c);

inline ClassTwoElement operator*(const ClassTwoElement& u, const ClassTwoElement& v) { return multiply(u, v); }

/// Image after substituting the identity for the generators in `killed`.
/// The result stays in the same frame (killed coordinates are zero), which is
/// the retraction of F onto the free factor on the surviving generators.
ClassTwoElement quotient_kill(const std::set<std::size_t>& killed, const ClassTwoElement& u);

/// Re-expresses an element supported on `kept` in the frame of rank |kept|.
ClassTwoElement restrict_to(const std::vector<std::size_t>& kept, const ClassTwoElement& u);

}  // namespace demuskin::words
