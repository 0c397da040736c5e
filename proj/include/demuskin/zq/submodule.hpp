#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "demuskin/zq/matrix.hpp"

namespace demuskin::zq {

/// A submodule of (Z/p^k)^d, stored by its Howell basis so that two
/// submodules are equal iff their bases are identical.
class Submodule {
 public:
  /// The zero submodule.
  Submodule(Ring ring, std::size_t ambient_rank);
  /// Span of the rows of `generators`.
  explicit Submodule(const ZqMatrix& generators);
  static Submodule span(Ring ring, std::size_t ambient_rank, const std::vector<Vector>& generators);
  static Submodule full(Ring ring, std::size_t ambient_rank);

  const Ring& ring() const { return basis_.ring(); }
  std::size_t ambient_rank() const { return basis_.cols(); }
  const ZqMatrix& basis() const { return basis_; }
  std::vector<Vector> basis_rows() const { return basis_.row_list(); }

  /// Dimension of the image mod p. Equals the Z/p^k-rank when the submodule is free.
  std::size_t rank() const;
  std::size_t howell_rows() const { return basis_.rows(); }
  /// log_p of the cardinality.
  int log_order() const;
  bool is_zero() const { return basis_.rows() == 0; }
  /// Free submodules of (Z/p^k)^d are exactly the direct summands.
  bool is_free() const;
  /// A basis of unimodular rows when free.
  std::optional<ZqMatrix> free_basis() const;

  bool contains(const Vector& v) const;
  bool contains(const Submodule& other) const;

  Submodule operator+(const Submodule& other) const;

  friend bool operator==(const Submodule&, const Submodule&) = default;

 private:
  ZqMatrix basis_;
};

/// {v : v * m^T = 0}, i.e. vectors orthogonal (for the dot product) to every row of m.
Submodule kernel(const ZqMatrix& m);

Submodule intersection(const Submodule& a, const Submodule& b);

enum class Symmetry { Antisymmetric, Symmetric, None };

/// A bilinear form <u, v> = u * gram * v^T.
class BilinearForm {
 public:
  explicit BilinearForm(ZqMatrix gram);

  const ZqMatrix& gram() const { return gram_; }
  const Ring& ring() const { return gram_.ring(); }
  std::size_t dimension() const { return gram_.rows(); }
  Symmetry symmetry() const { return symmetry_; }

  Residue pair(const Vector& u, const Vector& v) const;
  /// Determinant is a unit, i.e. the gram matrix is invertible.
  bool is_nondegenerate() const;

 private:
  ZqMatrix gram_;
  Symmetry symmetry_;
};

/// {v : <v, w> = 0 for all w in s}
Submodule orthogonal_complement(const BilinearForm& form, const Submodule& s);

bool is_totally_isotropic(const BilinearForm& form, const Submodule& s);

/// Eigen-decomposition of an involution acting on column vectors.
struct EigenSplit {
  Submodule plus;
  Submodule minus;
  ZqMatrix projector_plus;   // (1 + A) / 2
  ZqMatrix projector_minus;  // (1 - A) / 2
};

/// Splits (Z/q)^d into the +1 and -1 eigenspaces of `action` (an involution
/// acting on column vectors); the returned submodules hold row vectors v with
/// action * v^T = +-v^T. Throws PreconditionError if action^2 != 1.
EigenSplit eigen_split(const ZqMatrix& action);

/// Same split for an involution acting on row vectors (v -> v * action).
EigenSplit eigen_split_rows(const ZqMatrix& action);

}  // namespace demuskin::zq
