#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "demuskin/zq/ring.hpp"

namespace demuskin::zq {

using Vector = std::vector<Residue>;

/// Dense row-major matrix over Z/p^k. Entries are always canonical residues.
class ZqMatrix {
 public:
  ZqMatrix(Ring ring, std::size_t rows, std::size_t cols);
  ZqMatrix(Ring ring, std::size_t rows, std::size_t cols, std::span<const std::int64_t> entries);

  static ZqMatrix identity(Ring ring, std::size_t n);
  static ZqMatrix from_rows(Ring ring, std::size_t cols, const std::vector<Vector>& rows);
  static ZqMatrix diagonal(Ring ring, std::span<const std::int64_t> diag);

  const Ring& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Residue operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, std::int64_t v) { data_[i * cols_ + j] = ring_.reduce(v); }

  Vector row(std::size_t i) const;
  std::vector<Vector> row_list() const;
  const std::vector<Residue>& entries() const { return data_; }

  ZqMatrix transpose() const;
  ZqMatrix operator*(const ZqMatrix& rhs) const;
  ZqMatrix operator+(const ZqMatrix& rhs) const;
  ZqMatrix operator-(const ZqMatrix& rhs) const;
  ZqMatrix scaled(Residue s) const;
  /// Same integer entries reduced into another ring (e.g. Z/q^2 -> Z/q).
  ZqMatrix reduced_to(const Ring& target) const;
  /// Submatrix on selected rows and columns.
  ZqMatrix select(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const;

  bool is_zero() const;

  friend bool operator==(const ZqMatrix&, const ZqMatrix&) = default;

 private:
  Ring ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> data_;
};

/// row vector times matrix
Vector mul(const Vector& v, const ZqMatrix& m);
/// u . v
Residue dot(const Ring& ring, const Vector& u, const Vector& v);

/// Howell canonical form: echelon with prime-power pivots, entries above a
/// pivot reduced below it, zero rows dropped, and the Howell property
/// (every span vector vanishing on the first j columns is spanned by the rows
/// with pivot column >= j). Two matrices have the same row span iff their
/// Howell forms are identical. Pivot order is left to right.
ZqMatrix howell_form(const ZqMatrix& m);

/// Reduces v against a matrix already in Howell form. Returns the residual and
/// the coefficients used; v lies in the row span iff the residual is zero.
struct Reduction {
  Vector residual;
  Vector coefficients;
};
Reduction reduce_by_howell(const ZqMatrix& howell, const Vector& v);

/// Finds x with x * a = b, or nothing when b is outside the row span of a.
std::optional<Vector> solve_left(const ZqMatrix& a, const Vector& b);

/// Matrix inverse over the ring; empty when the matrix is singular.
std::optional<ZqMatrix> inverse(const ZqMatrix& m);

bool is_invertible(const ZqMatrix& m);

}  // namespace demuskin::zq
