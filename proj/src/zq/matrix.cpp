#include "demuskin/zq/matrix.hpp"

#include <algorithm>
#include <numeric>

#include "demuskin/errors.hpp"

namespace demuskin::zq {

ZqMatrix::ZqMatrix(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

ZqMatrix::ZqMatrix(Ring ring, std::size_t rows, std::size_t cols, std::span<const std::int64_t> entries)
    : ZqMatrix(ring, rows, cols) {
  if (entries.size() != rows * cols) throw InputError("matrix entry count does not match its shape");
  for (std::size_t i = 0; i < entries.size(); ++i) data_[i] = ring_.reduce(entries[i]);
}

ZqMatrix ZqMatrix::identity(Ring ring, std::size_t n) {
  ZqMatrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

ZqMatrix ZqMatrix::from_rows(Ring ring, std::size_t cols, const std::vector<Vector>& rows) {
  ZqMatrix m(ring, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InputError("row length does not match column count");
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

ZqMatrix ZqMatrix::diagonal(Ring ring, std::span<const std::int64_t> diag) {
  ZqMatrix m(ring, diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
  return m;
}

Vector ZqMatrix::row(std::size_t i) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

std::vector<Vector> ZqMatrix::row_list() const {
  std::vector<Vector> out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
  return out;
}

ZqMatrix ZqMatrix::transpose() const {
  ZqMatrix t(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = (*this)(i, j);
  return t;
}

ZqMatrix ZqMatrix::operator*(const ZqMatrix& rhs) const {
  if (cols_ != rhs.rows_ || !(ring_ == rhs.ring_)) throw InputError("matrix product: shape or ring mismatch");
  ZqMatrix out(ring_, rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      Residue a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j)
        out.data_[i * rhs.cols_ + j] = ring_.add(out.data_[i * rhs.cols_ + j], ring_.mul(a, rhs(k, j)));
    }
  return out;
}

ZqMatrix ZqMatrix::operator+(const ZqMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_ || !(ring_ == rhs.ring_)) throw InputError("matrix sum: shape mismatch");
  ZqMatrix out(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = ring_.add(data_[i], rhs.data_[i]);
  return out;
}

ZqMatrix ZqMatrix::operator-(const ZqMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_ || !(ring_ == rhs.ring_))
    throw InputError("matrix difference: shape mismatch");
  ZqMatrix out(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = ring_.sub(data_[i], rhs.data_[i]);
  return out;
}

ZqMatrix ZqMatrix::scaled(Residue s) const {
  ZqMatrix out(*this);
  for (auto& x : out.data_) x = ring_.mul(x, s);
  return out;
}

ZqMatrix ZqMatrix::reduced_to(const Ring& target) const {
  ZqMatrix out(target, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = target.reduce(data_[i]);
  return out;
}

ZqMatrix ZqMatrix::select(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const {
  ZqMatrix out(ring_, row_idx.size(), col_idx.size());
  for (std::size_t i = 0; i < row_idx.size(); ++i)
    for (std::size_t j = 0; j < col_idx.size(); ++j) out.set(i, j, (*this)(row_idx[i], col_idx[j]));
  return out;
}

bool ZqMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Residue x) { return x == 0; });
}

Vector mul(const Vector& v, const ZqMatrix& m) {
  if (v.size() != m.rows()) throw InputError("vector-matrix product: length mismatch");
  const Ring& r = m.ring();
  Vector out(m.cols(), 0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    Residue a = r.reduce(v[k]);
    if (a == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] = r.add(out[j], r.mul(a, m(k, j)));
  }
  return out;
}

Residue dot(const Ring& ring, const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw InputError("dot product: length mismatch");
  Residue acc = 0;
  for (std::size_t i = 0; i < u.size(); ++i) acc = ring.add(acc, ring.mul(ring.reduce(u[i]), ring.reduce(v[i])));
  return acc;
}

namespace {

struct Gcdex {
  std::int64_t g, s, t;
};

// g = s*a + t*b over the integers, a, b >= 0 not both zero
Gcdex xgcd(std::int64_t a, std::int64_t b) {
  std::int64_t r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1;
    s1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  return {r0, s0, t0};
}

using Rows = std::vector<Vector>;

void axpy(const Ring& r, Vector& y, Residue a, const Vector& x) {
  if (a == 0) return;
  for (std::size_t j = 0; j < y.size(); ++j) y[j] = r.add(y[j], r.mul(a, x[j]));
}

}  // namespace

ZqMatrix howell_form(const ZqMatrix& m) {
  const Ring& ring = m.ring();
  const std::int64_t n = ring.modulus();
  const std::size_t cols = m.cols();
  Rows rows = m.row_list();

  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      const std::int64_t a = rows[r][c], b = rows[i][c];
      if (b == 0) continue;
      auto [g, s, t] = xgcd(a, b);
      const std::int64_t u = -b / g, v = a / g;
      Vector top(cols), bottom(cols);
      for (std::size_t j = 0; j < cols; ++j) {
        top[j] = ring.reduce(ring.mul(ring.reduce(s), rows[r][j]) + ring.mul(ring.reduce(t), rows[i][j]));
        bottom[j] = ring.reduce(ring.mul(ring.reduce(u), rows[r][j]) + ring.mul(ring.reduce(v), rows[i][j]));
      }
      rows[r] = std::move(top);
      rows[i] = std::move(bottom);
    }
    if (rows[r][c] == 0) continue;

    // normalise the pivot to the divisor p^v of n
    const std::int64_t a = rows[r][c];
    const std::int64_t g = std::gcd(a, n);
    const Residue unit = ring.inverse((a / g) % n);
    for (auto& x : rows[r]) x = ring.mul(x, unit);

    for (std::size_t i = 0; i < r; ++i) {
      const std::int64_t quo = rows[i][c] / g;
      axpy(ring, rows[i], ring.neg(quo), rows[r]);
    }
    if (g != 1) {
      Vector ann = rows[r];
      for (auto& x : ann) x = ring.mul(x, n / g);
      if (std::any_of(ann.begin(), ann.end(), [](Residue x) { return x != 0; })) rows.push_back(std::move(ann));
    }
    ++r;
  }
  rows.resize(std::min(r, rows.size()));
  return ZqMatrix::from_rows(ring, cols, rows);
}

Reduction reduce_by_howell(const ZqMatrix& howell, const Vector& v) {
  const Ring& ring = howell.ring();
  Reduction out{Vector(v.size()), Vector(howell.rows(), 0)};
  for (std::size_t j = 0; j < v.size(); ++j) out.residual[j] = ring.reduce(v[j]);
  for (std::size_t i = 0; i < howell.rows(); ++i) {
    std::size_t c = 0;
    while (c < howell.cols() && howell(i, c) == 0) ++c;
    if (c == howell.cols()) continue;
    const Residue pivot = howell(i, c);
    const Residue x = out.residual[c];
    if (x % pivot != 0) continue;
    const Residue f = x / pivot;
    out.coefficients[i] = f;
    for (std::size_t j = 0; j < v.size(); ++j) out.residual[j] = ring.sub(out.residual[j], ring.mul(f, howell(i, j)));
  }
  return out;
}

std::optional<Vector> solve_left(const ZqMatrix& a, const Vector& b) {
  const Ring& ring = a.ring();
  if (b.size() != a.cols()) throw InputError("solve_left: right-hand side has wrong length");
  // Howell form of [a | I] tracks the transformation in the right block.
  ZqMatrix aug(ring, a.rows(), a.cols() + a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug.set(i, j, a(i, j));
    aug.set(i, a.cols() + i, 1);
  }
  const ZqMatrix h = howell_form(aug);
  Vector residual(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) residual[j] = ring.reduce(b[j]);
  Vector x(a.rows(), 0);
  for (std::size_t i = 0; i < h.rows(); ++i) {
    std::size_t c = 0;
    while (c < a.cols() && h(i, c) == 0) ++c;
    if (c == a.cols()) break;  // remaining rows live in the kernel block
    const Residue pivot = h(i, c);
    if (residual[c] % pivot != 0) return std::nullopt;
    const Residue f = residual[c] / pivot;
    for (std::size_t j = 0; j < a.cols(); ++j) residual[j] = ring.sub(residual[j], ring.mul(f, h(i, j)));
    for (std::size_t j = 0; j < a.rows(); ++j) x[j] = ring.add(x[j], ring.mul(f, h(i, a.cols() + j)));
  }
  if (std::any_of(residual.begin(), residual.end(), [](Residue r) { return r != 0; })) return std::nullopt;
  return x;
}

std::optional<ZqMatrix> inverse(const ZqMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  ZqMatrix aug(m.ring(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.set(i, j, m(i, j));
    aug.set(i, n + i, 1);
  }
  const ZqMatrix h = howell_form(aug);
  if (h.rows() < n) return std::nullopt;
  ZqMatrix inv(m.ring(), n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (h(i, j) != (i == j ? 1 : 0)) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) inv.set(i, j, h(i, n + j));
  }
  return inv;
}

bool is_invertible(const ZqMatrix& m) { return m.rows() == m.cols() && inverse(m).has_value(); }

}  // namespace demuskin::zq
