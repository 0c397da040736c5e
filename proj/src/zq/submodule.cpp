#include "demuskin/zq/submodule.hpp"

#include <algorithm>

#include "demuskin/errors.hpp"

namespace demuskin::zq {

Submodule::Submodule(Ring ring, std::size_t ambient_rank) : basis_(ring, 0, ambient_rank) {}

Submodule::Submodule(const ZqMatrix& generators) : basis_(howell_form(generators)) {}

Submodule Submodule::span(Ring ring, std::size_t ambient_rank, const std::vector<Vector>& generators) {
  return Submodule(ZqMatrix::from_rows(ring, ambient_rank, generators));
}

Submodule Submodule::full(Ring ring, std::size_t ambient_rank) {
  return Submodule(ZqMatrix::identity(ring, ambient_rank));
}

int Submodule::log_order() const {
  int total = 0;
  for (std::size_t i = 0; i < basis_.rows(); ++i)
    for (std::size_t j = 0; j < basis_.cols(); ++j)
      if (basis_(i, j) != 0) {
        total += ring().exponent() - ring().valuation(basis_(i, j));
        break;
      }
  return total;
}

namespace {

// Gaussian elimination that only ever pivots on units, columns taken left to
// right. Returns the pivot rows; `leftover` reports whether non-unimodular
// material remains once every unit pivot is used.
std::vector<Vector> unit_pivot_rows(const ZqMatrix& basis, bool& leftover) {
  const Ring& r = basis.ring();
  std::vector<Vector> rows = basis.row_list();
  std::vector<Vector> pivots;
  for (std::size_t c = 0; c < basis.cols(); ++c) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const Vector& v) { return r.is_unit(v[c]); });
    if (it == rows.end()) continue;
    Vector piv = *it;
    rows.erase(it);
    const Residue inv = r.inverse(piv[c]);
    for (auto& x : piv) x = r.mul(x, inv);
    for (auto& v : rows) {
      const Residue f = v[c];
      if (f == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = r.sub(v[j], r.mul(f, piv[j]));
    }
    pivots.push_back(std::move(piv));
  }
  leftover = std::any_of(rows.begin(), rows.end(), [](const Vector& v) {
    return std::any_of(v.begin(), v.end(), [](Residue x) { return x != 0; });
  });
  return pivots;
}

}  // namespace

std::size_t Submodule::rank() const {
  bool leftover = false;
  return unit_pivot_rows(basis_, leftover).size();
}

bool Submodule::is_free() const {
  bool leftover = false;
  unit_pivot_rows(basis_, leftover);
  return !leftover;
}

std::optional<ZqMatrix> Submodule::free_basis() const {
  bool leftover = false;
  auto rows = unit_pivot_rows(basis_, leftover);
  if (leftover) return std::nullopt;
  return ZqMatrix::from_rows(ring(), ambient_rank(), rows);
}

bool Submodule::contains(const Vector& v) const {
  if (v.size() != ambient_rank()) throw InputError("membership test: vector has wrong length");
  const auto red = reduce_by_howell(basis_, v);
  return std::all_of(red.residual.begin(), red.residual.end(), [](Residue r) { return r == 0; });
}

bool Submodule::contains(const Submodule& other) const {
  if (other.ambient_rank() != ambient_rank()) throw InputError("containment test: ambient rank mismatch");
  for (std::size_t i = 0; i < other.rank(); ++i)
    if (!contains(other.basis_.row(i))) return false;
  return true;
}

Submodule Submodule::operator+(const Submodule& other) const {
  if (other.ambient_rank() != ambient_rank()) throw InputError("submodule sum: ambient rank mismatch");
  auto rows = basis_rows();
  for (auto& r : other.basis_rows()) rows.push_back(r);
  return span(ring(), ambient_rank(), rows);
}

Submodule kernel(const ZqMatrix& m) {
  const Ring& ring = m.ring();
  const std::size_t n = m.cols(), k = m.rows();
  if (k == 0) return Submodule::full(ring, n);
  // Howell form of [m^T | I]; rows with a zero left block span the kernel.
  ZqMatrix aug(ring, n, k + n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) aug.set(i, j, m(j, i));
    aug.set(i, k + i, 1);
  }
  const ZqMatrix h = howell_form(aug);
  std::vector<Vector> gens;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    bool left_zero = true;
    for (std::size_t j = 0; j < k && left_zero; ++j) left_zero = h(i, j) == 0;
    if (!left_zero) continue;
    Vector v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = h(i, k + j);
    gens.push_back(std::move(v));
  }
  return Submodule::span(ring, n, gens);
}

Submodule intersection(const Submodule& a, const Submodule& b) {
  if (a.ambient_rank() != b.ambient_rank() || !(a.ring() == b.ring()))
    throw InputError("intersection: submodules live in different modules");
  const std::size_t k = a.basis().rows(), l = b.basis().rows(), d = a.ambient_rank();
  if (k == 0 || l == 0) return Submodule(a.ring(), d);
  // z (a; b) = 0 with z = (x, y) gives x a = -y b in both
  ZqMatrix stacked(a.ring(), k + l, d);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < d; ++j) stacked.set(i, j, a.basis()(i, j));
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < d; ++j) stacked.set(k + i, j, b.basis()(i, j));
  std::vector<Vector> rows;
  for (const Vector& z : kernel(stacked.transpose()).basis_rows()) {
    const Vector x(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(k));
    rows.push_back(mul(x, a.basis()));
  }
  return Submodule::span(a.ring(), d, rows);
}

BilinearForm::BilinearForm(ZqMatrix gram) : gram_(std::move(gram)), symmetry_(Symmetry::None) {
  if (gram_.rows() != gram_.cols()) throw InputError("gram matrix must be square");
  const ZqMatrix t = gram_.transpose();
  bool zero_diag = true;
  for (std::size_t i = 0; i < gram_.rows(); ++i) zero_diag = zero_diag && gram_(i, i) == 0;
  if (t == gram_.scaled(gram_.ring().neg(1)) && zero_diag)
    symmetry_ = Symmetry::Antisymmetric;
  else if (t == gram_)
    symmetry_ = Symmetry::Symmetric;
}

Residue BilinearForm::pair(const Vector& u, const Vector& v) const { return dot(ring(), mul(u, gram_), v); }

bool BilinearForm::is_nondegenerate() const { return is_invertible(gram_); }

Submodule orthogonal_complement(const BilinearForm& form, const Submodule& s) {
  if (form.dimension() != s.ambient_rank() || !(form.ring() == s.ring()))
    throw InputError("orthogonal complement: form and submodule do not share an ambient module");
  // <v, w> = v . (G w^T): kernel of the matrix whose rows are w G^T
  return kernel(s.basis() * form.gram().transpose());
}

bool is_totally_isotropic(const BilinearForm& form, const Submodule& s) {
  if (form.dimension() != s.ambient_rank()) throw InputError("isotropy test: dimension mismatch");
  const auto rows = s.basis_rows();
  for (const auto& u : rows)
    for (const auto& v : rows)
      if (form.pair(u, v) != 0) return false;
  return true;
}

EigenSplit eigen_split_rows(const ZqMatrix& action) {
  const Ring& ring = action.ring();
  if (action.rows() != action.cols()) throw InputError("eigen_split: action must be square");
  const ZqMatrix id = ZqMatrix::identity(ring, action.rows());
  if (!(action * action == id)) throw PreconditionError("eigen_split: action is not an involution");
  const Residue half = ring.inverse(2);
  ZqMatrix plus = (id + action).scaled(half);
  ZqMatrix minus = (id - action).scaled(half);
  return {Submodule(plus), Submodule(minus), std::move(plus), std::move(minus)};
}

EigenSplit eigen_split(const ZqMatrix& action) {
  // A v^T = v^T  <=>  v A^T = v
  EigenSplit split = eigen_split_rows(action.transpose());
  split.projector_plus = split.projector_plus.transpose();
  split.projector_minus = split.projector_minus.transpose();
  return split;
}

}  // namespace demuskin::zq
