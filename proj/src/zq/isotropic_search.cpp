#include "demuskin/zq/isotropic_search.hpp"

#include <algorithm>
#include <array>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "demuskin/errors.hpp"

namespace demuskin::zq {
namespace {

using Row = std::array<Residue, kOracleMaxDimension>;

struct SearchSpace {
  std::size_t d;
  std::int64_t n;
  Ring ring;
  std::array<std::array<Residue, kOracleMaxDimension>, kOracleMaxDimension> gram{};
  std::vector<std::uint8_t> member;  // indexed by base-n encoding of a vector

  std::size_t encode(const Row& v) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < d; ++j) idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(v[j]);
    return idx;
  }

  Residue pair(const Row& u, const Row& v) const {
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (u[i] == 0) continue;
      std::int64_t inner = 0;
      for (std::size_t j = 0; j < d; ++j) inner += gram[i][j] * v[j];
      acc += u[i] * (inner % n);
    }
    return acc % n;
  }
};

SearchSpace prepare(const BilinearForm& form, const Submodule& constraint) {
  const std::size_t d = form.dimension();
  const std::int64_t n = form.ring().modulus();
  if (d > kOracleMaxDimension || n > kOracleMaxModulus)
    throw GuardExceeded("exhaustive isotropic search limited to d <= 6 and q <= 9 (got d = " + std::to_string(d) +
                        ", q = " + std::to_string(n) + ")");
  if (constraint.ambient_rank() != d || !(constraint.ring() == form.ring()))
    throw InputError("isotropic search: constraint and form live in different modules");

  SearchSpace s{d, n, form.ring(), {}, {}};
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s.gram[i][j] = form.gram()(i, j);

  std::size_t total = 1;
  for (std::size_t j = 0; j < d; ++j) total *= static_cast<std::size_t>(n);
  s.member.assign(total, 0);

  // Enumerate the span through the Howell basis; row i has additive order n / pivot_i.
  const ZqMatrix& b = constraint.basis();
  std::vector<std::int64_t> order(b.rows());
  for (std::size_t i = 0; i < b.rows(); ++i) {
    std::size_t c = 0;
    while (b(i, c) == 0) ++c;
    order[i] = n / b(i, c);
  }
  std::vector<std::int64_t> coeff(b.rows(), 0);
  while (true) {
    Row v{};
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < d; ++j) v[j] = (v[j] + coeff[i] * b(i, j)) % n;
    s.member[s.encode(v)] = 1;
    std::size_t i = 0;
    while (i < coeff.size() && ++coeff[i] == order[i]) coeff[i++] = 0;
    if (i == coeff.size()) break;
  }
  return s;
}

/// Pivot columns of the mod-p reduced echelon form. Each free summand has a
/// unique basis with identity pivot block; entries right of a row's pivot are
/// arbitrary and entries left of it are multiples of p.
struct Shape {
  std::vector<std::size_t> pivots;
  std::vector<std::vector<std::size_t>> free_cols;
  std::vector<std::vector<bool>> divisible;  // parallel to free_cols
};

std::vector<Shape> shapes_of_rank(std::size_t d, std::size_t r) {
  std::vector<Shape> out;
  if (r > d) return out;
  std::vector<std::size_t> comb(r);
  for (std::size_t i = 0; i < r; ++i) comb[i] = i;
  while (true) {
    Shape sh{comb, {}, {}};
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<std::size_t> fc;
      std::vector<bool> div;
      for (std::size_t c = 0; c < d; ++c)
        if (std::find(comb.begin(), comb.end(), c) == comb.end()) {
          fc.push_back(c);
          div.push_back(c < comb[i]);
        }
      sh.free_cols.push_back(std::move(fc));
      sh.divisible.push_back(std::move(div));
    }
    out.push_back(std::move(sh));
    if (r == 0) break;
    std::size_t i = r;
    while (i > 0 && comb[i - 1] == d - r + (i - 1)) --i;
    if (i == 0) break;
    ++comb[i - 1];
    for (std::size_t j = i; j < r; ++j) comb[j] = comb[j - 1] + 1;
  }
  return out;
}

std::uint64_t row_count(const SearchSpace& s, const Shape& sh, std::size_t i) {
  std::uint64_t count = 1;
  for (bool div : sh.divisible[i]) count *= static_cast<std::uint64_t>(div ? s.n / s.ring.prime() : s.n);
  return count;
}

Row build_row(const SearchSpace& s, const Shape& sh, std::size_t i, std::uint64_t assignment) {
  Row v{};
  v[sh.pivots[i]] = 1;
  for (std::size_t k = 0; k < sh.free_cols[i].size(); ++k) {
    const std::int64_t p = sh.divisible[i][k] ? s.ring.prime() : 1;
    const auto radix = static_cast<std::uint64_t>(s.n / p);
    v[sh.free_cols[i][k]] = static_cast<Residue>(assignment % radix) * p;
    assignment /= radix;
  }
  return v;
}

bool admissible(const SearchSpace& s, const std::vector<Row>& prefix, const Row& v) {
  if (!s.member[s.encode(v)]) return false;
  if (s.pair(v, v) != 0) return false;
  for (const Row& u : prefix)
    if (s.pair(u, v) != 0 || s.pair(v, u) != 0) return false;
  return true;
}

struct Sink {
  bool collect = false;
  std::uint64_t found = 0;
  std::uint64_t candidates = 0;
  std::vector<Submodule> hits;
};

void extend(const SearchSpace& s, const Shape& sh, std::vector<Row>& prefix, Sink& sink) {
  const std::size_t i = prefix.size();
  if (i == sh.pivots.size()) {
    ++sink.found;
    if (sink.collect) {
      std::vector<Vector> rows;
      for (const Row& r : prefix) rows.emplace_back(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(s.d));
      sink.hits.push_back(Submodule::span(s.ring, s.d, rows));
    }
    return;
  }
  const std::uint64_t count = row_count(s, sh, i);
  for (std::uint64_t a = 0; a < count; ++a) {
    ++sink.candidates;
    Row v = build_row(s, sh, i, a);
    if (!admissible(s, prefix, v)) continue;
    prefix.push_back(v);
    extend(s, sh, prefix, sink);
    prefix.pop_back();
  }
}

// Reference implementation: plain depth-first search, one shape after another.
Sink enumerate_serial(const SearchSpace& s, std::size_t rank, bool collect) {
  Sink sink;
  sink.collect = collect;
  for (const Shape& sh : shapes_of_rank(s.d, rank)) {
    std::vector<Row> prefix;
    extend(s, sh, prefix, sink);
  }
  return sink;
}

// Parallel kernel: work items are (shape, first row) pairs; results are merged
// in work-item order so the output matches the serial enumeration exactly.
Sink enumerate_parallel(const SearchSpace& s, std::size_t rank, bool collect) {
  const auto shapes = shapes_of_rank(s.d, rank);
  if (rank == 0) return enumerate_serial(s, rank, collect);
  std::vector<std::pair<std::size_t, std::uint64_t>> items;
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const std::uint64_t count = row_count(s, shapes[k], 0);
    for (std::uint64_t a = 0; a < count; ++a) items.emplace_back(k, a);
  }
  Sink blank;
  blank.collect = collect;
  std::vector<Sink> per_item(items.size(), blank);
  const auto n_items = static_cast<std::int64_t>(items.size());

#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t t = 0; t < n_items; ++t) {
    const auto [k, a] = items[static_cast<std::size_t>(t)];
    Sink& sink = per_item[static_cast<std::size_t>(t)];
    ++sink.candidates;
    Row v = build_row(s, shapes[k], 0, a);
    std::vector<Row> prefix;
    if (!admissible(s, prefix, v)) continue;
    prefix.push_back(v);
    extend(s, shapes[k], prefix, sink);
  }

  Sink total;
  total.collect = collect;
  for (auto& sink : per_item) {
    total.found += sink.found;
    total.candidates += sink.candidates;
    for (auto& h : sink.hits) total.hits.push_back(std::move(h));
  }
  return total;
}

Sink enumerate(const SearchSpace& s, std::size_t rank, bool collect, Execution exec) {
  return exec == Execution::Serial ? enumerate_serial(s, rank, collect) : enumerate_parallel(s, rank, collect);
}

}  // namespace

IsotropicSearch search_isotropic_summands(const BilinearForm& form, const Submodule& constraint, bool collect_maximal,
                                          Execution exec) {
  const SearchSpace s = prepare(form, constraint);
  IsotropicSearch out;
  out.maximal_count = 1;
  if (collect_maximal) out.maximal.push_back(Submodule(s.ring, s.d));
  // Isotropy is inherited by summands of summands, so the ranks that occur form an initial segment.
  for (std::size_t r = 1; r <= s.d; ++r) {
    Sink sink = enumerate(s, r, collect_maximal, exec);
    out.candidates += sink.candidates;
    if (sink.found == 0) break;
    out.max_rank = static_cast<int>(r);
    out.maximal_count = sink.found;
    out.maximal = std::move(sink.hits);
  }
  return out;
}

std::vector<Submodule> isotropic_summands_of_rank(const BilinearForm& form, const Submodule& constraint,
                                                  std::size_t rank, Execution exec) {
  const SearchSpace s = prepare(form, constraint);
  return enumerate(s, rank, true, exec).hits;
}

int max_isotropic_oracle(const BilinearForm& form, const Submodule& constraint) {
  return search_isotropic_summands(form, constraint, false, Execution::Parallel).max_rank;
}

}  // namespace demuskin::zq
