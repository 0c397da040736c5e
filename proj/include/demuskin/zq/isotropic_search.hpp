#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "demuskin/zq/submodule.hpp"

namespace demuskin::zq {

/// Enumeration guard: the exhaustive oracle refuses larger instances.
inline constexpr std::size_t kOracleMaxDimension = 6;
inline constexpr std::int64_t kOracleMaxModulus = 9;

enum class Execution { Serial, Parallel };

struct IsotropicSearch {
  /// Largest rank of a free, totally isotropic direct summand inside the constraint.
  int max_rank = 0;
  /// Number of such summands of rank max_rank.
  std::uint64_t maximal_count = 0;
  /// Every summand of rank max_rank, in enumeration order (only when collected).
  std::vector<Submodule> maximal;
  /// Candidate rows examined; a work measure for benchmarks.
  std::uint64_t candidates = 0;
};

/// Exhaustively enumerates free direct summands of (Z/q)^d contained in
/// `constraint` (each summand visited once via its reduced echelon basis) and
/// finds the largest totally isotropic ones. Throws GuardExceeded when
/// d > 6 or q > 9.
IsotropicSearch search_isotropic_summands(const BilinearForm& form, const Submodule& constraint,
                                          bool collect_maximal, Execution exec = Execution::Parallel);

/// All free totally isotropic summands of exactly `rank` inside `constraint`.
std::vector<Submodule> isotropic_summands_of_rank(const BilinearForm& form, const Submodule& constraint,
                                                  std::size_t rank, Execution exec = Execution::Parallel);

/// Maximum rank of a free totally isotropic summand contained in `constraint`.
int max_isotropic_oracle(const BilinearForm& form, const Submodule& constraint);

}  // namespace demuskin::zq
