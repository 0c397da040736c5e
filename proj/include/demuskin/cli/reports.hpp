#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "demuskin/cli/json_io.hpp"

namespace demuskin::cli {

inline constexpr const char* kSchemaVersion = "v1";
inline constexpr const char* kVersion = "demuskin 0.1.0";

/// Sweep guard: larger ranges are refused.
inline constexpr int kSweepMaxN = 8;
inline constexpr std::int64_t kSweepMaxQ = 25;

struct RunConfig {
  std::string command;
  std::int64_t p = 3;
  int f = 1;
  int n = 2;
  std::optional<builder::Signature> signature;
  std::optional<std::string> presentation_file;
  std::optional<std::string> action_file;
  /// sweep ranges
  std::vector<int> sweep_n;
  std::vector<std::int64_t> sweep_q;
  bool serial = false;
  std::string format = "json";
  std::string output;

  /// Throws InputError on an unknown command, bad format or misplaced signature.
  void validate() const;
  /// Echo of everything that affects the result (not the output path or format).
  Json echo() const;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string command;
  Json config;
  Json results = Json::object();
  std::vector<Check> checks;
  std::vector<std::string> notes;

  void check(std::string name, bool pass, std::string detail = "");
  bool passed() const;
  int exit_code() const { return passed() ? 0 : 1; }
  Json to_json() const;
  std::string to_text() const;
};

Report cmd_present(const RunConfig& cfg);
Report cmd_invariants(const RunConfig& cfg);
Report cmd_involution(const RunConfig& cfg);
Report cmd_symmetrize(const RunConfig& cfg);
Report cmd_quotient(const RunConfig& cfg);
Report cmd_sweep(const RunConfig& cfg);
Report cmd_oracle(const RunConfig& cfg);
Report cmd_preset_local_field(const RunConfig& cfg);
Report cmd_verify(const RunConfig& cfg);

/// Dispatches on cfg.command after validate().
Report run_command(const RunConfig& cfg);

struct SweepRow {
  int n = 0;
  std::int64_t q = 0;
  builder::Signature requested;
  bool green = false;
  std::size_t rank = 0;
  std::optional<builder::Signature> realized;
  bool relator_contained = false;
  /// only for (n/2, 0)
  std::optional<bool> unique;
  std::string error;
};

/// One row per (n, q, signature), in the order n, q, u_plus descending.
/// Parallel runs the configurations on OpenMP threads; the rows are identical.
std::vector<SweepRow> run_sweep(const std::vector<int>& ns, const std::vector<std::int64_t>& qs, zq::Execution exec);

}  // namespace demuskin::cli
