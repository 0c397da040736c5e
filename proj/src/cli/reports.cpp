#include "demuskin/cli/reports.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "demuskin/errors.hpp"
#include "demuskin/words/word_parser.hpp"

namespace demuskin::cli {
namespace {

using builder::Signature;
using core::DemushkinPresentation;
using core::InvolutionAction;

const std::set<std::string> kCommands{"present", "invariants", "involution", "symmetrize", "quotient",
                                      "sweep",   "oracle",     "preset",     "verify"};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

DemushkinPresentation load_presentation(const RunConfig& cfg) {
  if (cfg.presentation_file) return presentation_from_json(read_json_file(*cfg.presentation_file));
  return core::standard_presentation(cfg.n, zq::Modulus(cfg.p, cfg.f));
}

words::ClassTwoEndo load_action(const RunConfig& cfg, const DemushkinPresentation& pres) {
  if (cfg.action_file) return endo_from_json(read_json_file(*cfg.action_file), pres);
  return core::standard_involution_endo(pres.frame());
}

Json pair_json(std::size_t a, std::size_t b) { return Json::array({a, b}); }
Json signature_json(const Signature& s) { return Json::array({s.u_plus, s.u_minus}); }

std::string signature_text(const Signature& s) {
  return "(" + std::to_string(s.u_plus) + ", " + std::to_string(s.u_minus) + ")";
}

std::pair<std::size_t, std::size_t> eigen_ranks(const InvolutionAction& action) {
  const zq::EigenSplit split = zq::eigen_split(action.h1_matrix);
  return {split.plus.rank(), split.minus.rank()};
}

std::vector<std::string> labels_of(const std::vector<std::size_t>& idx, const words::GeneratorSet& gens) {
  std::vector<std::string> out;
  for (std::size_t k : idx) out.push_back(gens.label(k));
  return out;
}

Json coinvariants_json(const core::CoinvariantResult& c, const DemushkinPresentation& pres) {
  Json j;
  j["kind"] = core::to_string(c.kind);
  j["rank"] = c.rank;
  if (c.kind == core::CoinvariantKind::Demushkin) {
    j["m"] = c.m;
    j["q_invariant"] = c.q_invariant;
  }
  j["kept"] = labels_of(c.kept, pres.generators());
  j["basis_change"] = to_json(c.basis, pres.generators());
  j["warnings"] = c.warnings;
  return j;
}

bool coinvariants_expected(const core::CoinvariantResult& c, const InvolutionAction& action,
                           const DemushkinPresentation& pres, std::string& detail) {
  const zq::Ring rq = pres.modulus().ring_q();
  detail = core::to_string(c.kind) + " of rank " + std::to_string(c.rank);
  if (action.h2_scalar == rq.neg(1))
    return c.kind == core::CoinvariantKind::Free && c.rank == static_cast<std::size_t>(pres.n() / 2 + 1);
  return c.kind == core::CoinvariantKind::Demushkin;
}

Json involution_json(const InvolutionAction& action, const DemushkinPresentation& pres) {
  const zq::Ring rq = pres.modulus().ring_q();
  const auto [plus, minus] = eigen_ranks(action);
  Json j;
  j["action"] = to_json(action.endo, pres.generators());
  j["h1_matrix"] = to_json(action.h1_matrix);
  j["eigen_ranks"] = pair_json(plus, minus);
  j["h2_scalar"] = signed_residue(rq, action.h2_scalar);
  j["relator_power"] = signed_residue(rq, action.relator_power);
  j["warnings"] = action.warnings;
  return j;
}

void check_involution(Report& r, const InvolutionAction& action, const DemushkinPresentation& pres) {
  const zq::Ring rq = pres.modulus().ring_q();
  r.check("t equals mu", action.relator_power == action.h2_scalar,
          "t = " + std::to_string(signed_residue(rq, action.relator_power)) +
              ", mu = " + std::to_string(signed_residue(rq, action.h2_scalar)));
  const auto [plus, minus] = eigen_ranks(action);
  const std::string ranks = "(" + std::to_string(plus) + ", " + std::to_string(minus) + ")";
  if (action.h2_scalar == rq.neg(1)) {
    const std::size_t half = pres.rank() / 2;
    r.check("eigen ranks", plus == half && minus == half, ranks);
  } else {
    r.check("eigen ranks", plus + minus == pres.rank(), ranks);
  }
  const auto coinv = core::coinvariants(pres, action);
  std::string detail;
  r.check("coinvariants dichotomy", coinvariants_expected(coinv, action, pres, detail), detail);
  r.results["coinvariants"] = coinvariants_json(coinv, pres);
}

void check_invariants(Report& r, const DemushkinPresentation& pres) {
  const auto inv = core::invariants(pres);
  const zq::Ring rq = pres.modulus().ring_q();
  const zq::Submodule ker_b = zq::kernel(zq::ZqMatrix::from_rows(rq, pres.rank(), {inv.bockstein}));
  const zq::Submodule perp = zq::orthogonal_complement(inv.cup, ker_b);
  const zq::Submodule gamma = core::gamma_line(pres);
  r.results["h1_rank"] = inv.h1_rank;
  r.results["gram"] = to_json(inv.cup.gram());
  r.results["bockstein"] = inv.bockstein;
  r.results["gamma_line"] = to_json(gamma);
  r.results["ker_b_perp"] = to_json(perp);
  r.check("cup nondegenerate", inv.is_demushkin);
  r.check("cup antisymmetric", inv.cup.symmetry() == zq::Symmetry::Antisymmetric);
  r.check("bockstein surjective", inv.bockstein_surjective);
  r.check("gamma line equals perp of ker B", gamma == perp);
}

Report start(const RunConfig& cfg) {
  Report r;
  r.command = cfg.command;
  r.config = cfg.echo();
  return r;
}

// The certificate pipeline for a standard presentation with its standard involution.
void quotient_pipeline(Report& r, const DemushkinPresentation& pres, const InvolutionAction& action, Signature sig) {
  const auto v = builder::build_V(pres, action, sig);
  const auto cert = builder::free_quotient(pres, action, v);
  r.results["signature"] = signature_json(sig);
  r.results["V"] = to_json(v.V);
  r.results["certificate"] = to_json(cert, pres.generators());
  r.check("V conditions", v.checks.usable() && v.checks.maximal);
  r.check("certificate green", cert.green());
  if (!cert.green()) return;
  const Signature realized = builder::signature_of(cert, action);
  const std::size_t rank = cert.kept.size();
  r.results["rank_F"] = rank;
  r.results["eigen_ranks"] = pair_json(static_cast<std::size_t>(realized.u_plus + 1), static_cast<std::size_t>(realized.u_minus));
  r.check("signature realized", realized == sig, signature_text(realized));
  r.check("free quotient rank", rank == static_cast<std::size_t>(pres.n() / 2 + 1), std::to_string(rank));
  r.check("gamma line kept", builder::factoring_check(pres, v));
  if (sig == Signature{pres.n() / 2, 0}) {
    const bool unique = builder::uniqueness_check(pres, action, cert);
    r.results["coincides_with_coinvariants"] = unique;
    r.check("coincides with coinvariants", unique);
  }
}

void require_sweep_range(const std::vector<int>& ns, const std::vector<std::int64_t>& qs) {
  for (int n : ns) {
    if (n < 0 || n % 2 != 0) throw InputError("sweep n must be even and nonnegative, got " + std::to_string(n));
    if (n > kSweepMaxN) throw GuardExceeded("sweep n = " + std::to_string(n) + " exceeds " + std::to_string(kSweepMaxN));
  }
  for (auto q : qs) {
    zq::Modulus::from_q(q);
    if (q > kSweepMaxQ) throw GuardExceeded("sweep q = " + std::to_string(q) + " exceeds " + std::to_string(kSweepMaxQ));
  }
}

struct SweepTask {
  int n;
  std::int64_t q;
  Signature sig;
};

SweepRow run_task(const SweepTask& t) {
  SweepRow row;
  row.n = t.n;
  row.q = t.q;
  row.requested = t.sig;
  try {
    const auto pres = core::standard_presentation(t.n, zq::Modulus::from_q(t.q));
    const auto action = core::standard_involution(pres);
    const auto cert = builder::free_quotient(pres, action, builder::build_V(pres, action, t.sig));
    row.green = cert.green();
    row.rank = cert.kept.size();
    row.relator_contained = cert.flags.relator_contained;
    if (row.green) {
      row.realized = builder::signature_of(cert, action);
      if (t.sig == Signature{t.n / 2, 0}) row.unique = builder::uniqueness_check(pres, action, cert);
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

void RunConfig::validate() const {
  if (!kCommands.count(command)) throw InputError("unknown command '" + command + "'");
  if (format != "json" && format != "text") throw InputError("format must be json or text");
  if (signature && command != "quotient" && command != "preset")
    throw InputError("--signature only applies to quotient and preset");
}

Json RunConfig::echo() const {
  Json j;
  j["command"] = command;
  if (command == "sweep") {
    j["n"] = sweep_n;
    j["q"] = sweep_q;
    return j;
  }
  j["p"] = p;
  if (command != "preset") {
    j["f"] = f;
    j["n"] = n;
  }
  if (signature) j["signature"] = signature_json(*signature);
  if (presentation_file) j["presentation"] = *presentation_file;
  if (action_file) j["action"] = *action_file;
  return j;
}

void Report::check(std::string name, bool pass, std::string detail) {
  checks.push_back({std::move(name), pass, std::move(detail)});
}

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

Json Report::to_json() const {
  Json j;
  j["schema"] = kSchemaVersion;
  j["version"] = kVersion;
  j["convention"] = {{"commutator", "[x,y] = x^-1 y^-1 x y"},
                     {"normal_form", "g_0^a_0 ... g_r^a_r prod_{i<j} [g_j,g_i]^c_ij"},
                     {"h1_action", "columns"}};
  j["config"] = config;
  j["results"] = results;
  Json cs = Json::array();
  for (const auto& c : checks) cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  j["checks"] = cs;
  j["notes"] = notes;
  j["passed"] = passed();
  return j;
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "demuskin " << command << " (" << kVersion << ")\n";
  for (const auto& [key, value] : config.items()) out << "  " << key << ": " << value.dump() << "\n";
  for (const auto& [key, value] : results.items())
    out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  for (const auto& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << "\n";
  }
  for (const auto& n : notes) out << "note: " << n << "\n";
  out << (passed() ? "all checks passed" : "some checks failed") << "\n";
  return out.str();
}

Report cmd_present(const RunConfig& cfg) {
  Report r = start(cfg);
  const auto pres = load_presentation(cfg);
  r.results["presentation"] = to_json(pres);
  r.results["relator"] = to_json(pres.relator());
  const std::string word = words::format_word(pres.relator(), pres.generators());
  r.check("relator round trip", words::parse_word(word, pres.generators(), pres.frame()) == pres.relator(), word);
  return r;
}

Report cmd_invariants(const RunConfig& cfg) {
  Report r = start(cfg);
  check_invariants(r, load_presentation(cfg));
  return r;
}

Report cmd_involution(const RunConfig& cfg) {
  Report r = start(cfg);
  const auto pres = load_presentation(cfg);
  const auto action = core::make_action(pres, load_action(cfg, pres));
  r.results = involution_json(action, pres);
  check_involution(r, action, pres);
  return r;
}

Report cmd_symmetrize(const RunConfig& cfg) {
  Report r = start(cfg);
  const auto pres = load_presentation(cfg);
  const auto endo = load_action(cfg, pres);
  const auto& f = pres.frame();
  const bool involution = compose(endo, endo) == words::ClassTwoEndo::identity(f);
  r.results["lifted"] = !involution;
  if (!involution) {
    const auto bound = static_cast<std::uint64_t>(2 * f.modulus.q * f.modulus.q * f.modulus.q);
    r.results["order_before_lift"] = words::endo_order(endo, bound);
  }
  const InvolutionAction action =
      involution ? core::make_action(pres, endo) : core::lift_involution(pres, endo.linear_part(), endo);
  const auto sym = core::symmetrize_basis(pres, action);
  r.results["involution"] = to_json(action.endo, pres.generators());
  r.results["basis_change"] = to_json(sym.basis, pres.generators());
  r.results["relator"] = words::format_word(sym.relator, pres.generators());
  r.results["clean_action"] = to_json(sym.action.endo, pres.generators());
  r.check("involution", compose(action.endo, action.endo) == words::ClassTwoEndo::identity(f));
  r.check("linear part kept", action.endo.linear_part() == endo.linear_part());
  bool clean = true;
  for (std::size_t k = 0; k < f.rank; ++k) {
    const auto g = words::ClassTwoElement::generator(f, k);
    clean = clean && (sym.action.endo.image(k) == g || sym.action.endo.image(k) == words::inverse(g));
  }
  r.check("clean action", clean);
  r.check("relator preserved", sym.relator == pres.relator());
  return r;
}

Report cmd_quotient(const RunConfig& cfg) {
  if (!cfg.signature) throw InputError("quotient needs --signature U+ U-");
  Report r = start(cfg);
  const auto pres = load_presentation(cfg);
  const auto action = core::make_action(pres, load_action(cfg, pres));
  quotient_pipeline(r, pres, action, *cfg.signature);
  return r;
}

std::vector<SweepRow> run_sweep(const std::vector<int>& ns, const std::vector<std::int64_t>& qs, zq::Execution exec) {
  require_sweep_range(ns, qs);
  std::vector<SweepTask> tasks;
  for (int n : ns)
    for (auto q : qs)
      for (int up = n / 2; up >= 0; --up) tasks.push_back({n, q, {up, n / 2 - up}});
  std::vector<SweepRow> rows(tasks.size());
  if (exec == zq::Execution::Serial) {
    for (std::size_t i = 0; i < tasks.size(); ++i) rows[i] = run_task(tasks[i]);
  } else {
    const auto count = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) rows[i] = run_task(tasks[i]);
  }
  return rows;
}

Report cmd_sweep(const RunConfig& cfg) {
  Report r = start(cfg);
  const auto rows = run_sweep(cfg.sweep_n, cfg.sweep_q, cfg.serial ? zq::Execution::Serial : zq::Execution::Parallel);
  Json table = Json::array();
  std::size_t green = 0;
  bool signatures = true, ranks = true, contained = true, unique = true;
  for (const auto& row : rows) {
    Json j;
    j["n"] = row.n;
    j["q"] = row.q;
    j["signature"] = signature_json(row.requested);
    j["green"] = row.green;
    j["rank_F"] = row.rank;
    j["realized"] = row.realized ? signature_json(*row.realized) : Json(nullptr);
    j["relator_contained"] = row.relator_contained;
    if (row.unique) j["coincides_with_coinvariants"] = *row.unique;
    if (!row.error.empty()) j["error"] = row.error;
    table.push_back(j);
    green += row.green ? 1 : 0;
    signatures = signatures && row.realized && *row.realized == row.requested;
    ranks = ranks && row.rank == static_cast<std::size_t>(row.n / 2 + 1);
    contained = contained && row.relator_contained;
    if (row.requested == Signature{row.n / 2, 0}) unique = unique && row.unique.value_or(false);
  }
  r.results["certificates"] = table;
  r.results["total"] = rows.size();
  r.results["green"] = green;
  if (!rows.empty()) {
    r.check("all certificates green", green == rows.size(),
            std::to_string(green) + " of " + std::to_string(rows.size()));
    r.check("signatures realized", signatures);
    r.check("free quotient ranks", ranks);
    r.check("relator contained", contained);
    r.check("fixed quotients coincide with coinvariants", unique);
  }
  return r;
}

Report cmd_oracle(const RunConfig& cfg) {
  Report r = start(cfg);
  const auto pres = load_presentation(cfg);
  const auto inv = core::invariants(pres);
  const zq::Ring rq = pres.modulus().ring_q();
  const auto exec = cfg.serial ? zq::Execution::Serial : zq::Execution::Parallel;
  const zq::Submodule full = zq::Submodule::full(rq, pres.rank());
  const zq::Submodule ker_b = zq::kernel(zq::ZqMatrix::from_rows(rq, pres.rank(), {inv.bockstein}));
  const auto everywhere = zq::search_isotropic_summands(inv.cup, full, false, exec);
  const auto inside = zq::search_isotropic_summands(inv.cup, ker_b, true, exec);
  const zq::Submodule gamma = core::gamma_line(pres);
  std::size_t with_gamma = 0;
  for (const auto& v : inside.maximal) with_gamma += v.contains(gamma) ? 1 : 0;
  r.results["dimension"] = pres.rank();
  r.results["modulus"] = pres.modulus().q;
  r.results["max_rank"] = everywhere.max_rank;
  r.results["max_rank_in_ker_b"] = inside.max_rank;
  r.results["maximal_in_ker_b"] = inside.maximal_count;
  r.results["maximal_containing_gamma"] = with_gamma;
  r.results["candidates"] = everywhere.candidates + inside.candidates;
  const int half = pres.n() / 2 + 1;
  r.check("maximal isotropic rank is n/2 + 1", everywhere.max_rank == half, std::to_string(everywhere.max_rank));
  r.check("maximal rank inside ker B is n/2 + 1", inside.max_rank == half, std::to_string(inside.max_rank));
  r.check("every maximal summand in ker B contains the gamma line", with_gamma == inside.maximal.size(),
          std::to_string(with_gamma) + " of " + std::to_string(inside.maximal.size()));
  return r;
}

Report cmd_preset_local_field(const RunConfig& cfg) {
  if (cfg.p == 2) throw InputError("the local-field preset needs an odd prime");
  Report r = start(cfg);
  const zq::Modulus m(cfg.p, 1);
  const int n = static_cast<int>(cfg.p) - 1;
  const auto pres = core::standard_presentation(n, m);
  const auto action = core::standard_involution(pres);
  const Signature sig = cfg.signature.value_or(Signature{0, n / 2});
  r.results["n"] = n;
  r.results["q"] = m.q;
  quotient_pipeline(r, pres, action, sig);
  if (r.results.contains("rank_F")) {
    const auto expected_rank = static_cast<std::size_t>((cfg.p + 1) / 2);
    r.check("rank (p + 1)/2", r.results["rank_F"].get<std::size_t>() == expected_rank);
    if (!cfg.signature)
      r.check("eigen ranks (1, (p - 1)/2)", r.results["eigen_ranks"] == pair_json(1, static_cast<std::size_t>(n / 2)));
  }
  r.notes.push_back(
      "regularity of p is the arithmetic hypothesis of the local-field example and is not checked; the preset only "
      "instantiates the group-theoretic shape: n = p - 1, q = p, the standard involution");
  return r;
}

Report cmd_verify(const RunConfig& cfg) {
  Report r = start(cfg);
  const auto pres = load_presentation(cfg);
  const auto endo = load_action(cfg, pres);
  r.results["presentation"] = to_json(pres);
  check_invariants(r, pres);
  const bool order_two = compose(endo, endo) == words::ClassTwoEndo::identity(pres.frame());
  r.check("order 2", order_two, order_two ? "" : "action squared is not the identity on F/F^3");
  if (!order_two) return r;
  try {
    const auto action = core::make_action(pres, endo);
    r.check("relator compatible", true);
    const Json details = involution_json(action, pres);
    for (const auto& [k, v] : details.items()) r.results[k] = v;
    check_involution(r, action, pres);
  } catch (const ActionError& e) {
    r.check("relator compatible", false, e.what());
  }
  return r;
}

Report run_command(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.command == "present") return cmd_present(cfg);
  if (cfg.command == "invariants") return cmd_invariants(cfg);
  if (cfg.command == "involution") return cmd_involution(cfg);
  if (cfg.command == "symmetrize") return cmd_symmetrize(cfg);
  if (cfg.command == "quotient") return cmd_quotient(cfg);
  if (cfg.command == "sweep") return cmd_sweep(cfg);
  if (cfg.command == "oracle") return cmd_oracle(cfg);
  if (cfg.command == "preset") return cmd_preset_local_field(cfg);
  return cmd_verify(cfg);
}

}  // namespace demuskin::cli
