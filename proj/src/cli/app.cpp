#include "demuskin/cli/app.hpp"

#include <CLI11.hpp>
#include <fstream>

#include "demuskin/cli/reports.hpp"
#include "demuskin/errors.hpp"

namespace demuskin::cli {

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free quotients of Demushkin groups with an involution, computed in F/F^3", "demuskin"};
  RunConfig cfg;
  std::vector<int> signature;
  std::string presentation, action;
  app.add_option("command", cfg.command, "present, invariants, involution, symmetrize, quotient, sweep, oracle, preset, verify")
      ->required();
  app.add_option("--p", cfg.p, "odd prime");
  app.add_option("--f", cfg.f, "q = p^f");
  app.add_option("--n", cfg.n, "the presentation has n + 2 generators");
  app.add_option("--signature", signature, "U+ U-")->expected(2);
  app.add_option("--presentation", presentation, "presentation JSON file");
  app.add_option("--action", action, "action JSON file");
  app.add_option("--ns", cfg.sweep_n, "sweep values of n")->delimiter(',');
  app.add_option("--qs", cfg.sweep_q, "sweep values of q")->delimiter(',');
  app.add_flag("--serial", cfg.serial, "run the serial reference path");
  app.add_option("--format", cfg.format, "json or text");
  app.add_option("--output", cfg.output, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (!signature.empty()) cfg.signature = builder::Signature{signature[0], signature[1]};
  if (!presentation.empty()) cfg.presentation_file = presentation;
  if (!action.empty()) cfg.action_file = action;

  Report report;
  try {
    report = run_command(cfg);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const GuardExceeded& e) {
    err << "guard exceeded: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "check failed: " << e.what() << "\n";
    return 1;
  }

  const std::string body = cfg.format == "text" ? report.to_text() : report.to_json().dump(2) + "\n";
  if (cfg.output.empty()) {
    out << body;
  } else {
    std::ofstream file(cfg.output);
    if (!file) {
      err << "cannot write " << cfg.output << "\n";
      return 2;
    }
    file << body;
  }
  return report.exit_code();
}

}  // namespace demuskin::cli
