#pragma once

#include <ostream>

namespace demuskin::cli {

/// Parses the command line, runs the command and writes the report.
/// Returns 0 when every check passes, 1 when a check fails and 2 on bad input.
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace demuskin::cli
