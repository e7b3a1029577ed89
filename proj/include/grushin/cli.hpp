#pragma once

#include <iosfwd>

namespace grushin {

// Exit codes of the command-line front end.
enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_usage = 2, exit_input = 3, exit_numerical = 4 };

// Parses argv and runs one subcommand. Reports go to out (or --output), diagnostics to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace grushin
