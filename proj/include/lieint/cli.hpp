#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lieint {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2, kExitIo = 3 };

/// Runs one command line (without the program name), e.g.
/// {"floquet", "analyze", "run.json", "--out", "results"}.
/// Results go to `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lieint
