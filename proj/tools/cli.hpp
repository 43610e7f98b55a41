#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bergman::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kCheckFailed = 3 };

/// Runs one command line (args exclude the program name). CSV goes to the --output
/// file, or to `out` when it is "-"; the one-line summary goes to `out` (to `err`
/// when the CSV uses `out`), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bergman::cli
