#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rumor::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kConfig = 2,
    kNumeric = 3,
    kIo = 4,
    kPlot = 5,
};

/// Runs `rumorsim <args...>` (without the program name). Written file paths go
/// to `out`, one per line; diagnostics go to `err` as "error: <kind>: <detail>"
/// or "warning: <detail>" lines.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rumor::cli
