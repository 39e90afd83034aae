#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ssalt::cli {

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;        // domain or configuration error
inline constexpr int kExitNotConverged = 2; // optimizer did not converge

/// Runs the tool on argv-style arguments (args[0] is the program name).
/// Results go to declared --out paths or `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace ssalt::cli
