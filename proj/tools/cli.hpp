#pragma once

#include <iosfwd>

namespace scsvm::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kSuccess = 0, kUsageOrIoError = 1, kNotConverged = 2 };

/// Entry point of the `scsvm` tool; writes machine output to `out` and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scsvm::cli
