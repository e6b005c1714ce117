#pragma once

#include <iosfwd>

namespace climkg::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

/// Whole command line in-process. Results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace climkg::cli
