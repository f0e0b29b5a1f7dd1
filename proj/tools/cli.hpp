#pragma once

#include <iosfwd>

namespace altproj::cli {

// Exit codes: 0 success/converged, 1 input or construction error, 2 ran to
// the step limit (or a checked identity did not hold) without failing.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

// The JSON report goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace altproj::cli
