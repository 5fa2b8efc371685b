#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace casec::cli {

// Exit codes (stable contract): 0 success, 1 validation errors found,
// 2 usage/IO/parse error, 3 assessment verdict below the required status.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationErrors = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRequireFailed = 3;

// Entry point behind the casec binary; kept separate so tests can drive the
// CLI in-process. `args` excludes the program name. Diagnostics go to `err`,
// artifacts to `out` (or to --out paths).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace casec::cli
