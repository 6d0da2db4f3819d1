#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wfl::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

/// Runs the `wfl` command line. `args` excludes the program name.
/// Domain errors print {"error": code, "detail": text} on `out`; usage
/// errors print a diagnostic on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wfl::cli
