#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tgt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitBudget = 3;

/// Runs the command line `args` (without the program name). Primary output goes
/// to --out when given, otherwise to `out`; errors are JSON lines on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes `content` to `path` through a temporary file and a rename.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace tgt::cli
