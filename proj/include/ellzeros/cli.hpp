#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ellzeros {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitNumerical = 1, kExitUsage = 2 };

/// Runs one command. args[0] is the program name. Writes the result document
/// to `out` and diagnostics to `err`; returns an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ellzeros
