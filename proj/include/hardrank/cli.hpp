#pragma once

#include <string>
#include <vector>

namespace hardrank {

/// Exit codes shared by every command.
enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitRuntime = 2 };

/// Runs `hardrank <command> ...` in-process. Reports errors on stderr and
/// returns the exit code instead of throwing.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

} // namespace hardrank
