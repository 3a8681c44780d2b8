#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sipstab::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kFailure = 1, kValidation = 2, kPrerequisite = 3 };

/// Environment variable naming a YAML file of default overrides.
inline constexpr const char* kConfigEnv = "SIPSTAB_CONFIG";

/// Runs the tool on argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sipstab::cli
