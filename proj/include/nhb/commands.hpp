#pragma once

// Command implementations behind the `nhb` executable. Each command writes
// one or more files under an output stem and reports an exit status.

#include "nhb/config.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace nhb {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3 };

struct CommandResult {
  int exit_code = kExitOk;
  std::vector<std::string> files;
  std::string message; // set when exit_code != 0
};

/// Names accepted by run_command.
const std::vector<std::string>& command_names();

/// Runs `name` with a validated config. Files are `stem.csv` and/or
/// `stem.json` (a trailing .csv or .json on `out` is dropped). Numerical
/// failures leave the partial output on disk, marked by a "# status: partial"
/// line, and give kExitNumerical. Throws ConfigError for invalid input.
CommandResult run_command(std::string_view name, const RunConfig& cfg, const std::string& out,
                          int jobs = 0);

} // namespace nhb
