#pragma once

#include <string>
#include <vector>

#include "replearn/config.hpp"

namespace replearn {

/// Executes one CLI command against a validated configuration and writes the
/// command's artifact files under config.out_dir.  Returns the paths written.
/// Throws on any failure (unknown command, solver error, I/O error).
std::vector<std::string> run_command(const RunConfig& config,
                                     const std::string& command);

}  // namespace replearn
