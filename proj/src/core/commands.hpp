#pragma once

#include <string>
#include <vector>

#include "scenario.hpp"

namespace adyn {

inline constexpr const char* kVersion = "0.1.0";

const std::vector<std::string>& command_names();

// Runs one subcommand (ibm, ode, tss, canonical, invasion, compare, ess)
// writing its CSV/JSON outputs and a manifest.json into out_dir. With a
// sweep in the scenario, each value gets its own subdirectory and manifest.
// Returns the command report.
Json run_command(const Scenario& scenario, const std::string& command, const std::string& out_dir);

}  // namespace adyn
