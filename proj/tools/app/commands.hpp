#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>

#include "config.hpp"

namespace boomprop::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitCfl = 2,
  kExitInstability = 3,
  kExitIo = 4,
  kExitBudget = 5,
};

struct CommandRequest {
  std::string command;
  Settings settings;
  std::map<std::string, std::string> options;
  std::filesystem::path output_dir;
};

const std::vector<std::string>& command_names();

/// Subcommand options and their defaults. Throws ConfigError for an unknown command.
std::map<std::string, std::string> default_options(const std::string& command);

/// Overlays `given` on the defaults; unknown option names throw ConfigError.
std::map<std::string, std::string> resolve_options(const std::string& command,
                                                   const std::map<std::string, std::string>& given);

/// $BOOMPROP_OUTPUT_ROOT (or ./boomprop-runs) / <command>-<UTC time>, made unique.
std::filesystem::path default_output_dir(const std::string& command);

/// Velocity coefficients on the (sigma, rho) nodes of `grid` with the rho
/// endpoint stored (n_rho + 1 columns); zero when turbulence is off.
VelocityFields build_fields(const Settings& settings, const DomainConfig& grid);

/// Runs the command, writes its outputs and manifest.json under
/// request.output_dir and returns the exit code. Diagnostics go to `err`.
int execute(const CommandRequest& request, std::ostream& log, std::ostream& err);

}  // namespace boomprop::app
