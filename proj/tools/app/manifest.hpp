#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "config.hpp"

namespace boomprop::app {

/// Reproducibility record written next to every command's outputs.
struct RunManifest {
  std::string command;
  std::string version;
  std::vector<std::pair<std::string, std::string>> config;  // fully resolved settings
  std::map<std::string, std::string> options;               // subcommand options
  int threads = 1;
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;  // relative to the run directory
  std::map<std::string, std::string> summary;
  int exit_code = 0;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

/// The manifest's configuration as an assignment layer.
std::vector<Assignment> manifest_layer(const RunManifest& manifest,
                                       const std::string& origin);

/// UTC time as 2026-01-31T12:00:00Z.
std::string utc_timestamp();

}  // namespace boomprop::app
