#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "boomprop/analysis.hpp"
#include "boomprop/turbulence.hpp"

namespace boomprop::app {

/// Everything a subcommand needs to reproduce a run.
struct Settings {
  int grid_set = 1;
  DomainConfig domain;
  TurbulenceParams turbulence;
  bool turbulence_enabled = true;
  bool field_master = false;  // sample fields on the Set-4 grid, then subsample
  SolverKind solver = SolverKind::exprk22;
  Precision precision = Precision::f64;
  DiffractionSum diffraction = DiffractionSum::direct;
  int threads = 1;
  bool deterministic = true;
  std::optional<double> budget_seconds;
  std::vector<double> snapshots;  // sigma values; empty selects the default cadence
  double probe_rho = 144.0;
};

/// One `key = value` binding and where it came from (file:line, "flag", ...).
struct Assignment {
  std::string key;
  std::string value;
  std::string origin;
  int line = 0;
};

/// Reads a line-oriented config file:
///
///   # comment
///   key = value
///
/// Blank lines and text after '#' are ignored. Throws ConfigError for a
/// missing file or a line without '='.
std::vector<Assignment> read_config_file(const std::filesystem::path& path);

/// Parses "key=value" (as given to --param).
Assignment parse_assignment(const std::string& text, const std::string& origin);

/// Resolves defaults <- grid preset <- file <- flags. The preset is the
/// `set` flag when given, else the file's `set` key, else 1. Unknown keys,
/// malformed values and violated invariants throw ConfigError naming the key
/// and its origin.
Settings resolve_settings(const std::vector<Assignment>& file,
                          const std::vector<Assignment>& flags);

/// Fully resolved settings as key/value pairs; resolving them again yields
/// the same settings.
std::vector<std::pair<std::string, std::string>> to_assignments(const Settings& settings);

const std::vector<std::string>& known_keys();

/// Ten evenly spaced sigma values on (0, Sigma] plus 41 and 115 when inside
/// the range.
std::vector<double> default_snapshot_sigmas(const DomainConfig& domain);

/// Step indices for the requested (or default) snapshot sigmas; always
/// contains N_sigma.
std::set<int> snapshot_steps(const Settings& settings);

/// Real number, optionally with a trailing multiple of pi ("-13pi", "15*pi").
double parse_real(const std::string& text);

}  // namespace boomprop::app
