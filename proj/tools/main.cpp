#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "boomprop/error.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "manifest.hpp"

namespace app = boomprop::app;

namespace {

struct CommonFlags {
  std::string config;
  std::string manifest;
  std::string output;
  std::optional<int> set;
  std::optional<std::string> solver;
  std::optional<std::string> precision;
  std::optional<std::string> absorption;
  std::optional<int> threads;
  bool deterministic = false;
  std::optional<std::string> budget;
  std::optional<std::string> seed;
  std::vector<std::string> params;
  std::vector<std::string> options;
  std::map<std::string, std::string> named;  // subcommand options given by dedicated flags
};

void add_common(CLI::App* sub, CommonFlags& f, bool solver_flag = true) {
  sub->add_option("--config", f.config, "key = value configuration file");
  sub->add_option("--manifest", f.manifest, "replay the configuration of a previous run");
  sub->add_option("--output", f.output, "run directory (default: $BOOMPROP_OUTPUT_ROOT/<command>-<time>)");
  sub->add_option("--set", f.set, "grid preset 1..4");
  if (solver_flag) sub->add_option("--solver", f.solver, "splitting | exprk22 | exp_euler");
  sub->add_option("--precision", f.precision, "double | single");
  sub->add_option("--absorption", f.absorption, "absorption coefficient A");
  sub->add_option("--threads", f.threads, "solver threads (0 = hardware default)");
  sub->add_flag("--deterministic", f.deterministic, "fixed reduction order (always on)");
  sub->add_option("--budget-seconds", f.budget, "abort when the projected run time exceeds this");
  sub->add_option("--seed", f.seed, "turbulence seed");
  sub->add_option("--param", f.params, "configuration override key=value")->take_all();
  sub->add_option("--option", f.options, "subcommand option key=value")->take_all();
}

void named(CLI::App* sub, CommonFlags& f, const std::string& flag, const std::string& key,
           const std::string& help) {
  sub->add_option_function<std::string>(
      flag, [&f, key](const std::string& v) { f.named[key] = v; }, help);
}

int dispatch(const std::string& command, const CommonFlags& f) {
  std::vector<app::Assignment> file;
  std::map<std::string, std::string> given;
  if (!f.manifest.empty()) {
    const auto m = app::read_manifest(f.manifest);
    if (m.command != command) {
      throw boomprop::ConfigError("manifest was written by '" + m.command + "', not '" + command + "'",
                                  "manifest");
    }
    file = app::manifest_layer(m, f.manifest);
    given = m.options;
  }
  if (!f.config.empty()) {
    const auto layer = app::read_config_file(f.config);
    file.insert(file.end(), layer.begin(), layer.end());
  }
  std::vector<app::Assignment> flags;
  auto flag = [&](const std::string& key, const std::string& value, const std::string& name) {
    flags.push_back({key, value, name, 0});
  };
  if (f.set) flag("set", std::to_string(*f.set), "--set");
  if (f.solver) flag("solver", *f.solver, "--solver");
  if (f.precision) flag("precision", *f.precision, "--precision");
  if (f.absorption) flag("absorption", *f.absorption, "--absorption");
  if (f.threads) flag("threads", std::to_string(*f.threads), "--threads");
  if (f.deterministic) flag("deterministic", "on", "--deterministic");
  if (f.budget) flag("budget_seconds", *f.budget, "--budget-seconds");
  if (f.seed) flag("seed", *f.seed, "--seed");
  for (const auto& p : f.params) flags.push_back(app::parse_assignment(p, "--param"));
  for (const auto& o : f.options) {
    const auto a = app::parse_assignment(o, "--option");
    given[a.key] = a.value;
  }
  for (const auto& [k, v] : f.named) given[k] = v;

  app::CommandRequest req;
  req.command = command;
  req.settings = app::resolve_settings(file, flags);
  req.options = app::resolve_options(command, given);
  req.output_dir = f.output.empty() ? app::default_output_dir(command) : std::filesystem::path(f.output);
  std::cout << "output: " << req.output_dir.string() << '\n';
  return app::execute(req, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Sonic-boom propagation through turbulence: splitting and exponential integrators"};
  cli.require_subcommand(1);
  std::map<std::string, CommonFlags> flags;
  for (const auto& name : app::command_names()) flags[name];

  auto* gen = cli.add_subcommand("generate-field", "sample turbulence modes and velocity fields");
  add_common(gen, flags["generate-field"]);

  auto* run = cli.add_subcommand("run", "march one solver and write snapshots and timings");
  add_common(run, flags["run"]);
  run->add_flag_function("--csv", [&](std::int64_t) { flags["run"].named["csv"] = "on"; },
                         "also export snapshots as CSV");

  auto* conv = cli.add_subcommand("converge", "self-convergence study in N_sigma");
  add_common(conv, flags["converge"]);
  named(conv, flags["converge"], "--n-list", "n_list", "comma-separated N_sigma values");
  named(conv, flags["converge"], "--n-ref", "n_ref", "reference N_sigma");
  conv->add_flag_function("--roi-only", [&](std::int64_t) { flags["converge"].named["roi_only"] = "on"; },
                          "measure errors on the region of interest only");

  auto* bench = cli.add_subcommand("bench", "per-step cost across grid presets");
  add_common(bench, flags["bench"], false);
  named(bench, flags["bench"], "--sets", "sets", "comma-separated presets");
  named(bench, flags["bench"], "--solver", "solvers", "solver list or 'both'");
  named(bench, flags["bench"], "--steps", "steps", "timed steps per repetition");
  named(bench, flags["bench"], "--repetitions", "repetitions", "repetitions (median is reported)");

  auto* cmp = cli.add_subcommand("compare", "run two solvers and compare at checkpoints");
  add_common(cmp, flags["compare"]);
  named(cmp, flags["compare"], "--against", "against", "second solver");
  named(cmp, flags["compare"], "--checkpoints", "checkpoints", "comma-separated sigma values");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : app::kExitUsage;
  }
  try {
    for (auto* sub : cli.get_subcommands()) return dispatch(sub->get_name(), flags[sub->get_name()]);
  } catch (const boomprop::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return app::kExitUsage;
  } catch (const boomprop::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return app::kExitIo;
  }
  return app::kExitUsage;
}
