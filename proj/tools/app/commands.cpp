#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "boomprop/cost_study.hpp"
#include "boomprop/error.hpp"
#include "boomprop/field_io.hpp"
#include "boomprop/parallel.hpp"
#include "manifest.hpp"

#ifndef BOOMPROP_VERSION
#define BOOMPROP_VERSION "0.0.0"
#endif

namespace boomprop::app {
namespace fs = std::filesystem;

namespace {

constexpr double kAmplitudeBound = 5.0;  // a-priori max|V| used for the CFL report
constexpr int kMasterSigma = 2400;
constexpr int kMasterRho = 10000;

std::string fmt(double x, int digits = 10) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

int option_int(const std::map<std::string, std::string>& o, const std::string& key) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(o.at(key), &pos);
    if (pos != o.at(key).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + o.at(key) + "'", key);
  }
}

std::vector<int> option_ints(const std::map<std::string, std::string>& o, const std::string& key) {
  std::vector<int> out;
  for (const auto& s : split_list(o.at(key))) {
    std::map<std::string, std::string> one{{key, s}};
    out.push_back(option_int(one, key));
  }
  if (out.empty()) throw ConfigError(key + ": empty list", key);
  return out;
}

bool option_bool(const std::map<std::string, std::string>& o, const std::string& key) {
  const auto& v = o.at(key);
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected on or off, got '" + v + "'", key);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

/// Snapshot of the velocity coefficients: rows are sigma nodes, columns rho nodes.
void write_velocity(const fs::path& path, const Field2D& f, const DomainConfig& grid) {
  write_snapshot(path, f, {0.0, grid.rho_min, grid.d_sigma(), grid.d_rho()}, 0.0);
}

struct Outputs {
  fs::path dir;
  std::vector<std::string> files;
  fs::path add(const std::string& name) {
    files.push_back(name);
    return dir / name;
  }
};

std::string step_name(const std::string& prefix, int n, const std::string& ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_n%06d.%s", prefix.c_str(), n, ext.c_str());
  return buf;
}

std::size_t probe_row(const DomainConfig& d, double probe_rho, std::size_t rows) {
  const long j = std::lround((probe_rho - d.rho_min) / d.d_rho());
  return static_cast<std::size_t>(std::clamp<long>(j, 0, static_cast<long>(rows) - 1));
}

void cmd_generate_field(const CommandRequest& req, Outputs& out,
                        std::map<std::string, std::string>& summary, std::ostream& log) {
  const auto& s = req.settings;
  const auto spec = sample_modes(s.turbulence);
  {
    auto f = open_output(out.add("modes.txt"));
    f << "# n |K| angle phase U1 U2\n";
    for (std::size_t i = 0; i < spec.size(); ++i) {
      f << i << ' ' << spec.wavenumber[i] << ' ' << spec.angle[i] << ' ' << spec.phase[i] << ' '
        << spec.amp_par[i] << ' ' << spec.amp_perp[i] << '\n';
    }
  }
  const auto fields = build_fields(s, s.domain);
  write_velocity(out.add("u_par.bin"), fields.u_par, s.domain);
  write_velocity(out.add("u_perp.bin"), fields.u_perp, s.domain);
  write_velocity(out.add("du_perp_dsigma.bin"), fields.du_perp_dsigma, s.domain);
  write_velocity(out.add("du_perp_drho.bin"), fields.du_perp_drho, s.domain);
  double umax = 0.0;
  for (std::size_t i = 0; i < fields.u_par.size(); ++i) {
    umax = std::max(umax, std::hypot(fields.u_par.values()[i], fields.u_perp.values()[i]));
  }
  summary["max_abs_u"] = fmt(umax, 17);
  log << "modes: " << spec.size() << ", grid " << fields.sigma_nodes() << " x "
      << fields.rho_nodes() << ", max|U| = " << umax << '\n';
}

void cmd_run(const CommandRequest& req, Outputs& out, std::map<std::string, std::string>& summary,
             std::ostream& log) {
  const auto& s = req.settings;
  const auto& d = s.domain;
  const bool csv = option_bool(req.options, "csv");
  const auto fields = build_fields(s, d);
  if (s.solver == SolverKind::splitting) {
    const auto cfl = check_cfl_splitting(d, kAmplitudeBound, max_abs(fields.u_perp.values()));
    log << "CFL: B*vmax*ds = " << cfl.burgers_lhs << " vs d_theta = " << cfl.burgers_rhs
        << " (N_theta <= " << cfl.n_theta_limit << "); |U_perp|*ds = " << cfl.transverse_lhs
        << " vs d_rho = " << cfl.transverse_rhs << " (N_rho <= " << cfl.n_rho_limit << ")\n";
    if (!cfl.ok()) throw CflError("CFL condition violated for the splitting solver");
  }
  const auto geometry = solver_geometry(d);
  RunControl control;
  control.snapshot_steps = snapshot_steps(s);
  control.budget_seconds = s.budget_seconds;
  control.sink = [&](int n, double sigma, const Field2D& v) {
    write_snapshot(out.add(step_name("snapshot", n, "bin")), v, geometry, sigma);
    if (csv) write_field_csv(out.add(step_name("snapshot", n, "csv")), v, geometry);
    auto t = open_output(out.add(step_name("trace", n, "csv")));
    const auto j = probe_row(d, s.probe_rho, v.rows());
    t << "theta,V\n";
    for (std::size_t k = 0; k < v.cols(); ++k) {
      t << geometry.theta0 + k * geometry.d_theta << ',' << v(j, k) << '\n';
    }
  };
  SimulationOptions sim{s.precision, s.diffraction, 10.0};
  const auto report = simulate(s.solver, d, fields, sim, control);
  {
    auto t = open_output(out.add("timing.csv"));
    t << "step,t_nonlinear,t_linear,t_total\n";
    for (std::size_t i = 0; i < report.step_times.size(); ++i) {
      const auto& r = report.step_times[i];
      t << i << ',' << r.nonlinear << ',' << r.linear << ',' << r.total << '\n';
    }
  }
  const auto timing = timing_report(report, thread_count(), s.precision);
  summary["steps"] = std::to_string(report.steps);
  summary["wall_seconds"] = fmt(report.wall_seconds);
  summary["nonlinear_seconds"] = fmt(timing.nonlinear_seconds);
  summary["linear_seconds"] = fmt(timing.linear_seconds);
  summary["max_abs_v"] = fmt(report.max_abs, 17);
  log << to_string(s.solver) << ": " << report.steps << " steps in " << report.wall_seconds
      << " s (nonlinear " << timing.nonlinear_seconds << " s, linear " << timing.linear_seconds
      << " s), max|V| = " << report.max_abs << '\n';
}

void cmd_converge(const CommandRequest& req, Outputs& out,
                  std::map<std::string, std::string>& summary, std::ostream& log) {
  const auto& s = req.settings;
  const int n_ref = option_int(req.options, "n_ref");
  const auto n_list = option_ints(req.options, "n_list");
  DomainConfig ref = s.domain;
  ref.n_sigma = n_ref;
  const auto fields = build_fields(s, ref);
  ConvergenceOptions co;
  co.simulation = {s.precision, s.diffraction, 10.0};
  co.roi_only = option_bool(req.options, "roi_only");
  const auto rows = convergence_study(s.domain, n_list, n_ref, s.solver, fields, co);
  auto f = open_output(out.add("convergence.csv"));
  f << "N_sigma,err,beta,stable\n";
  for (const auto& r : rows) {
    f << r.n_sigma << ',' << r.err << ',' << (r.beta ? fmt(*r.beta, 17) : "") << ','
      << (r.stable ? 1 : 0) << '\n';
    log << "N_sigma = " << r.n_sigma << "  err = " << r.err;
    if (r.beta) log << "  beta = " << *r.beta;
    if (!r.stable) log << "  unstable: " << r.note;
    log << '\n';
  }
  summary["rows"] = std::to_string(rows.size());
}

void cmd_bench(const CommandRequest& req, Outputs& out, std::map<std::string, std::string>& summary,
               std::ostream& log) {
  const auto& s = req.settings;
  std::vector<DomainConfig> sets;
  std::vector<int> ids = option_ints(req.options, "sets");
  for (int id : ids) {
    DomainConfig c = s.domain;
    const auto preset = grid_set(id);
    c.n_sigma = preset.n_sigma;
    c.n_rho = preset.n_rho;
    c.n_theta = preset.n_theta;
    sets.push_back(c);
  }
  std::vector<SolverKind> solvers;
  for (const auto& name : split_list(req.options.at("solvers"))) {
    if (name == "both") {
      solvers.push_back(SolverKind::splitting);
      solvers.push_back(SolverKind::exprk22);
    } else {
      solvers.push_back(parse_solver_kind(name));
    }
  }
  CostStudyOptions co;
  co.steps = option_int(req.options, "steps");
  co.repetitions = option_int(req.options, "repetitions");
  co.simulation = {s.precision, s.diffraction, 10.0};
  co.turbulence = s.turbulence;
  auto f = open_output(out.add("scaling.csv"));
  f << "solver,set,N_sigma,N_rho,N_theta,threads,precision,per_step_s,per_step_nonlinear_s,"
       "per_step_linear_s,projected_total_s,spread,flagged,growth,predicted_growth\n";
  for (auto kind : solvers) {
    const auto rows = cost_scaling_study(sets, kind, co);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      f << to_string(kind) << ',' << ids[i] << ',' << r.config.n_sigma << ',' << r.config.n_rho
        << ',' << r.config.n_theta << ',' << thread_count() << ','
        << (s.precision == Precision::f64 ? "double" : "single") << ',' << r.per_step_seconds
        << ',' << r.per_step_nonlinear << ',' << r.per_step_linear << ',' << r.projected_total
        << ',' << r.spread << ',' << (r.flagged ? 1 : 0) << ','
        << (r.growth ? fmt(*r.growth) : "") << ','
        << (r.predicted_growth ? fmt(*r.predicted_growth) : "") << '\n';
      log << to_string(kind) << " set " << ids[i] << ": " << r.per_step_seconds
          << " s/step, projected " << r.projected_total << " s"
          << (r.flagged ? " (timing spread above limit)" : "") << '\n';
    }
  }
  summary["solvers"] = std::to_string(solvers.size());
}

void cmd_compare(const CommandRequest& req, Outputs& out,
                 std::map<std::string, std::string>& summary, std::ostream& log) {
  const auto& s = req.settings;
  const auto against = parse_solver_kind(req.options.at("against"));
  std::vector<double> checkpoints;
  for (const auto& c : split_list(req.options.at("checkpoints"))) {
    const double x = parse_real(c);
    if (x <= s.domain.sigma_total) checkpoints.push_back(x);
  }
  if (checkpoints.empty()) checkpoints.push_back(s.domain.sigma_total);
  const auto fields = build_fields(s, s.domain);
  CompareOptions co;
  co.first = co.second = {s.precision, s.diffraction, 10.0};
  co.probe_rho = s.probe_rho;
  const auto results = compare_solvers(s.domain, fields, checkpoints, s.solver, against, co);
  const std::string a = to_string(s.solver), b = to_string(against);
  auto f = open_output(out.add("compare.csv"));
  f << "sigma,diff_norm,relative_diff,amplitude_ratio,overshoot_" << a << ",overshoot_" << b
    << '\n';
  for (const auto& c : results) {
    const auto& r = c.result;
    f << c.sigma << ',' << r.diff_norm << ',' << r.relative_diff << ',' << r.amplitude_ratio << ','
      << r.overshoot_a << ',' << r.overshoot_b << '\n';
    char name[64];
    std::snprintf(name, sizeof name, "trace_sigma_%g.csv", c.sigma);
    auto t = open_output(out.add(name));
    t << "theta,V_" << a << ",V_" << b << '\n';
    for (std::size_t k = 0; k < r.trace_theta.size(); ++k) {
      t << r.trace_theta[k] << ',' << r.trace_a[k] << ',' << r.trace_b[k] << '\n';
    }
    log << "sigma = " << c.sigma << ": relative difference " << r.relative_diff << ", overshoot "
        << a << " " << r.overshoot_a << " / " << b << " " << r.overshoot_b << '\n';
  }
  summary["checkpoints"] = std::to_string(results.size());
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"generate-field", "run", "converge", "bench",
                                              "compare"};
  return names;
}

std::map<std::string, std::string> default_options(const std::string& command) {
  if (command == "generate-field") return {};
  if (command == "run") return {{"csv", "off"}};
  if (command == "converge") return {{"n_list", "100,150,200,300"}, {"n_ref", "1200"}, {"roi_only", "off"}};
  if (command == "bench") return {{"sets", "1,2"}, {"solvers", "both"}, {"steps", "2"}, {"repetitions", "3"}};
  if (command == "compare") return {{"against", "splitting"}, {"checkpoints", "41,115"}};
  throw ConfigError("unknown command '" + command + "'", "command");
}

std::map<std::string, std::string> resolve_options(const std::string& command,
                                                   const std::map<std::string, std::string>& given) {
  auto options = default_options(command);
  for (const auto& [k, v] : given) {
    if (!options.count(k)) throw ConfigError("unknown option '" + k + "' for " + command, k);
    options[k] = v;
  }
  return options;
}

fs::path default_output_dir(const std::string& command) {
  const char* env = std::getenv("BOOMPROP_OUTPUT_ROOT");
  const fs::path root = env && *env ? fs::path(env) : fs::path("boomprop-runs");
  std::string stamp = utc_timestamp();
  std::erase(stamp, ':');
  std::erase(stamp, '-');
  fs::path dir = root / (command + "-" + stamp);
  for (int i = 1; fs::exists(dir); ++i) dir = root / (command + "-" + stamp + "-" + std::to_string(i));
  return dir;
}

VelocityFields build_fields(const Settings& settings, const DomainConfig& grid) {
  const Axes axes = build_axes(grid, RhoBoundary::neumann);
  if (!settings.turbulence_enabled) return zero_fields(axes.sigma.size(), axes.rho.size());
  auto sigma = axes.sigma;
  auto rho = axes.rho;
  if (settings.field_master) {
    // Nodes of the finest preset grid, subsampled: identical to sampling on
    // that grid and striding.
    if (kMasterSigma % grid.n_sigma != 0 || kMasterRho % grid.n_rho != 0) {
      throw ConfigError("field_master: N_sigma and N_rho must divide 2400 and 10000",
                        "field_master");
    }
    const int fs_ = kMasterSigma / grid.n_sigma;
    const int fr = kMasterRho / grid.n_rho;
    const auto ms = uniform_nodes(0.0, grid.sigma_total, kMasterSigma, kMasterSigma + 1);
    const auto mr = uniform_nodes(grid.rho_min, grid.rho_max, kMasterRho, kMasterRho + 1);
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = ms[i * fs_];
    sigma.back() = grid.sigma_total;
    for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = mr[j * fr];
  }
  const auto spec = sample_modes(settings.turbulence);
  return evaluate_fields(spec, settings.turbulence.lambda, settings.turbulence.c0, sigma, rho);
}

int execute(const CommandRequest& req, std::ostream& log, std::ostream& err) {
  RunManifest manifest;
  manifest.command = req.command;
  manifest.version = BOOMPROP_VERSION;
  manifest.config = to_assignments(req.settings);
  manifest.options = req.options;
  manifest.started = utc_timestamp();
  Outputs out{req.output_dir, {}};
  int code = kExitOk;
  try {
    fs::create_directories(req.output_dir);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  set_thread_count(req.settings.threads);
  manifest.threads = thread_count();
  try {
    if (req.command == "generate-field") cmd_generate_field(req, out, manifest.summary, log);
    else if (req.command == "run") cmd_run(req, out, manifest.summary, log);
    else if (req.command == "converge") cmd_converge(req, out, manifest.summary, log);
    else if (req.command == "bench") cmd_bench(req, out, manifest.summary, log);
    else if (req.command == "compare") cmd_compare(req, out, manifest.summary, log);
    else throw ConfigError("unknown command '" + req.command + "'", "command");
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const CflError& e) {
    err << "CFL violation: " << e.what() << '\n';
    code = kExitCfl;
  } catch (const InstabilityError& e) {
    err << "instability: " << e.what() << '\n';
    code = kExitInstability;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    code = kExitBudget;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    code = kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    code = kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    code = kExitUsage;
  }
  manifest.finished = utc_timestamp();
  manifest.outputs = out.files;
  manifest.exit_code = code;
  try {
    write_manifest(req.output_dir / "manifest.json", manifest);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return code;
}

}  // namespace boomprop::app
