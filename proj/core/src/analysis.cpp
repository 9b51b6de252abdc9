#include "boomprop/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include "boomprop/error.hpp"

namespace boomprop {

Field2D initial_nwave(std::span<const double> rho_nodes, std::span<const double> theta_nodes,
                      double a, double b) {
  if (!(a > 0.0)) throw ConfigError("absorption must be positive for the N-wave", "absorption");
  constexpr double pi = std::numbers::pi;
  const double s = b / (4.0 * a);
  std::vector<double> trace(theta_nodes.size());
  for (std::size_t k = 0; k < theta_nodes.size(); ++k) {
    const double t = theta_nodes[k];
    trace[k] = (t - 3.0 * pi) / (2.0 * pi) * (std::tanh(s * (t - 4.0 * pi)) - std::tanh(s * (t - 2.0 * pi)));
  }
  Field2D v(rho_nodes.size(), theta_nodes.size());
  for (std::size_t j = 0; j < v.rows(); ++j) std::copy(trace.begin(), trace.end(), v.row(j).begin());
  return v;
}

double convergence_rate(double err1, double err2, double n1, double n2) {
  if (!(err1 > 0.0) || !(err2 > 0.0) || !(n1 > 0.0) || !(n2 > 0.0) || n1 == n2) {
    throw std::invalid_argument("convergence_rate: errors and sizes must be positive, sizes distinct");
  }
  return std::log(err1 / err2) / std::log(n2 / n1);
}

const char* to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::splitting: return "splitting";
    case SolverKind::exprk22: return "exprk22";
    case SolverKind::exp_euler: return "exp_euler";
  }
  return "unknown";
}

SolverKind parse_solver_kind(const std::string& name) {
  if (name == "splitting") return SolverKind::splitting;
  if (name == "exprk22") return SolverKind::exprk22;
  if (name == "exp_euler") return SolverKind::exp_euler;
  throw ConfigError("unknown solver '" + name + "'", "solver");
}

FieldGeometry solver_geometry(const DomainConfig& config) {
  return {config.rho_min, config.theta_min, config.d_rho(), config.d_theta()};
}

RhoBoundary solver_boundary(SolverKind kind) {
  return kind == SolverKind::splitting ? RhoBoundary::neumann : RhoBoundary::periodic;
}

RunReport simulate(SolverKind kind, const DomainConfig& config, const VelocityFields& fields,
                   const SimulationOptions& options, const RunControl& control,
                   const Field2D* v0) {
  config.validate();
  const Axes axes = build_axes(config, solver_boundary(kind));
  Field2D initial;
  if (!v0) {
    initial = initial_nwave(axes.rho, axes.theta, config.absorption, config.nonlinearity);
    v0 = &initial;
  }
  if (kind == SolverKind::splitting) {
    SplittingOptions so;
    so.diffraction = options.diffraction;
    so.divergence_bound = options.divergence_bound;
    return run_splitting(config, *v0, fields, so, control);
  }
  ExpRkOptions eo;
  eo.scheme = kind == SolverKind::exprk22 ? ExpScheme::exprk22 : ExpScheme::exp_euler;
  eo.divergence_bound = options.divergence_bound;
  return run_exprk(config, *v0, fields, eo, options.precision, control);
}

std::vector<ConvergenceRow> convergence_study(const DomainConfig& base,
                                              std::span<const int> n_list, int n_ref,
                                              SolverKind kind,
                                              const VelocityFields& ref_fields,
                                              const ConvergenceOptions& options) {
  if (ref_fields.sigma_nodes() != static_cast<std::size_t>(n_ref) + 1) {
    throw std::invalid_argument("convergence_study: reference fields must have n_ref + 1 sigma nodes");
  }
  DomainConfig ref_config = base;
  ref_config.n_sigma = n_ref;
  const Field2D reference = simulate(kind, ref_config, ref_fields, options.simulation).final_field;
  const FieldGeometry geometry = solver_geometry(base);

  auto error_of = [&](const Field2D& v) {
    if (!options.roi_only) return relative_error(reference, v, geometry.d_rho, geometry.d_theta);
    const auto r = extract_region(reference, geometry, base.roi_rho, base.roi_theta);
    const auto n = extract_region(v, geometry, base.roi_rho, base.roi_theta);
    return relative_error(r.field, n.field, geometry.d_rho, geometry.d_theta);
  };

  std::vector<ConvergenceRow> rows;
  for (int n : n_list) {
    if (n <= 0 || n_ref % n != 0) {
      throw ConfigError("N_sigma = " + std::to_string(n) + " does not divide N_ref", "n_list");
    }
    DomainConfig cfg = base;
    cfg.n_sigma = n;
    ConvergenceRow row;
    row.n_sigma = n;
    try {
      const auto fields = downsample_fields(ref_fields, n_ref / n, 1);
      row.err = error_of(simulate(kind, cfg, fields, options.simulation).final_field);
    } catch (const InstabilityError& e) {
      row.stable = false;
      row.err = std::numeric_limits<double>::quiet_NaN();
      row.note = e.what();
    }
    if (!rows.empty() && rows.back().stable && row.stable) {
      row.beta = convergence_rate(rows.back().err, row.err, rows.back().n_sigma, n);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> running_median(std::span<const double> trace, int window) {
  if (window < 1) throw std::invalid_argument("running_median: window must be positive");
  const std::size_t n = trace.size();
  const std::size_t half = static_cast<std::size_t>(window / 2);
  std::vector<double> out(n);
  std::vector<double> buf;
  for (std::size_t i = 0; i < n; ++i) {
    // Symmetric window shrunk at the ends so that endpoints map to themselves.
    const std::size_t h = std::min({half, i, n - 1 - i});
    buf.assign(trace.begin() + static_cast<long>(i - h), trace.begin() + static_cast<long>(i + h + 1));
    std::nth_element(buf.begin(), buf.begin() + static_cast<long>(h), buf.end());
    out[i] = buf[h];
  }
  return out;
}

double max_overshoot(std::span<const double> trace, int window) {
  if (trace.empty()) return 0.0;
  const auto med = running_median(trace, window);
  return *std::max_element(trace.begin(), trace.end()) - *std::max_element(med.begin(), med.end());
}

double oscillation_amplitude(std::span<const double> trace, int window) {
  const auto med = running_median(trace, window);
  double m = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) m = std::max(m, std::abs(trace[i] - med[i]));
  return m;
}

namespace {

Field2D leading_rows(const Field2D& f, std::size_t rows) {
  if (f.rows() == rows) return f;
  Field2D out(rows, f.cols());
  std::copy_n(f.data(), rows * f.cols(), out.data());
  return out;
}

}  // namespace

FieldComparison compare_fields(const Field2D& a, const Field2D& b,
                               const FieldGeometry& geometry, Interval roi_rho,
                               Interval roi_theta, double probe_rho, int window) {
  if (a.cols() != b.cols()) throw std::invalid_argument("compare_fields: theta extents differ");
  const std::size_t rows = std::min(a.rows(), b.rows());
  const auto ra = extract_region(leading_rows(a, rows), geometry, roi_rho, roi_theta);
  const auto rb = extract_region(leading_rows(b, rows), geometry, roi_rho, roi_theta);

  FieldComparison out;
  Field2D diff = ra.field;
  for (std::size_t i = 0; i < diff.size(); ++i) diff.values()[i] -= rb.field.values()[i];
  out.diff_norm = l2_norm(diff, geometry.d_rho, geometry.d_theta);
  const double norm_a = l2_norm(ra.field, geometry.d_rho, geometry.d_theta);
  out.relative_diff = norm_a > 0.0 ? out.diff_norm / norm_a : 0.0;
  const double mb = max_abs(rb.field.values());
  out.amplitude_ratio = mb > 0.0 ? max_abs(ra.field.values()) / mb : 0.0;

  const long probe = std::lround((probe_rho - geometry.rho0) / geometry.d_rho);
  const auto j = static_cast<std::size_t>(std::clamp<long>(probe, 0, static_cast<long>(rows) - 1));
  const std::size_t k0 = ra.theta_begin;
  const std::size_t nk = ra.field.cols();
  for (std::size_t k = 0; k < nk; ++k) {
    out.trace_theta.push_back(geometry.theta0 + static_cast<double>(k0 + k) * geometry.d_theta);
    out.trace_a.push_back(a(j, k0 + k));
    out.trace_b.push_back(b(j, k0 + k));
  }
  out.overshoot_a = max_overshoot(out.trace_a, window);
  out.overshoot_b = max_overshoot(out.trace_b, window);
  return out;
}

std::vector<CheckpointComparison> compare_solvers(const DomainConfig& config,
                                                  const VelocityFields& fields,
                                                  std::span<const double> sigma_checkpoints,
                                                  SolverKind first, SolverKind second,
                                                  const CompareOptions& options) {
  const double ds = config.d_sigma();
  std::vector<int> steps;
  for (double s : sigma_checkpoints) {
    const long n = std::lround(s / ds);
    if (n < 0 || n > config.n_sigma) {
      throw ConfigError("checkpoint sigma = " + std::to_string(s) + " outside [0, Sigma]", "checkpoints");
    }
    steps.push_back(static_cast<int>(n));
  }
  auto run = [&](SolverKind kind, const SimulationOptions& sim) {
    std::map<int, Field2D> snaps;
    RunControl control;
    control.snapshot_steps.insert(steps.begin(), steps.end());
    control.sink = [&](int n, double, const Field2D& v) { snaps[n] = v; };
    simulate(kind, config, fields, sim, control);
    return snaps;
  };
  const auto a = run(first, options.first);
  const auto b = run(second, options.second);
  const auto geometry = solver_geometry(config);
  std::vector<CheckpointComparison> out;
  for (int n : steps) {
    out.push_back({n * ds, compare_fields(a.at(n), b.at(n), geometry, config.roi_rho,
                                          config.roi_theta, options.probe_rho, options.window)});
  }
  return out;
}

TimingReport timing_report(const RunReport& report, int threads, Precision precision) {
  TimingReport t;
  t.steps = report.steps;
  t.total_seconds = report.wall_seconds;
  for (const auto& s : report.step_times) {
    t.nonlinear_seconds += s.nonlinear;
    t.linear_seconds += s.linear;
  }
  if (t.steps > 0) {
    t.per_step_nonlinear = t.nonlinear_seconds / t.steps;
    t.per_step_linear = t.linear_seconds / t.steps;
  }
  t.threads = threads;
  t.precision = precision;
  return t;
}

}  // namespace boomprop
