#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boomprop/domain.hpp"
#include "boomprop/exprk.hpp"
#include "boomprop/field.hpp"
#include "boomprop/run.hpp"
#include "boomprop/splitting.hpp"
#include "boomprop/turbulence.hpp"

namespace boomprop {

/// N-wave pulse ((theta - 3pi)/2pi) (tanh(B/4A (theta - 4pi)) - tanh(B/4A (theta - 2pi))),
/// identical on every rho row. Throws ConfigError for A <= 0.
Field2D initial_nwave(std::span<const double> rho_nodes, std::span<const double> theta_nodes,
                      double a, double b);

/// beta with err2/err1 = (n2/n1)^-beta.
double convergence_rate(double err1, double err2, double n1, double n2);

enum class SolverKind { splitting, exprk22, exp_euler };

const char* to_string(SolverKind kind);
SolverKind parse_solver_kind(const std::string& name);

/// Grid geometry of a solver's state on `config`.
FieldGeometry solver_geometry(const DomainConfig& config);
RhoBoundary solver_boundary(SolverKind kind);

struct SimulationOptions {
  Precision precision = Precision::f64;
  DiffractionSum diffraction = DiffractionSum::direct;
  double divergence_bound = 10.0;
};

/// Runs `kind` from the N-wave (or `v0` when given) to sigma_total.
/// `fields` must cover N_sigma + 1 sigma nodes and the solver's rho nodes.
RunReport simulate(SolverKind kind, const DomainConfig& config, const VelocityFields& fields,
                   const SimulationOptions& options, const RunControl& control = {},
                   const Field2D* v0 = nullptr);

struct ConvergenceRow {
  int n_sigma = 0;
  double err = 0.0;
  std::optional<double> beta;
  bool stable = true;
  std::string note;
};

struct ConvergenceOptions {
  SimulationOptions simulation;
  bool roi_only = false;
};

/// Runs `kind` at each N in `n_list` and at `n_ref`, all sharing the fields
/// sampled on the n_ref sigma grid (`ref_fields`, downsampled per run), and
/// fits beta between consecutive rows. Unstable runs are flagged and skipped.
std::vector<ConvergenceRow> convergence_study(const DomainConfig& base,
                                              std::span<const int> n_list, int n_ref,
                                              SolverKind kind,
                                              const VelocityFields& ref_fields,
                                              const ConvergenceOptions& options = {});

/// Overshoot of a theta trace above its running-median envelope:
/// max(v) - max(median_w(v)). A running median leaves monotone runs unchanged
/// and removes oscillations shorter than the window.
double max_overshoot(std::span<const double> trace, int window = 7);

/// Largest pointwise departure |v - median_w(v)|.
double oscillation_amplitude(std::span<const double> trace, int window = 7);

std::vector<double> running_median(std::span<const double> trace, int window);

struct FieldComparison {
  double diff_norm = 0.0;      // ||a - b|| on the region
  double relative_diff = 0.0;  // diff_norm / ||a||
  double amplitude_ratio = 0.0;  // max|a| / max|b| on the region
  double overshoot_a = 0.0;
  double overshoot_b = 0.0;
  std::vector<double> trace_theta;
  std::vector<double> trace_a;
  std::vector<double> trace_b;
};

/// Compares two fields on the rows both share (the first min(rows) rows),
/// restricted to the region of interest; theta traces are taken at the rho
/// node nearest `probe_rho`.
FieldComparison compare_fields(const Field2D& a, const Field2D& b,
                               const FieldGeometry& geometry, Interval roi_rho,
                               Interval roi_theta, double probe_rho, int window = 7);

struct CheckpointComparison {
  double sigma = 0.0;
  FieldComparison result;
};

struct CompareOptions {
  SimulationOptions first;
  SimulationOptions second;
  double probe_rho = 144.0;
  int window = 7;
};

/// Runs both solvers from the same N-wave and fields; compares at each
/// checkpoint sigma (rounded to the nearest step).
std::vector<CheckpointComparison> compare_solvers(const DomainConfig& config,
                                                  const VelocityFields& fields,
                                                  std::span<const double> sigma_checkpoints,
                                                  SolverKind first, SolverKind second,
                                                  const CompareOptions& options = {});

/// Per-run wall time split into the nonlinear and linear buckets.
struct TimingReport {
  int steps = 0;
  double total_seconds = 0.0;
  double nonlinear_seconds = 0.0;
  double linear_seconds = 0.0;
  double per_step_nonlinear = 0.0;
  double per_step_linear = 0.0;
  int threads = 1;
  Precision precision = Precision::f64;
};

TimingReport timing_report(const RunReport& report, int threads, Precision precision);

}  // namespace boomprop
