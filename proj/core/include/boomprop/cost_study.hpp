#pragma once

#include <optional>
#include <span>
#include <vector>

#include "boomprop/analysis.hpp"

namespace boomprop {

struct CostStudyOptions {
  int steps = 2;          // timed steps per repetition
  int repetitions = 3;
  double variance_limit = 0.2;
  SimulationOptions simulation;
  TurbulenceParams turbulence;
};

struct ScalingRow {
  DomainConfig config;
  double per_step_seconds = 0.0;  // median over repetitions
  double per_step_nonlinear = 0.0;
  double per_step_linear = 0.0;
  double projected_total = 0.0;   // per_step * N_sigma
  double spread = 0.0;            // (max - min) / median over repetitions
  bool flagged = false;
  std::optional<double> growth;            // per-step time / previous row
  std::optional<double> predicted_growth;  // from the operation-count model
};

/// Operation-count model of one step: N_rho N_theta^2 for the splitting
/// solver, N_rho log N_rho N_theta log N_theta for the exponential schemes.
double predicted_step_cost(SolverKind kind, const DomainConfig& config);

/// Times `steps` steps of `kind` on each grid (sigma range truncated so that
/// d_sigma is unchanged) and fits the per-step growth between consecutive sets.
std::vector<ScalingRow> cost_scaling_study(std::span<const DomainConfig> sets,
                                           SolverKind kind,
                                           const CostStudyOptions& options = {});

}  // namespace boomprop
