#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "boomprop/field.hpp"

namespace boomprop {

/// Called with (step index n, sigma^n, V^n) for every planned snapshot.
using SnapshotSink = std::function<void(int, double, const Field2D&)>;

struct RunControl {
  std::set<int> snapshot_steps;  // step indices n in [0, N_sigma]
  SnapshotSink sink;
  std::optional<double> budget_seconds;  // wall-clock budget for the march
};

/// Wall time of one step, split into the nonlinear and linear buckets.
/// For the splitting solver "nonlinear" is the Burgers and transverse
/// convection sub-steps and "linear" the diffraction and spectral sub-steps.
struct StepRecord {
  double nonlinear = 0.0;
  double linear = 0.0;
  double total = 0.0;
};

struct RunReport {
  int steps = 0;
  double wall_seconds = 0.0;
  double max_abs = 0.0;  // max over n of ||V^n||_inf
  std::vector<StepRecord> step_times;
  std::uint64_t transforms = 0;
  Field2D final_field;
};

}  // namespace boomprop
