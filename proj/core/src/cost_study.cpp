#include "boomprop/cost_study.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boomprop {
namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double predicted_step_cost(SolverKind kind, const DomainConfig& config) {
  const double nr = config.n_rho;
  const double nt = config.n_theta;
  if (kind == SolverKind::splitting) return nr * nt * nt;
  return nr * std::log2(nr) * nt * std::log2(nt);
}

std::vector<ScalingRow> cost_scaling_study(std::span<const DomainConfig> sets,
                                           SolverKind kind,
                                           const CostStudyOptions& options) {
  if (options.steps < 1 || options.repetitions < 1) {
    throw std::invalid_argument("cost_scaling_study: steps and repetitions must be positive");
  }
  const auto spec = sample_modes(options.turbulence);
  std::vector<ScalingRow> rows;
  for (const auto& full : sets) {
    full.validate();
    DomainConfig cfg = full;
    cfg.n_sigma = options.steps;
    cfg.sigma_total = full.d_sigma() * options.steps;
    const Axes axes = build_axes(cfg, RhoBoundary::neumann);
    const auto fields = evaluate_fields(spec, options.turbulence.lambda, options.turbulence.c0,
                                        axes.sigma, axes.rho);
    std::vector<double> total, nonlinear, linear;
    for (int r = 0; r < options.repetitions; ++r) {
      const auto report = simulate(kind, cfg, fields, options.simulation);
      double t = 0.0, nl = 0.0, li = 0.0;
      for (const auto& s : report.step_times) {
        t += s.total;
        nl += s.nonlinear;
        li += s.linear;
      }
      total.push_back(t / report.steps);
      nonlinear.push_back(nl / report.steps);
      linear.push_back(li / report.steps);
    }
    ScalingRow row;
    row.config = full;
    row.per_step_seconds = median(total);
    row.per_step_nonlinear = median(nonlinear);
    row.per_step_linear = median(linear);
    row.projected_total = row.per_step_seconds * full.n_sigma;
    const auto [lo, hi] = std::minmax_element(total.begin(), total.end());
    row.spread = row.per_step_seconds > 0.0 ? (*hi - *lo) / row.per_step_seconds : 0.0;
    row.flagged = row.spread > options.variance_limit;
    if (!rows.empty()) {
      row.growth = row.per_step_seconds / rows.back().per_step_seconds;
      row.predicted_growth =
          predicted_step_cost(kind, full) / predicted_step_cost(kind, rows.back().config);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace boomprop
