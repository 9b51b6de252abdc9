#pragma once

#include <numbers>
#include <vector>

namespace boomprop {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Boundary treatment of the transverse axis. Periodic axes exclude the right
/// endpoint node; Neumann axes store it.
enum class RhoBoundary { periodic, neumann };

/// Dimensionless computational domain and PDE coefficients.
///
/// Defaults are the Set-1 grid on sigma in [0, 120], rho in [0, 400],
/// theta in [-13 pi, 15 pi] with B = 0.05 and A = 3.4e-4.
struct DomainConfig {
  double sigma_total = 120.0;
  double rho_min = 0.0;
  double rho_max = 400.0;
  double theta_min = -13.0 * std::numbers::pi;
  double theta_max = 15.0 * std::numbers::pi;
  int n_sigma = 300;
  int n_rho = 1250;
  int n_theta = 448;
  double absorption = 3.4e-4;
  double nonlinearity = 0.05;
  Interval roi_rho{133.0, 267.0};
  Interval roi_theta{0.0, 15.0 * std::numbers::pi};

  double d_sigma() const { return sigma_total / n_sigma; }
  double d_rho() const { return (rho_max - rho_min) / n_rho; }
  double d_theta() const { return (theta_max - theta_min) / n_theta; }
  double theta_span() const { return theta_max - theta_min; }
  double rho_span() const { return rho_max - rho_min; }

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

/// Grid presets 1..4 (N_sigma, N_rho, N_theta doubling per set).
DomainConfig grid_set(int set);

struct Axes {
  std::vector<double> sigma;  // N_sigma + 1 nodes, both endpoints
  std::vector<double> rho;
  std::vector<double> theta;  // periodic: N_theta nodes
};

Axes build_axes(const DomainConfig& config, RhoBoundary rho_boundary);

/// Uniform nodes lo + i*(hi-lo)/n for i in [0, count).
std::vector<double> uniform_nodes(double lo, double hi, int n, int count);

}  // namespace boomprop
