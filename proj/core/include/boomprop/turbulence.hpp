#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "boomprop/field.hpp"

namespace boomprop {

/// Physical parameters of the isotropic random velocity field.
struct TurbulenceParams {
  int n_modes = 500;
  double sigma_u = 3.0;          // m/s
  double c0 = 343.0;             // m/s
  double pulse_duration = 0.02;  // s
  double lambda = 343.0 * 0.02;  // m, pulse length c0 * T0
  double corr_length = 4.0 * 343.0 * 0.02;  // m
  double k_min = 0.1 / (4.0 * 343.0 * 0.02);
  double k_max = 9.0 / (4.0 * 343.0 * 0.02);
  std::uint64_t seed = 20210301;

  /// Derives lambda, L and [K_min, K_max] = [0.1/L, 9/L] from the scales.
  static TurbulenceParams make(double sigma_u, double c0, double pulse_duration,
                               int n_modes, std::uint64_t seed);

  void validate() const;
};

/// Sampled random modes. Mode n has wave vector |K_n| (cos a_n, sin a_n) and
/// amplitude vector |U_n| (-sin a_n, cos a_n), orthogonal by construction.
struct TurbulenceSpec {
  std::vector<double> phase;
  std::vector<double> angle;
  std::vector<double> wavenumber;
  std::vector<double> amp_par;   // first amplitude component
  std::vector<double> amp_perp;  // second amplitude component

  std::size_t size() const { return phase.size(); }
  bool operator==(const TurbulenceSpec&) const = default;
};

/// Dimensionless velocity coefficients on the (sigma, rho) node grid.
/// Rows index sigma nodes, columns index rho nodes.
struct VelocityFields {
  Field2D u_par;
  Field2D u_perp;
  Field2D du_perp_dsigma;
  Field2D du_perp_drho;

  std::size_t sigma_nodes() const { return u_par.rows(); }
  std::size_t rho_nodes() const { return u_par.cols(); }
  bool operator==(const VelocityFields&) const = default;
};

/// Gaussian spectrum sigma_u^2 K^3 L^4 exp(-(K L / 2)^2) / 8.
double energy_spectrum(double k, double sigma_u, double corr_length);

/// Draws phases and angles from two independent streams of the seed and
/// places the wavenumbers equispaced on [K_min, K_max] (both inclusive).
TurbulenceSpec sample_modes(const TurbulenceParams& params);

/// Evaluates U = (1/scale) sum_n U_n cos(K_n . r + phi_n) at r = lambda (sigma, rho),
/// with analytic sigma- and rho-derivatives of the second component.
/// Pass scale = c0 to obtain the dimensionless coefficients used by the solvers.
VelocityFields evaluate_fields(const TurbulenceSpec& spec, double lambda, double scale,
                               std::span<const double> sigma_nodes,
                               std::span<const double> rho_nodes);

/// Strided sub-sampling: keeps every factor-th node along each axis.
VelocityFields downsample_fields(const VelocityFields& fields, int factor_sigma,
                                 int factor_rho);

/// Fields with every entry zero (homogeneous medium).
VelocityFields zero_fields(std::size_t sigma_nodes, std::size_t rho_nodes);

/// Portable 64-bit generator streams. Stream s of a seed is an mt19937_64
/// seeded with splitmix64(seed + (s + 1) * 0x9E3779B97F4A7C15).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace boomprop
