#pragma once

#include <memory>
#include <span>

#include "boomprop/domain.hpp"
#include "boomprop/field.hpp"
#include "boomprop/run.hpp"
#include "boomprop/spectral.hpp"
#include "boomprop/turbulence.hpp"

namespace boomprop {

// Five-way Lie-Trotter splitting: Crank-Nicolson diffraction, Godunov Burgers,
// spectral axial convection + absorption, Lax-Wendroff transverse convection.
//
// Fields handled here carry n_rho + 1 rows (homogeneous Neumann in rho, both
// endpoints stored) and n_theta periodic columns.

/// How the trapezoidal theta-sum of the diffraction step is formed.
/// `direct` re-sums all l <= k for every k (O(N_rho N_theta^2) per step);
/// `running` carries the partial sum forward (O(N_rho N_theta)). Both solve
/// the same linear systems.
enum class DiffractionSum { direct, running };

enum class CflPolicy { ignore, warn, error };

Field2D step_diffraction_cn(const Field2D& v, double d_sigma, double d_rho, double d_theta,
                            DiffractionSum mode = DiffractionSum::direct);

/// Godunov flux for f(u) = -B/2 u^2.
double godunov_flux(double u_left, double u_right, double b);

Field2D step_burgers_godunov(const Field2D& v, double b, double d_sigma, double d_theta);

/// Multiplies theta mode m of every row j by
/// exp(i w_m 2 pi U_par[j] d_sigma - A w_m^2 d_sigma), w_m = 2 pi m / theta_span.
Field2D step_axial_absorption_spectral(const Field2D& v, std::span<const double> u_par,
                                       double a, double d_sigma, double theta_span);
Field2D step_axial_absorption_spectral(const Field2D& v, std::span<const double> u_par,
                                       double a, double d_sigma, double theta_span,
                                       SpectralTransform<double>& transform);

Field2D step_transverse_lw(const Field2D& v, std::span<const double> u_perp,
                           std::span<const double> du_perp_dsigma,
                           std::span<const double> du_perp_drho, double d_sigma,
                           double d_rho);

struct CflReport {
  double burgers_lhs = 0.0;     // B * v_max * d_sigma
  double burgers_rhs = 0.0;     // d_theta
  double transverse_lhs = 0.0;  // ||U_perp|| * d_sigma
  double transverse_rhs = 0.0;  // d_rho
  double n_theta_limit = 0.0;   // largest admissible N_theta at this N_sigma
  double n_rho_limit = 0.0;     // largest admissible N_rho at this N_sigma

  bool burgers_ok() const { return burgers_lhs <= burgers_rhs; }
  bool transverse_ok() const { return transverse_lhs <= transverse_rhs; }
  bool ok() const { return burgers_ok() && transverse_ok(); }
};

CflReport check_cfl_splitting(const DomainConfig& config, double v_max_bound,
                              double u_perp_max);

struct SplittingState {
  Field2D v;
  int sigma_index = 0;
};

struct SplittingOptions {
  DiffractionSum diffraction = DiffractionSum::direct;
  double divergence_bound = 10.0;
};

struct SplittingStepTiming {
  double diffraction = 0.0;
  double burgers = 0.0;
  double axial = 0.0;
  double transverse = 0.0;
  double total() const { return diffraction + burgers + axial + transverse; }
};

/// Owns the transform workspace for repeated Lie steps on one grid.
class SplittingSolver {
 public:
  SplittingSolver(const DomainConfig& config, const VelocityFields& fields,
                  SplittingOptions options = {});

  /// One Lie step from sigma^n to sigma^{n+1}; throws InstabilityError on
  /// non-finite values or max|V| above the divergence bound.
  SplittingState lie_step(const SplittingState& state);

  const SplittingStepTiming& last_timing() const { return timing_; }
  const DomainConfig& config() const { return config_; }

 private:
  DomainConfig config_;
  const VelocityFields& fields_;
  SplittingOptions options_;
  std::unique_ptr<SpectralTransform<double>> transform_;
  SplittingStepTiming timing_;
};

/// Runs n = 0..N_sigma-1 from `v0` (n_rho + 1 rows), emitting planned
/// snapshots. Throws InstabilityError or BudgetExceeded.
RunReport run_splitting(const DomainConfig& config, const Field2D& v0,
                        const VelocityFields& fields, const SplittingOptions& options,
                        const RunControl& control = {});

}  // namespace boomprop
