#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "boomprop/domain.hpp"
#include "boomprop/field.hpp"
#include "boomprop/run.hpp"
#include "boomprop/spectral.hpp"
#include "boomprop/turbulence.hpp"

namespace boomprop {

enum class Precision { f64, f32 };

/// Unit roundoff of the working precision: 2^-53 or 2^-24.
double unit_roundoff(Precision precision);

/// z_jk = d_sigma * ( -(1/4pi) xi_j^2 / (i w_k + eps/4pi) - A w_k^2 ) with the
/// angular frequencies xi_j = 2 pi j / rho_span and w_k = 2 pi k / theta_span.
std::complex<double> multiplier_exponent(const DomainConfig& config, long j, long k,
                                         double eps);

/// E = exp(z), Phi1 = phi1(z), Phi2 = phi2(z) in SpectralField2D storage
/// layout (n_rho rows, n_theta/2 + 1 theta modes).
template <typename Real>
struct PhiMultipliers {
  std::size_t n_rho = 0;
  std::size_t n_theta = 0;
  double d_sigma = 0.0;
  double eps = 0.0;
  std::vector<std::complex<Real>> e;
  std::vector<std::complex<Real>> phi1;
  std::vector<std::complex<Real>> phi2;
  std::vector<std::complex<Real>> phi1_minus_phi2;
};

template <typename Real>
PhiMultipliers<Real> build_multipliers(const DomainConfig& config, double machine_eps);

/// Evaluates b(sigma^n, V) into `b` for a physical field `v`.
template <typename Real>
using BEvaluator = std::function<void(int, std::span<const Real>, std::span<Real>)>;

struct StepTiming {
  double nonlinear = 0.0;  // b evaluations (STEP 1 + 3)
  double linear = 0.0;     // transforms and multiplier products (STEP 2 + 4)
};

/// Scratch buffers reused across steps.
template <typename Real>
struct ExpWorkspace {
  ExpWorkspace(std::size_t n_rho, std::size_t n_theta);
  std::vector<Real> v;
  std::vector<Real> b;
  std::vector<std::complex<Real>> b1_hat;
  std::vector<std::complex<Real>> b2_hat;
  std::vector<std::complex<Real>> stage_hat;
  double last_max_abs = 0.0;  // ||V^n||_inf seen by the first stage
};

/// Exponential Euler: vhat <- E vhat + d_sigma Phi1 F(b(sigma^n, V^n)).
/// Two transforms per step.
template <typename Real>
void exp_euler_step(std::span<std::complex<Real>> vhat, const PhiMultipliers<Real>& mult,
                    SpectralTransform<Real>& transform, const BEvaluator<Real>& b_eval,
                    int n, ExpWorkspace<Real>& work, StepTiming* timing = nullptr);

/// ExpRK22 in frequency space; four transforms per step.
///   stage:  V*  = E V + ds Phi1 F(b(s^n, V^n))
///   update: V+  = E V + ds ((Phi1 - Phi2) F(b(s^n, V^n)) + Phi2 F(b(s^{n+1}, V*)))
template <typename Real>
void exprk22_step(std::span<std::complex<Real>> vhat, const PhiMultipliers<Real>& mult,
                  SpectralTransform<Real>& transform, const BEvaluator<Real>& b_eval,
                  int n, ExpWorkspace<Real>& work, StepTiming* timing = nullptr);

enum class ExpScheme { exprk22, exp_euler };

struct ExpRkOptions {
  ExpScheme scheme = ExpScheme::exprk22;
  double divergence_bound = 10.0;
  double machine_eps = 0.0;  // 0 selects the unit roundoff of Real
};

/// Marches the doubly periodic problem with WENO5 for b and an exponential
/// integrator for the linear part. The state lives in frequency space.
template <typename Real>
class ExpRkSolver {
 public:
  ExpRkSolver(const DomainConfig& config, const VelocityFields& fields,
              ExpRkOptions options = {});
  ~ExpRkSolver();

  /// Uses the first n_rho rows of `v0`.
  void set_initial(const Field2D& v0);
  void step();

  int sigma_index() const { return n_; }
  Field2D field();
  const StepTiming& last_timing() const { return timing_; }
  std::uint64_t transform_count() const { return transform_->transform_count(); }
  const PhiMultipliers<Real>& multipliers() const { return mult_; }
  std::span<const std::complex<Real>> spectrum() const { return vhat_; }
  double last_max_abs() const { return work_.last_max_abs; }

 private:
  void evaluate_b(int n, std::span<const Real> v, std::span<Real> b);

  DomainConfig config_;
  const VelocityFields& fields_;
  ExpRkOptions options_;
  std::unique_ptr<SpectralTransform<Real>> transform_;
  PhiMultipliers<Real> mult_;
  ExpWorkspace<Real> work_;
  std::vector<std::complex<Real>> vhat_;
  std::vector<Real> scratch_;
  std::vector<Real> u_par_, u_perp_, du_drho_;
  BEvaluator<Real> b_eval_;
  StepTiming timing_;
  int n_ = 0;
};

extern template class ExpRkSolver<double>;
extern template class ExpRkSolver<float>;

/// Runs n = 0..N_sigma-1, emitting planned snapshots. Throws InstabilityError
/// or BudgetExceeded.
RunReport run_exprk(const DomainConfig& config, const Field2D& v0,
                    const VelocityFields& fields, const ExpRkOptions& options,
                    Precision precision, const RunControl& control = {});

}  // namespace boomprop
