#include "boomprop/exprk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "boomprop/error.hpp"
#include "boomprop/phi.hpp"
#include "boomprop/weno5.hpp"

namespace boomprop {
namespace {

constexpr double kPi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename Real>
double guard_max_abs(std::span<const Real> v) {
  double m = 0.0;
  bool finite = true;
  const long n = static_cast<long>(v.size());
#pragma omp parallel for reduction(max : m) reduction(&& : finite) schedule(static)
  for (long i = 0; i < n; ++i) {
    const double x = static_cast<double>(v[static_cast<std::size_t>(i)]);
    finite = finite && std::isfinite(x);
    m = std::max(m, std::abs(x));
  }
  return finite ? m : std::numeric_limits<double>::infinity();
}

}  // namespace

double unit_roundoff(Precision precision) {
  return precision == Precision::f64 ? 0x1.0p-53 : 0x1.0p-24;
}

std::complex<double> multiplier_exponent(const DomainConfig& config, long j, long k,
                                         double eps) {
  const double xi = 2.0 * kPi * static_cast<double>(j) / config.rho_span();
  const double w = 2.0 * kPi * static_cast<double>(k) / config.theta_span();
  const std::complex<double> denom(eps / (4.0 * kPi), w);
  const std::complex<double> dispersion = -(xi * xi / (4.0 * kPi)) / denom;
  return config.d_sigma() * (dispersion - config.absorption * w * w);
}

template <typename Real>
PhiMultipliers<Real> build_multipliers(const DomainConfig& config, double machine_eps) {
  config.validate();
  PhiMultipliers<Real> m;
  m.n_rho = static_cast<std::size_t>(config.n_rho);
  m.n_theta = static_cast<std::size_t>(config.n_theta);
  m.d_sigma = config.d_sigma();
  m.eps = machine_eps;
  const std::size_t modes = m.n_theta / 2 + 1;
  const std::size_t total = m.n_rho * modes;
  m.e.resize(total);
  m.phi1.resize(total);
  m.phi2.resize(total);
  m.phi1_minus_phi2.resize(total);
  const long n = static_cast<long>(m.n_rho);
#pragma omp parallel for schedule(static)
  for (long r = 0; r < n; ++r) {
    const long j = r <= n / 2 ? r : r - n;
    for (std::size_t k = 0; k < modes; ++k) {
      const auto z = multiplier_exponent(config, j, static_cast<long>(k), machine_eps);
      const auto p1 = phi1(z);
      const auto p2 = phi2(z);
      const std::size_t idx = static_cast<std::size_t>(r) * modes + k;
      m.e[idx] = std::complex<Real>(std::exp(z));
      m.phi1[idx] = std::complex<Real>(p1);
      m.phi2[idx] = std::complex<Real>(p2);
      m.phi1_minus_phi2[idx] = std::complex<Real>(p1 - p2);
    }
  }
  return m;
}

template PhiMultipliers<double> build_multipliers<double>(const DomainConfig&, double);
template PhiMultipliers<float> build_multipliers<float>(const DomainConfig&, double);

template <typename Real>
ExpWorkspace<Real>::ExpWorkspace(std::size_t n_rho, std::size_t n_theta)
    : v(n_rho * n_theta),
      b(n_rho * n_theta),
      b1_hat(n_rho * (n_theta / 2 + 1)),
      b2_hat(n_rho * (n_theta / 2 + 1)),
      stage_hat(n_rho * (n_theta / 2 + 1)) {}

template struct ExpWorkspace<double>;
template struct ExpWorkspace<float>;

namespace {

// STEP 1 (+ the inverse transform that feeds it): b1_hat = F(b(s^n, V^n)).
template <typename Real>
void first_stage_rhs(std::span<const std::complex<Real>> vhat, SpectralTransform<Real>& transform,
                     const BEvaluator<Real>& b_eval, int n, ExpWorkspace<Real>& work,
                     StepTiming& t) {
  auto t0 = Clock::now();
  transform.inverse(vhat.data(), work.v.data());
  t.linear += seconds_since(t0);
  work.last_max_abs = guard_max_abs<Real>(work.v);

  t0 = Clock::now();
  b_eval(n, work.v, work.b);
  t.nonlinear += seconds_since(t0);

  t0 = Clock::now();
  transform.forward(work.b.data(), work.b1_hat.data());
  t.linear += seconds_since(t0);
}

}  // namespace

template <typename Real>
void exp_euler_step(std::span<std::complex<Real>> vhat, const PhiMultipliers<Real>& mult,
                    SpectralTransform<Real>& transform, const BEvaluator<Real>& b_eval, int n,
                    ExpWorkspace<Real>& work, StepTiming* timing) {
  StepTiming t;
  first_stage_rhs<Real>(vhat, transform, b_eval, n, work, t);
  const auto t0 = Clock::now();
  const Real ds = static_cast<Real>(mult.d_sigma);
  const long total = static_cast<long>(vhat.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < total; ++i) {
    vhat[i] = mult.e[i] * vhat[i] + ds * (mult.phi1[i] * work.b1_hat[i]);
  }
  t.linear += seconds_since(t0);
  if (timing) *timing = t;
}

template <typename Real>
void exprk22_step(std::span<std::complex<Real>> vhat, const PhiMultipliers<Real>& mult,
                  SpectralTransform<Real>& transform, const BEvaluator<Real>& b_eval, int n,
                  ExpWorkspace<Real>& work, StepTiming* timing) {
  StepTiming t;
  first_stage_rhs<Real>(vhat, transform, b_eval, n, work, t);
  const Real ds = static_cast<Real>(mult.d_sigma);
  const long total = static_cast<long>(vhat.size());

  // STEP 2: stage value, identical to the exponential Euler update.
  auto t0 = Clock::now();
  auto& stage = work.stage_hat;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < total; ++i) {
    stage[i] = mult.e[i] * vhat[i] + ds * (mult.phi1[i] * work.b1_hat[i]);
  }
  transform.inverse(stage.data(), work.v.data());
  t.linear += seconds_since(t0);

  // STEP 3
  t0 = Clock::now();
  b_eval(n + 1, work.v, work.b);
  t.nonlinear += seconds_since(t0);

  // STEP 4
  t0 = Clock::now();
  transform.forward(work.b.data(), work.b2_hat.data());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < total; ++i) {
    vhat[i] = mult.e[i] * vhat[i] +
              ds * (mult.phi1_minus_phi2[i] * work.b1_hat[i] + mult.phi2[i] * work.b2_hat[i]);
  }
  t.linear += seconds_since(t0);
  if (timing) *timing = t;
}

#define BOOMPROP_INSTANTIATE_STEPS(Real)                                                       \
  template void exp_euler_step<Real>(std::span<std::complex<Real>>, const PhiMultipliers<Real>&, \
                                     SpectralTransform<Real>&, const BEvaluator<Real>&, int,    \
                                     ExpWorkspace<Real>&, StepTiming*);                         \
  template void exprk22_step<Real>(std::span<std::complex<Real>>, const PhiMultipliers<Real>&,   \
                                   SpectralTransform<Real>&, const BEvaluator<Real>&, int,      \
                                   ExpWorkspace<Real>&, StepTiming*);
BOOMPROP_INSTANTIATE_STEPS(double)
BOOMPROP_INSTANTIATE_STEPS(float)
#undef BOOMPROP_INSTANTIATE_STEPS

template <typename Real>
ExpRkSolver<Real>::ExpRkSolver(const DomainConfig& config, const VelocityFields& fields,
                               ExpRkOptions options)
    : config_(config),
      fields_(fields),
      options_(options),
      work_(static_cast<std::size_t>(config.n_rho), static_cast<std::size_t>(config.n_theta)) {
  config_.validate();
  const auto nr = static_cast<std::size_t>(config_.n_rho);
  const auto nt = static_cast<std::size_t>(config_.n_theta);
  if (fields_.sigma_nodes() < static_cast<std::size_t>(config_.n_sigma) + 1 ||
      fields_.rho_nodes() < nr) {
    throw std::invalid_argument("ExpRkSolver: velocity fields do not cover the grid");
  }
  if (options_.machine_eps <= 0.0) {
    options_.machine_eps =
        unit_roundoff(std::is_same_v<Real, float> ? Precision::f32 : Precision::f64);
  }
  transform_ = std::make_unique<SpectralTransform<Real>>(nr, nt);
  mult_ = build_multipliers<Real>(config_, options_.machine_eps);
  vhat_.assign(nr * (nt / 2 + 1), {});
  scratch_.resize(nr * nt);
  u_par_.resize(nr);
  u_perp_.resize(nr);
  du_drho_.resize(nr);
  b_eval_ = [this](int n, std::span<const Real> v, std::span<Real> b) { evaluate_b(n, v, b); };
}

template <typename Real>
ExpRkSolver<Real>::~ExpRkSolver() = default;

template <typename Real>
void ExpRkSolver<Real>::evaluate_b(int n, std::span<const Real> v, std::span<Real> b) {
  const auto row = static_cast<std::size_t>(n);
  const std::size_t nr = u_par_.size();
  for (std::size_t j = 0; j < nr; ++j) {
    u_par_[j] = static_cast<Real>(fields_.u_par(row, j));
    u_perp_[j] = static_cast<Real>(fields_.u_perp(row, j));
    du_drho_[j] = static_cast<Real>(fields_.du_perp_drho(row, j));
  }
  weno5_b<Real>(v, nr, static_cast<std::size_t>(config_.n_theta), {u_par_, u_perp_, du_drho_},
                static_cast<Real>(config_.nonlinearity), static_cast<Real>(config_.d_rho()),
                static_cast<Real>(config_.d_theta()), b, scratch_);
}

template <typename Real>
void ExpRkSolver<Real>::set_initial(const Field2D& v0) {
  const auto nr = static_cast<std::size_t>(config_.n_rho);
  const auto nt = static_cast<std::size_t>(config_.n_theta);
  if (v0.rows() < nr || v0.cols() != nt) {
    throw std::invalid_argument("ExpRkSolver: initial field has wrong extents");
  }
  for (std::size_t j = 0; j < nr; ++j) {
    for (std::size_t k = 0; k < nt; ++k) work_.v[j * nt + k] = static_cast<Real>(v0(j, k));
  }
  transform_->forward(work_.v.data(), vhat_.data());
  transform_->reset_transform_count();
  n_ = 0;
}

template <typename Real>
void ExpRkSolver<Real>::step() {
  if (options_.scheme == ExpScheme::exprk22) {
    exprk22_step<Real>(vhat_, mult_, *transform_, b_eval_, n_, work_, &timing_);
  } else {
    exp_euler_step<Real>(vhat_, mult_, *transform_, b_eval_, n_, work_, &timing_);
  }
  const double sigma = n_ * config_.d_sigma();
  if (!std::isfinite(work_.last_max_abs) || work_.last_max_abs > options_.divergence_bound) {
    throw InstabilityError("max|V| = " + std::to_string(work_.last_max_abs) +
                               " beyond the divergence bound at sigma = " + std::to_string(sigma),
                           sigma, work_.last_max_abs);
  }
  ++n_;
}

template <typename Real>
Field2D ExpRkSolver<Real>::field() {
  const auto nr = static_cast<std::size_t>(config_.n_rho);
  const auto nt = static_cast<std::size_t>(config_.n_theta);
  std::vector<Real> phys(nr * nt);
  transform_->inverse(vhat_.data(), phys.data());
  Field2D out(nr, nt);
  for (std::size_t i = 0; i < phys.size(); ++i) out.values()[i] = static_cast<double>(phys[i]);
  return out;
}

template class ExpRkSolver<double>;
template class ExpRkSolver<float>;

namespace {

template <typename Real>
RunReport run_typed(const DomainConfig& config, const Field2D& v0, const VelocityFields& fields,
                    const ExpRkOptions& options, const RunControl& control) {
  ExpRkSolver<Real> solver(config, fields, options);
  solver.set_initial(v0);
  RunReport report;
  const double ds = config.d_sigma();
  auto emit = [&](int n) {
    if (control.sink && control.snapshot_steps.count(n)) control.sink(n, n * ds, solver.field());
  };
  emit(0);
  std::uint64_t transforms = 0;
  const auto start = Clock::now();
  for (int n = 0; n < config.n_sigma; ++n) {
    const auto t0 = Clock::now();
    const auto before = solver.transform_count();
    solver.step();
    transforms += solver.transform_count() - before;
    const auto& t = solver.last_timing();
    report.step_times.push_back({t.nonlinear, t.linear, seconds_since(t0)});
    report.max_abs = std::max(report.max_abs, solver.last_max_abs());
    ++report.steps;
    emit(n + 1);
    if (control.budget_seconds) {
      const double projected = seconds_since(start) / report.steps * config.n_sigma;
      if (projected > *control.budget_seconds) {
        throw BudgetExceeded("projected run time " + std::to_string(projected) +
                                 " s exceeds the budget",
                             projected);
      }
    }
  }
  report.wall_seconds = seconds_since(start);
  report.final_field = solver.field();
  const double final_max = max_abs(report.final_field.values());
  if (!std::isfinite(final_max) || final_max > options.divergence_bound) {
    throw InstabilityError("final field beyond the divergence bound", config.sigma_total,
                           final_max);
  }
  report.max_abs = std::max(report.max_abs, final_max);
  report.transforms = transforms;
  return report;
}

}  // namespace

RunReport run_exprk(const DomainConfig& config, const Field2D& v0, const VelocityFields& fields,
                    const ExpRkOptions& options, Precision precision,
                    const RunControl& control) {
  if (precision == Precision::f32) return run_typed<float>(config, v0, fields, options, control);
  return run_typed<double>(config, v0, fields, options, control);
}

}  // namespace boomprop
