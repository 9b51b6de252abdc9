#include "boomprop/splitting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "boomprop/error.hpp"

namespace boomprop {
namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Second difference in rho at every (j, k) with mirrored ghosts V_{-1} = V_1,
// V_{N+1} = V_{N-1}; written transposed as out[k * rows + j].
void second_difference_transposed(const Field2D& v, double inv_drho2, std::vector<double>& out) {
  const std::size_t rows = v.rows();
  const std::size_t cols = v.cols();
  out.resize(rows * cols);
  for (std::size_t j = 0; j < rows; ++j) {
    const std::size_t jm = j == 0 ? 1 : j - 1;
    const std::size_t jp = j + 1 == rows ? rows - 2 : j + 1;
    const double* a = v.row(jm).data();
    const double* c = v.row(j).data();
    const double* b = v.row(jp).data();
    for (std::size_t k = 0; k < cols; ++k) {
      out[k * rows + j] = (a[k] - 2.0 * c[k] + b[k]) * inv_drho2;
    }
  }
}

// Constant-coefficient tridiagonal system (1 + 2a) x_j - a (x_{j-1} + x_{j+1}) = r_j
// with mirrored ends, factored once.
class NeumannTridiagonal {
 public:
  NeumannTridiagonal(std::size_t n, double a) : a_(a), c_(n), inv_(n) {
    const double diag = 1.0 + 2.0 * a;
    // Strict dominance keeps the elimination pivots away from zero.
    if (!(diag > 2.0 * std::abs(a))) {
      throw std::runtime_error("diffraction system is not diagonally dominant");
    }
    // Row 0: diag x0 - 2a x1; row n-1: -2a x_{n-2} + diag x_{n-1}.
    double upper = n > 1 ? -2.0 * a : 0.0;
    double denom = diag;
    inv_[0] = 1.0 / denom;
    c_[0] = upper * inv_[0];
    for (std::size_t j = 1; j < n; ++j) {
      const double lower = j + 1 == n ? -2.0 * a : -a;
      upper = -a;
      denom = diag - lower * c_[j - 1];
      inv_[j] = 1.0 / denom;
      c_[j] = upper * inv_[j];
    }
  }

  // Solves in place; rhs becomes x.
  void solve(std::vector<double>& rhs) const {
    const std::size_t n = rhs.size();
    rhs[0] *= inv_[0];
    for (std::size_t j = 1; j < n; ++j) {
      const double lower = j + 1 == n ? -2.0 * a_ : -a_;
      rhs[j] = (rhs[j] - lower * rhs[j - 1]) * inv_[j];
    }
    for (std::size_t j = n - 1; j-- > 0;) rhs[j] -= c_[j] * rhs[j + 1];
  }

 private:
  double a_;
  std::vector<double> c_;
  std::vector<double> inv_;
};

void check_state(const Field2D& v, double sigma, double bound) {
  double m = 0.0;
  for (double x : v.values()) {
    if (!std::isfinite(x)) {
      throw InstabilityError("non-finite value at sigma = " + std::to_string(sigma), sigma,
                             std::numeric_limits<double>::infinity());
    }
    m = std::max(m, std::abs(x));
  }
  if (m > bound) {
    throw InstabilityError("max|V| = " + std::to_string(m) + " exceeds divergence bound at sigma = " +
                               std::to_string(sigma),
                           sigma, m);
  }
}

}  // namespace

Field2D step_diffraction_cn(const Field2D& v, double d_sigma, double d_rho, double d_theta,
                            DiffractionSum mode) {
  const std::size_t rows = v.rows();
  const std::size_t cols = v.cols();
  if (rows < 2) throw std::invalid_argument("step_diffraction_cn: need at least 2 rho nodes");
  const double inv_drho2 = 1.0 / (d_rho * d_rho);
  // dV = c * (trapezoid sum of old + new second differences), c = d_sigma d_theta / (8 pi).
  const double c = d_sigma * d_theta / (8.0 * kPi);
  const NeumannTridiagonal system(rows, 0.5 * c * inv_drho2);

  std::vector<double> d_old;
  second_difference_transposed(v, inv_drho2, d_old);
  std::vector<double> d_sum(rows * cols);  // old + new second differences, transposed
  std::vector<double> partial(rows, 0.0);  // weighted sum over l < k of d_sum
  std::vector<double> x(rows);
  Field2D out(rows, cols);

  auto store_column = [&](std::size_t k) {
    double* ds = d_sum.data() + k * rows;
    const double* dold = d_old.data() + k * rows;
    for (std::size_t j = 0; j < rows; ++j) {
      out(j, k) = x[j];
      const std::size_t jm = j == 0 ? 1 : j - 1;
      const std::size_t jp = j + 1 == rows ? rows - 2 : j + 1;
      ds[j] = dold[j] + (x[jm] - 2.0 * x[j] + x[jp]) * inv_drho2;
    }
  };

  // k = 0: the starred sum has zero width.
  for (std::size_t j = 0; j < rows; ++j) x[j] = v(j, 0);
  store_column(0);

  for (std::size_t k = 1; k < cols; ++k) {
    if (mode == DiffractionSum::running) {
      const double w = k == 1 ? 0.5 : 1.0;
      const double* prev = d_sum.data() + (k - 1) * rows;
      for (std::size_t j = 0; j < rows; ++j) partial[j] += w * prev[j];
    } else {
      const double* first = d_sum.data();
      for (std::size_t j = 0; j < rows; ++j) partial[j] = 0.5 * first[j];
      for (std::size_t l = 1; l < k; ++l) {
        const double* dl = d_sum.data() + l * rows;
        for (std::size_t j = 0; j < rows; ++j) partial[j] += dl[j];
      }
    }
    const double* dold = d_old.data() + k * rows;
    for (std::size_t j = 0; j < rows; ++j) {
      x[j] = v(j, k) + c * (partial[j] + 0.5 * dold[j]);
    }
    system.solve(x);
    store_column(k);
  }
  return out;
}

double godunov_flux(double u_left, double u_right, double b) {
  const double half_b = 0.5 * b;
  if (u_left <= u_right) {
    // Minimum of the concave -B/2 u^2 over [u_left, u_right] sits at an endpoint.
    return -half_b * std::max(u_left * u_left, u_right * u_right);
  }
  // Maximum over [u_right, u_left]: 0 when the interval straddles zero.
  if (u_right <= 0.0 && u_left >= 0.0) return 0.0;
  return -half_b * std::min(u_left * u_left, u_right * u_right);
}

Field2D step_burgers_godunov(const Field2D& v, double b, double d_sigma, double d_theta) {
  const std::size_t rows = v.rows();
  const std::size_t cols = v.cols();
  const double ratio = d_sigma / d_theta;
  Field2D out(rows, cols);
  const long nrows = static_cast<long>(rows);
#pragma omp parallel
  {
    std::vector<double> flux(cols);  // flux[k] at k + 1/2
#pragma omp for schedule(static)
    for (long jj = 0; jj < nrows; ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      auto in = v.row(j);
      for (std::size_t k = 0; k < cols; ++k) {
        flux[k] = godunov_flux(in[k], in[k + 1 == cols ? 0 : k + 1], b);
      }
      auto dst = out.row(j);
      for (std::size_t k = 0; k < cols; ++k) {
        const double left = flux[k == 0 ? cols - 1 : k - 1];
        dst[k] = in[k] - ratio * (flux[k] - left);
      }
    }
  }
  return out;
}

Field2D step_axial_absorption_spectral(const Field2D& v, std::span<const double> u_par,
                                       double a, double d_sigma, double theta_span,
                                       SpectralTransform<double>& transform) {
  const std::size_t rows = v.rows();
  const std::size_t cols = v.cols();
  if (transform.n_rho() != rows || transform.n_theta() != cols || u_par.size() < rows) {
    throw std::invalid_argument("step_axial_absorption_spectral: extent mismatch");
  }
  const std::size_t modes = transform.theta_modes();
  std::vector<std::complex<double>> spec(rows * modes);
  transform.forward_rows(v.data(), spec.data());
  const long nrows = static_cast<long>(rows);
#pragma omp parallel for schedule(static)
  for (long jj = 0; jj < nrows; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    // Left-endpoint quadrature of the sigma-integral of U_par.
    const double shift = 2.0 * kPi * u_par[j] * d_sigma;
    std::complex<double>* row = spec.data() + j * modes;
    for (std::size_t m = 0; m < modes; ++m) {
      const double w = 2.0 * kPi * static_cast<double>(m) / theta_span;
      row[m] *= std::exp(std::complex<double>(-a * w * w * d_sigma, w * shift));
    }
  }
  Field2D out(rows, cols);
  transform.inverse_rows(spec.data(), out.data());
  return out;
}

Field2D step_axial_absorption_spectral(const Field2D& v, std::span<const double> u_par,
                                       double a, double d_sigma, double theta_span) {
  SpectralTransform<double> transform(v.rows(), v.cols());
  return step_axial_absorption_spectral(v, u_par, a, d_sigma, theta_span, transform);
}

Field2D step_transverse_lw(const Field2D& v, std::span<const double> u_perp,
                           std::span<const double> du_perp_dsigma,
                           std::span<const double> du_perp_drho, double d_sigma,
                           double d_rho) {
  const std::size_t rows = v.rows();
  const std::size_t cols = v.cols();
  if (rows < 2 || u_perp.size() < rows || du_perp_dsigma.size() < rows ||
      du_perp_drho.size() < rows) {
    throw std::invalid_argument("step_transverse_lw: extent mismatch");
  }
  Field2D out(rows, cols);
  const double half_ds = 0.5 * d_sigma;
  const long nrows = static_cast<long>(rows);
#pragma omp parallel for schedule(static)
  for (long jj = 0; jj < nrows; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const std::size_t jm = j == 0 ? 1 : j - 1;
    const std::size_t jp = j + 1 == rows ? rows - 2 : j + 1;
    const double u = u_perp[j];
    // Coefficients of the centred first and second differences.
    const double first = -u - half_ds * du_perp_dsigma[j] + half_ds * u * du_perp_drho[j];
    const double second = half_ds * u * u;
    const double* a = v.row(jm).data();
    const double* c = v.row(j).data();
    const double* b = v.row(jp).data();
    double* dst = out.row(j).data();
    for (std::size_t k = 0; k < cols; ++k) {
      const double d1 = (b[k] - a[k]) / (2.0 * d_rho);
      const double d2 = (b[k] - 2.0 * c[k] + a[k]) / (d_rho * d_rho);
      dst[k] = c[k] + d_sigma * (first * d1 + second * d2);
    }
  }
  return out;
}

CflReport check_cfl_splitting(const DomainConfig& config, double v_max_bound,
                              double u_perp_max) {
  CflReport r;
  const double ds = config.d_sigma();
  r.burgers_lhs = config.nonlinearity * v_max_bound * ds;
  r.burgers_rhs = config.d_theta();
  r.transverse_lhs = u_perp_max * ds;
  r.transverse_rhs = config.d_rho();
  const double inf = std::numeric_limits<double>::infinity();
  r.n_theta_limit = r.burgers_lhs > 0 ? config.theta_span() / r.burgers_lhs : inf;
  r.n_rho_limit = r.transverse_lhs > 0 ? config.rho_span() / r.transverse_lhs : inf;
  return r;
}

SplittingSolver::SplittingSolver(const DomainConfig& config, const VelocityFields& fields,
                                 SplittingOptions options)
    : config_(config), fields_(fields), options_(options) {
  config_.validate();
  const auto rows = static_cast<std::size_t>(config_.n_rho) + 1;
  if (fields_.sigma_nodes() < static_cast<std::size_t>(config_.n_sigma) ||
      fields_.rho_nodes() < rows) {
    throw std::invalid_argument("SplittingSolver: velocity fields do not cover the grid");
  }
  transform_ = std::make_unique<SpectralTransform<double>>(
      rows, static_cast<std::size_t>(config_.n_theta));
}

SplittingState SplittingSolver::lie_step(const SplittingState& state) {
  const auto n = static_cast<std::size_t>(state.sigma_index);
  const double ds = config_.d_sigma();
  auto t0 = Clock::now();
  Field2D v = step_diffraction_cn(state.v, ds, config_.d_rho(), config_.d_theta(),
                                  options_.diffraction);
  timing_.diffraction = seconds_since(t0);

  t0 = Clock::now();
  v = step_burgers_godunov(v, config_.nonlinearity, ds, config_.d_theta());
  timing_.burgers = seconds_since(t0);

  t0 = Clock::now();
  v = step_axial_absorption_spectral(v, fields_.u_par.row(n), config_.absorption, ds,
                                     config_.theta_span(), *transform_);
  timing_.axial = seconds_since(t0);

  t0 = Clock::now();
  v = step_transverse_lw(v, fields_.u_perp.row(n), fields_.du_perp_dsigma.row(n),
                         fields_.du_perp_drho.row(n), ds, config_.d_rho());
  timing_.transverse = seconds_since(t0);

  const int next = state.sigma_index + 1;
  check_state(v, next * ds, options_.divergence_bound);
  return {std::move(v), next};
}

RunReport run_splitting(const DomainConfig& config, const Field2D& v0,
                        const VelocityFields& fields, const SplittingOptions& options,
                        const RunControl& control) {
  SplittingSolver solver(config, fields, options);
  const auto rows = static_cast<std::size_t>(config.n_rho) + 1;
  if (v0.rows() != rows || v0.cols() != static_cast<std::size_t>(config.n_theta)) {
    throw std::invalid_argument("run_splitting: initial field has wrong extents");
  }
  RunReport report;
  SplittingState state{v0, 0};
  report.max_abs = max_abs(v0.values());
  const double ds = config.d_sigma();
  auto emit = [&](const SplittingState& s) {
    if (control.sink && control.snapshot_steps.count(s.sigma_index)) {
      control.sink(s.sigma_index, s.sigma_index * ds, s.v);
    }
  };
  emit(state);
  const auto start = Clock::now();
  for (int n = 0; n < config.n_sigma; ++n) {
    const auto t0 = Clock::now();
    state = solver.lie_step(state);
    const auto& t = solver.last_timing();
    report.step_times.push_back(
        {t.burgers + t.transverse, t.diffraction + t.axial, seconds_since(t0)});
    report.max_abs = std::max(report.max_abs, max_abs(state.v.values()));
    emit(state);
    ++report.steps;
    if (control.budget_seconds) {
      const double elapsed = seconds_since(start);
      const double projected = elapsed / report.steps * config.n_sigma;
      if (projected > *control.budget_seconds) {
        throw BudgetExceeded("projected run time " + std::to_string(projected) +
                                 " s exceeds the budget",
                             projected);
      }
    }
  }
  report.wall_seconds = seconds_since(start);
  report.final_field = std::move(state.v);
  return report;
}

}  // namespace boomprop
