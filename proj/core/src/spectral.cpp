#include "boomprop/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace boomprop {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;
constexpr int kColumnBlock = 8;

template <typename Real>
struct Fftw;

template <>
struct Fftw<double> {
  using Plan = fftw_plan;
  using Cx = fftw_complex;
  static Cx* cx(std::complex<double>* p) { return reinterpret_cast<Cx*>(p); }
  static Plan r2c(int n, double* in, std::complex<double>* out) {
    return fftw_plan_dft_r2c_1d(n, in, cx(out), kPlanFlags);
  }
  static Plan c2r(int n, std::complex<double>* in, double* out) {
    return fftw_plan_dft_c2r_1d(n, cx(in), out, kPlanFlags);
  }
  static Plan many(int n, int howmany, std::complex<double>* data, int sign) {
    return fftw_plan_many_dft(1, &n, howmany, cx(data), nullptr, 1, n, cx(data), nullptr, 1, n,
                              sign, kPlanFlags);
  }
  static void exec_r2c(Plan p, double* in, std::complex<double>* out) {
    fftw_execute_dft_r2c(p, in, cx(out));
  }
  static void exec_c2r(Plan p, std::complex<double>* in, double* out) {
    fftw_execute_dft_c2r(p, cx(in), out);
  }
  static void exec_c2c(Plan p, std::complex<double>* data) {
    fftw_execute_dft(p, cx(data), cx(data));
  }
  static void destroy(Plan p) {
    if (p) fftw_destroy_plan(p);
  }
};

template <>
struct Fftw<float> {
  using Plan = fftwf_plan;
  using Cx = fftwf_complex;
  static Cx* cx(std::complex<float>* p) { return reinterpret_cast<Cx*>(p); }
  static Plan r2c(int n, float* in, std::complex<float>* out) {
    return fftwf_plan_dft_r2c_1d(n, in, cx(out), kPlanFlags);
  }
  static Plan c2r(int n, std::complex<float>* in, float* out) {
    return fftwf_plan_dft_c2r_1d(n, cx(in), out, kPlanFlags);
  }
  static Plan many(int n, int howmany, std::complex<float>* data, int sign) {
    return fftwf_plan_many_dft(1, &n, howmany, cx(data), nullptr, 1, n, cx(data), nullptr, 1, n,
                               sign, kPlanFlags);
  }
  static void exec_r2c(Plan p, float* in, std::complex<float>* out) {
    fftwf_execute_dft_r2c(p, in, cx(out));
  }
  static void exec_c2r(Plan p, std::complex<float>* in, float* out) {
    fftwf_execute_dft_c2r(p, cx(in), out);
  }
  static void exec_c2c(Plan p, std::complex<float>* data) {
    fftwf_execute_dft(p, cx(data), cx(data));
  }
  static void destroy(Plan p) {
    if (p) fftwf_destroy_plan(p);
  }
};

}  // namespace

template <typename Real>
struct SpectralTransform<Real>::Plans {
  using Api = Fftw<Real>;
  typename Api::Plan row_forward = nullptr;
  typename Api::Plan row_inverse = nullptr;
  typename Api::Plan block_forward = nullptr;
  typename Api::Plan block_inverse = nullptr;
  typename Api::Plan tail_forward = nullptr;
  typename Api::Plan tail_inverse = nullptr;
  int tail = 0;
  std::vector<std::complex<Real>> work;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    for (auto p : {row_forward, row_inverse, block_forward, block_inverse, tail_forward,
                   tail_inverse}) {
      Api::destroy(p);
    }
  }
};

template <typename Real>
SpectralTransform<Real>::SpectralTransform(std::size_t n_rho, std::size_t n_theta)
    : n_rho_(n_rho), n_theta_(n_theta), plans_(std::make_unique<Plans>()) {
  if (n_rho < 1 || n_theta < 2) throw std::invalid_argument("SpectralTransform: bad extents");
  using Api = Fftw<Real>;
  const int nr = static_cast<int>(n_rho);
  const int nt = static_cast<int>(n_theta);
  const std::size_t modes = theta_modes();
  plans_->tail = static_cast<int>(modes % kColumnBlock);
  plans_->work.resize(n_rho * modes);

  std::vector<Real> real_row(n_theta);
  std::vector<std::complex<Real>> cx_row(modes);
  std::vector<std::complex<Real>> block(n_rho * kColumnBlock);

  std::lock_guard lock(planner_mutex());
  plans_->row_forward = Api::r2c(nt, real_row.data(), cx_row.data());
  plans_->row_inverse = Api::c2r(nt, cx_row.data(), real_row.data());
  plans_->block_forward = Api::many(nr, kColumnBlock, block.data(), FFTW_FORWARD);
  plans_->block_inverse = Api::many(nr, kColumnBlock, block.data(), FFTW_BACKWARD);
  if (plans_->tail > 0) {
    plans_->tail_forward = Api::many(nr, plans_->tail, block.data(), FFTW_FORWARD);
    plans_->tail_inverse = Api::many(nr, plans_->tail, block.data(), FFTW_BACKWARD);
  }
  if (!plans_->row_forward || !plans_->row_inverse || !plans_->block_forward ||
      !plans_->block_inverse || (plans_->tail > 0 && !plans_->tail_forward)) {
    throw std::runtime_error("SpectralTransform: FFTW planning failed");
  }
}

template <typename Real>
SpectralTransform<Real>::~SpectralTransform() = default;

template <typename Real>
void SpectralTransform<Real>::columns(Complex* spectral, int sign) {
  using Api = Fftw<Real>;
  const std::size_t modes = theta_modes();
  const std::size_t nr = n_rho_;
  const long blocks = static_cast<long>((modes + kColumnBlock - 1) / kColumnBlock);
  auto* plans = plans_.get();

#pragma omp parallel
  {
    std::vector<Complex> scratch(nr * kColumnBlock);
#pragma omp for schedule(static)
    for (long blk = 0; blk < blocks; ++blk) {
      const std::size_t c0 = static_cast<std::size_t>(blk) * kColumnBlock;
      const std::size_t width = std::min<std::size_t>(kColumnBlock, modes - c0);
      for (std::size_t r = 0; r < nr; ++r) {
        const Complex* src = spectral + r * modes + c0;
        for (std::size_t b = 0; b < width; ++b) scratch[b * nr + r] = src[b];
      }
      const bool full = width == kColumnBlock;
      auto plan = sign == FFTW_FORWARD ? (full ? plans->block_forward : plans->tail_forward)
                                       : (full ? plans->block_inverse : plans->tail_inverse);
      Api::exec_c2c(plan, scratch.data());
      for (std::size_t r = 0; r < nr; ++r) {
        Complex* dst = spectral + r * modes + c0;
        for (std::size_t b = 0; b < width; ++b) dst[b] = scratch[b * nr + r];
      }
    }
  }
}

template <typename Real>
void SpectralTransform<Real>::forward_rows(const Real* physical, Complex* spectral) {
  using Api = Fftw<Real>;
  const std::size_t modes = theta_modes();
  const long rows = static_cast<long>(n_rho_);
  const Real scale = Real(1) / static_cast<Real>(n_theta_);
  auto plan = plans_->row_forward;
#pragma omp parallel for schedule(static)
  for (long r = 0; r < rows; ++r) {
    Complex* out = spectral + static_cast<std::size_t>(r) * modes;
    Api::exec_r2c(plan, const_cast<Real*>(physical + static_cast<std::size_t>(r) * n_theta_),
                  out);
    for (std::size_t k = 0; k < modes; ++k) out[k] *= scale;
  }
}

template <typename Real>
void SpectralTransform<Real>::inverse_rows(const Complex* spectral, Real* physical) {
  using Api = Fftw<Real>;
  const std::size_t modes = theta_modes();
  const long rows = static_cast<long>(n_rho_);
  auto plan = plans_->row_inverse;
#pragma omp parallel
  {
    std::vector<Complex> row(modes);
#pragma omp for schedule(static)
    for (long r = 0; r < rows; ++r) {
      const Complex* in = spectral + static_cast<std::size_t>(r) * modes;
      std::copy(in, in + modes, row.begin());
      Api::exec_c2r(plan, row.data(), physical + static_cast<std::size_t>(r) * n_theta_);
    }
  }
}

template <typename Real>
void SpectralTransform<Real>::forward(const Real* physical, Complex* spectral) {
  forward_rows(physical, spectral);
  columns(spectral, FFTW_FORWARD);
  const Real scale = Real(1) / static_cast<Real>(n_rho_);
  const long total = static_cast<long>(n_rho_ * theta_modes());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < total; ++i) spectral[i] *= scale;
  ++transforms_;
}

template <typename Real>
void SpectralTransform<Real>::inverse(const Complex* spectral, Real* physical) {
  using Api = Fftw<Real>;
  auto& work = plans_->work;
  std::copy(spectral, spectral + work.size(), work.begin());
  columns(work.data(), FFTW_BACKWARD);
  const std::size_t modes = theta_modes();
  const long rows = static_cast<long>(n_rho_);
  auto plan = plans_->row_inverse;
#pragma omp parallel for schedule(static)
  for (long r = 0; r < rows; ++r) {
    Api::exec_c2r(plan, work.data() + static_cast<std::size_t>(r) * modes,
                  physical + static_cast<std::size_t>(r) * n_theta_);
  }
  ++transforms_;
}

template class SpectralTransform<double>;
template class SpectralTransform<float>;

template <typename Real>
SpectralField2D<Real> to_spectral(const BasicField2D<Real>& field) {
  SpectralField2D<Real> out(field.rows(), field.cols());
  SpectralTransform<Real> transform(field.rows(), field.cols());
  transform.forward(field.data(), out.data());
  return out;
}

template <typename Real>
BasicField2D<Real> to_physical(const SpectralField2D<Real>& spectral) {
  BasicField2D<Real> out(spectral.n_rho(), spectral.n_theta());
  SpectralTransform<Real> transform(spectral.n_rho(), spectral.n_theta());
  transform.inverse(spectral.data(), out.data());
  return out;
}

template SpectralField2D<double> to_spectral(const BasicField2D<double>&);
template SpectralField2D<float> to_spectral(const BasicField2D<float>&);
template BasicField2D<double> to_physical(const SpectralField2D<double>&);
template BasicField2D<float> to_physical(const SpectralField2D<float>&);

}  // namespace boomprop
