#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>

#include "boomprop/field.hpp"

namespace boomprop {

/// Discrete Fourier transforms on a doubly periodic (rho, theta) grid.
///
/// The 2-D transform is a real-to-complex pass over every theta row followed
/// by complex passes over blocks of rho columns. Each 1-D transform uses a
/// fixed plan regardless of the OpenMP team size, so results are bitwise
/// independent of the thread count.
///
/// Forward transforms are scaled by 1/N so that the output are Fourier-series
/// coefficients; inverse transforms are unscaled.
template <typename Real>
class SpectralTransform {
 public:
  using Complex = std::complex<Real>;

  SpectralTransform(std::size_t n_rho, std::size_t n_theta);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  std::size_t n_rho() const { return n_rho_; }
  std::size_t n_theta() const { return n_theta_; }
  std::size_t theta_modes() const { return n_theta_ / 2 + 1; }

  /// Full 2-D transforms. `physical` holds n_rho*n_theta values; `spectral`
  /// holds n_rho*theta_modes() coefficients (layout of SpectralField2D).
  void forward(const Real* physical, Complex* spectral);
  void inverse(const Complex* spectral, Real* physical);

  /// Theta-only transforms of every row (used by the splitting solver).
  void forward_rows(const Real* physical, Complex* spectral);
  void inverse_rows(const Complex* spectral, Real* physical);

  /// Number of 2-D transforms (forward + inverse) executed so far.
  std::uint64_t transform_count() const { return transforms_; }
  void reset_transform_count() { transforms_ = 0; }

 private:
  struct Plans;
  void columns(Complex* spectral, int sign);

  std::size_t n_rho_;
  std::size_t n_theta_;
  std::unique_ptr<Plans> plans_;
  std::uint64_t transforms_ = 0;
};

extern template class SpectralTransform<double>;
extern template class SpectralTransform<float>;

template <typename Real>
SpectralField2D<Real> to_spectral(const BasicField2D<Real>& field);

template <typename Real>
BasicField2D<Real> to_physical(const SpectralField2D<Real>& spectral);

}  // namespace boomprop
