#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "boomprop/domain.hpp"

namespace boomprop {

/// Real grid function stored row-major: rows are the rho index j, columns the
/// theta index k, so each rho-row is a contiguous theta trace.
///
/// The velocity fields reuse the same container with rows indexing sigma and
/// columns indexing rho.
template <typename Real>
class BasicField2D {
 public:
  BasicField2D() = default;
  BasicField2D(std::size_t rows, std::size_t cols, Real fill = Real(0))
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t n_rho() const { return rows_; }
  std::size_t n_theta() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  Real& operator()(std::size_t j, std::size_t k) {
    assert(j < rows_ && k < cols_);
    return values_[j * cols_ + k];
  }
  Real operator()(std::size_t j, std::size_t k) const {
    assert(j < rows_ && k < cols_);
    return values_[j * cols_ + k];
  }

  std::span<Real> row(std::size_t j) { return {values_.data() + j * cols_, cols_}; }
  std::span<const Real> row(std::size_t j) const {
    return {values_.data() + j * cols_, cols_};
  }

  std::span<Real> values() { return values_; }
  std::span<const Real> values() const { return values_; }
  Real* data() { return values_.data(); }
  const Real* data() const { return values_.data(); }

  bool operator==(const BasicField2D&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> values_;
};

using Field2D = BasicField2D<double>;

/// Fourier coefficients of a real field on a doubly periodic grid.
///
/// Only the non-negative theta modes k = 0..n_theta/2 are stored; negative k
/// follow from conjugate symmetry. Storage row r holds the rho mode
/// j = r for r <= n_rho/2 and j = r - n_rho otherwise.
template <typename Real>
class SpectralField2D {
 public:
  using Complex = std::complex<Real>;

  SpectralField2D() = default;
  SpectralField2D(std::size_t n_rho, std::size_t n_theta)
      : n_rho_(n_rho), n_theta_(n_theta), modes_(n_theta / 2 + 1),
        coeffs_(n_rho * (n_theta / 2 + 1)) {}

  std::size_t n_rho() const { return n_rho_; }
  std::size_t n_theta() const { return n_theta_; }
  std::size_t theta_modes() const { return modes_; }
  std::size_t size() const { return coeffs_.size(); }

  Complex* data() { return coeffs_.data(); }
  const Complex* data() const { return coeffs_.data(); }
  std::span<Complex> values() { return coeffs_; }
  std::span<const Complex> values() const { return coeffs_; }

  /// Storage access (row r, non-negative theta mode k).
  Complex& stored(std::size_t r, std::size_t k) { return coeffs_[r * modes_ + k]; }
  const Complex& stored(std::size_t r, std::size_t k) const { return coeffs_[r * modes_ + k]; }

  /// Coefficient of the signed mode pair (j, k).
  Complex at(long j, long k) const {
    if (k < 0) return std::conj(at(-j, -k));
    const long n = static_cast<long>(n_rho_);
    const long r = ((j % n) + n) % n;
    return coeffs_[static_cast<std::size_t>(r) * modes_ + static_cast<std::size_t>(k)];
  }

  /// Signed rho mode of storage row r.
  long rho_mode(std::size_t r) const {
    const long n = static_cast<long>(n_rho_);
    const long rr = static_cast<long>(r);
    return rr <= n / 2 ? rr : rr - n;
  }

 private:
  std::size_t n_rho_ = 0;
  std::size_t n_theta_ = 0;
  std::size_t modes_ = 0;
  std::vector<Complex> coeffs_;
};

/// Origin and spacing of a Field2D on the (rho, theta) grid.
struct FieldGeometry {
  double rho0 = 0.0;
  double theta0 = 0.0;
  double d_rho = 1.0;
  double d_theta = 1.0;
};

/// sqrt(d_rho * d_theta * sum u^2). Throws std::domain_error on non-finite entries.
double l2_norm(const Field2D& field, double d_rho, double d_theta);

/// ||ref - num|| / ||ref||. Throws on extent mismatch or zero reference norm.
double relative_error(const Field2D& ref, const Field2D& num, double d_rho, double d_theta);

struct Region {
  Field2D field;
  std::size_t rho_begin = 0;
  std::size_t theta_begin = 0;
  FieldGeometry geometry;
};

/// Sub-grid of nodes inside the closed intervals. Throws when either axis has
/// no node inside its interval.
Region extract_region(const Field2D& field, const FieldGeometry& geometry,
                      Interval roi_rho, Interval roi_theta);

/// Index range [first, last] of nodes x0 + i*dx (i < count) inside [lo, hi].
/// Returns false when the intersection is empty.
bool node_range(double x0, double dx, std::size_t count, Interval interval,
                std::size_t& first, std::size_t& last);

double max_abs(std::span<const double> values);

}  // namespace boomprop
