#pragma once

#include <complex>

namespace boomprop {

/// phi1(z) = (e^z - 1)/z, phi2(z) = (e^z - 1 - z)/z^2.
///
/// Taylor series for |z| < kPhiSeriesRadius, closed form with an accurate
/// e^z - 1 above it.
inline constexpr double kPhiSeriesRadius = 1.0;

std::complex<double> phi1(std::complex<double> z);
std::complex<double> phi2(std::complex<double> z);

/// e^z - 1 without cancellation for small |z|.
std::complex<double> expm1(std::complex<double> z);

}  // namespace boomprop
