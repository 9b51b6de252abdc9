#include "boomprop/phi.hpp"

#include <cmath>

namespace boomprop {
namespace {

// |z|^25 / 26! < 3e-27 on the series disc.
constexpr int kSeriesTerms = 25;

// sum_{k>=0} z^k / (k + offset)!
std::complex<double> series(std::complex<double> z, int offset) {
  double inv_fact[kSeriesTerms];
  double f = 1.0;
  for (int i = 1; i <= offset; ++i) f *= i;
  for (int k = 0; k < kSeriesTerms; ++k) {
    inv_fact[k] = 1.0 / f;
    f *= static_cast<double>(k + offset + 1);
  }
  std::complex<double> acc = inv_fact[kSeriesTerms - 1];
  for (int k = kSeriesTerms - 2; k >= 0; --k) acc = acc * z + inv_fact[k];
  return acc;
}

}  // namespace

std::complex<double> expm1(std::complex<double> z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

std::complex<double> phi1(std::complex<double> z) {
  if (std::abs(z) < kPhiSeriesRadius) return series(z, 1);
  return expm1(z) / z;
}

std::complex<double> phi2(std::complex<double> z) {
  if (std::abs(z) < kPhiSeriesRadius) return series(z, 2);
  return (expm1(z) - z) / (z * z);
}

}  // namespace boomprop
