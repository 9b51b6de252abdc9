#include "boomprop/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boomprop {

double l2_norm(const Field2D& field, double d_rho, double d_theta) {
  double sum = 0.0;
  for (double u : field.values()) {
    if (!std::isfinite(u)) throw std::domain_error("l2_norm: non-finite field entry");
    sum += u * u;
  }
  return std::sqrt(d_rho * d_theta * sum);
}

double relative_error(const Field2D& ref, const Field2D& num, double d_rho, double d_theta) {
  if (ref.rows() != num.rows() || ref.cols() != num.cols()) {
    throw std::invalid_argument("relative_error: extents differ");
  }
  const double ref_norm = l2_norm(ref, d_rho, d_theta);
  if (ref_norm == 0.0) throw std::domain_error("relative_error: reference norm is zero");
  Field2D diff(ref.rows(), ref.cols());
  auto out = diff.values();
  auto a = ref.values();
  auto b = num.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return l2_norm(diff, d_rho, d_theta) / ref_norm;
}

bool node_range(double x0, double dx, std::size_t count, Interval interval,
                std::size_t& first, std::size_t& last) {
  // Nodes within 1e-9 cells of an interval end count as inside.
  constexpr double tol = 1e-9;
  const double lo = std::ceil((interval.lo - x0) / dx - tol);
  const double hi = std::floor((interval.hi - x0) / dx + tol);
  const double lo_c = std::max(lo, 0.0);
  const double hi_c = std::min(hi, static_cast<double>(count) - 1.0);
  if (count == 0 || lo_c > hi_c) return false;
  first = static_cast<std::size_t>(lo_c);
  last = static_cast<std::size_t>(hi_c);
  return true;
}

Region extract_region(const Field2D& field, const FieldGeometry& geometry,
                      Interval roi_rho, Interval roi_theta) {
  std::size_t j0 = 0, j1 = 0, k0 = 0, k1 = 0;
  if (!node_range(geometry.rho0, geometry.d_rho, field.rows(), roi_rho, j0, j1) ||
      !node_range(geometry.theta0, geometry.d_theta, field.cols(), roi_theta, k0, k1)) {
    throw std::invalid_argument("extract_region: region contains no grid node");
  }
  Region region;
  region.rho_begin = j0;
  region.theta_begin = k0;
  region.geometry = {geometry.rho0 + j0 * geometry.d_rho,
                     geometry.theta0 + k0 * geometry.d_theta, geometry.d_rho,
                     geometry.d_theta};
  region.field = Field2D(j1 - j0 + 1, k1 - k0 + 1);
  for (std::size_t j = j0; j <= j1; ++j) {
    auto src = field.row(j).subspan(k0, k1 - k0 + 1);
    std::copy(src.begin(), src.end(), region.field.row(j - j0).begin());
  }
  return region;
}

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace boomprop
