#include "boomprop/weno5.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace boomprop {

template <typename Real>
void weno5_b(std::span<const Real> v, std::size_t n_rho, std::size_t n_theta,
             const WenoCoefficients<Real>& coeffs, Real b_coef, Real d_rho, Real d_theta,
             std::span<Real> b, std::span<Real> scratch) {
  const std::size_t total = n_rho * n_theta;
  if (v.size() < total || b.size() < total || scratch.size() < total ||
      coeffs.u_par.size() < n_rho || coeffs.u_perp.size() < n_rho ||
      coeffs.du_perp_drho.size() < n_rho || n_rho < 5 || n_theta < 5) {
    throw std::invalid_argument("weno5_b: extent mismatch or grid smaller than the stencil");
  }
  const Real two_pi = Real(2.0 * std::numbers::pi);
  const long rows = static_cast<long>(n_rho);

  // Global Lax-Friedrichs speeds. max is exact in any order, so the result
  // does not depend on the thread count.
  Real alpha_theta = 0;
  Real alpha_rho = 0;
#pragma omp parallel for reduction(max : alpha_theta, alpha_rho) schedule(static)
  for (long jj = 0; jj < rows; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const Real c = -two_pi * coeffs.u_par[j];
    const Real* row = v.data() + j * n_theta;
    Real local = 0;
    for (std::size_t k = 0; k < n_theta; ++k) local = std::max(local, std::abs(c - b_coef * row[k]));
    alpha_theta = std::max(alpha_theta, local);
    alpha_rho = std::max(alpha_rho, std::abs(coeffs.u_perp[j]));
  }

  const Real half = Real(0.5);
  const Real inv_dtheta = Real(1) / d_theta;
  const Real inv_drho = Real(1) / d_rho;
  const std::size_t nt = n_theta;

  // Theta direction, one row at a time; flux -2 pi U_par V - B/2 V^2.
#pragma omp parallel
  {
    std::vector<Real> fp(nt + 6), fm(nt + 6), face(nt + 1);
#pragma omp for schedule(static)
    for (long jj = 0; jj < rows; ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      const Real c = -two_pi * coeffs.u_par[j];
      const Real* row = v.data() + j * nt;
      // Padded index p = k + 3 with periodic ghosts.
      for (std::size_t p = 0; p < nt + 6; ++p) {
        const std::size_t k = (p + nt - 3) % nt;
        const Real u = row[k];
        const Real f = c * u - half * b_coef * u * u;
        fp[p] = half * (f + alpha_theta * u);
        fm[p] = half * (f - alpha_theta * u);
      }
      // face[i] is the flux at k = i - 1/2, i = 0..nt.
      for (std::size_t i = 0; i <= nt; ++i) {
        const std::size_t p = i + 2;  // cell k = i - 1 left of the face
        face[i] = weno5_left(fp[p - 2], fp[p - 1], fp[p], fp[p + 1], fp[p + 2]) +
                  weno5_left(fm[p + 3], fm[p + 2], fm[p + 1], fm[p], fm[p - 1]);
      }
      Real* out = b.data() + j * nt;
      for (std::size_t k = 0; k < nt; ++k) out[k] = -(face[k + 1] - face[k]) * inv_dtheta;
    }
  }

  // Rho direction: scratch row j holds the flux at j + 1/2.
  auto wrap = [rows](long j) { return static_cast<std::size_t>(((j % rows) + rows) % rows); };
#pragma omp parallel for schedule(static)
  for (long jj = 0; jj < rows; ++jj) {
    const Real* r[6];
    Real sp[6], sm[6];
    for (int s = 0; s < 6; ++s) {
      const std::size_t idx = wrap(jj - 2 + s);
      r[s] = v.data() + idx * nt;
      sp[s] = half * (coeffs.u_perp[idx] + alpha_rho);
      sm[s] = half * (coeffs.u_perp[idx] - alpha_rho);
    }
    Real* out = scratch.data() + static_cast<std::size_t>(jj) * nt;
    for (std::size_t k = 0; k < nt; ++k) {
      out[k] = weno5_left(sp[0] * r[0][k], sp[1] * r[1][k], sp[2] * r[2][k], sp[3] * r[3][k],
                          sp[4] * r[4][k]) +
               weno5_left(sm[5] * r[5][k], sm[4] * r[4][k], sm[3] * r[3][k], sm[2] * r[2][k],
                          sm[1] * r[1][k]);
    }
  }
#pragma omp parallel for schedule(static)
  for (long jj = 0; jj < rows; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const Real* right = scratch.data() + j * nt;
    const Real* left = scratch.data() + wrap(jj - 1) * nt;
    const Real* row = v.data() + j * nt;
    const Real source = coeffs.du_perp_drho[j];
    Real* out = b.data() + j * nt;
    for (std::size_t k = 0; k < nt; ++k) {
      out[k] += -(right[k] - left[k]) * inv_drho + source * row[k];
    }
  }
}

template void weno5_b<double>(std::span<const double>, std::size_t, std::size_t,
                              const WenoCoefficients<double>&, double, double, double,
                              std::span<double>, std::span<double>);
template void weno5_b<float>(std::span<const float>, std::size_t, std::size_t,
                             const WenoCoefficients<float>&, float, float, float,
                             std::span<float>, std::span<float>);

Field2D weno5_b(const Field2D& v, std::span<const double> u_par,
                std::span<const double> u_perp, std::span<const double> du_perp_drho,
                double b_coef, double d_rho, double d_theta) {
  Field2D b(v.rows(), v.cols());
  std::vector<double> scratch(v.size());
  weno5_b<double>(v.values(), v.rows(), v.cols(), {u_par, u_perp, du_perp_drho}, b_coef, d_rho,
                  d_theta, b.values(), scratch);
  return b;
}

}  // namespace boomprop
