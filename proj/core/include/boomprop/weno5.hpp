#pragma once

#include <span>

#include "boomprop/field.hpp"

namespace boomprop {

inline constexpr double kWenoEpsilon = 1e-6;

/// Fifth-order WENO (Jiang-Shu) reconstruction at x_{i+1/2} from the
/// left-biased stencil v[i-2..i+2].
template <typename Real>
inline Real weno5_left(Real vm2, Real vm1, Real v0, Real vp1, Real vp2) {
  constexpr Real eps = Real(kWenoEpsilon);
  const Real q0 = (Real(2) * vm2 - Real(7) * vm1 + Real(11) * v0) / Real(6);
  const Real q1 = (-vm1 + Real(5) * v0 + Real(2) * vp1) / Real(6);
  const Real q2 = (Real(2) * v0 + Real(5) * vp1 - vp2) / Real(6);

  const Real s0a = vm2 - Real(2) * vm1 + v0;
  const Real s0b = vm2 - Real(4) * vm1 + Real(3) * v0;
  const Real s1a = vm1 - Real(2) * v0 + vp1;
  const Real s1b = vm1 - vp1;
  const Real s2a = v0 - Real(2) * vp1 + vp2;
  const Real s2b = Real(3) * v0 - Real(4) * vp1 + vp2;
  const Real b0 = Real(13) / Real(12) * s0a * s0a + Real(0.25) * s0b * s0b;
  const Real b1 = Real(13) / Real(12) * s1a * s1a + Real(0.25) * s1b * s1b;
  const Real b2 = Real(13) / Real(12) * s2a * s2a + Real(0.25) * s2b * s2b;

  const Real a0 = Real(0.1) / ((eps + b0) * (eps + b0));
  const Real a1 = Real(0.6) / ((eps + b1) * (eps + b1));
  const Real a2 = Real(0.3) / ((eps + b2) * (eps + b2));
  return (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2);
}

/// Coefficient rows of b(sigma, V) at one sigma node. Each span has at least
/// n_rho entries; entry j belongs to rho_j.
template <typename Real>
struct WenoCoefficients {
  std::span<const Real> u_par;
  std::span<const Real> u_perp;
  std::span<const Real> du_perp_drho;
};

/// b(sigma, V) = -div f(V) + dU_perp/drho V on a doubly periodic grid, with
/// theta-flux -2 pi U_par V - B/2 V^2 and rho-flux U_perp V.
///
/// Each direction uses global Lax-Friedrichs flux splitting with
/// alpha_theta = max|-2 pi U_par - B V| and alpha_rho = max|U_perp| over the
/// grid, followed by WENO5 reconstruction of the split fluxes.
///
/// `v` and `b` hold n_rho*n_theta values (row-major, theta contiguous).
/// `scratch` must hold n_rho*n_theta values.
template <typename Real>
void weno5_b(std::span<const Real> v, std::size_t n_rho, std::size_t n_theta,
             const WenoCoefficients<Real>& coeffs, Real b_coef, Real d_rho, Real d_theta,
             std::span<Real> b, std::span<Real> scratch);

/// Convenience overload on Field2D.
Field2D weno5_b(const Field2D& v, std::span<const double> u_par,
                std::span<const double> u_perp, std::span<const double> du_perp_drho,
                double b_coef, double d_rho, double d_theta);

extern template void weno5_b<double>(std::span<const double>, std::size_t, std::size_t,
                                     const WenoCoefficients<double>&, double, double,
                                     double, std::span<double>, std::span<double>);
extern template void weno5_b<float>(std::span<const float>, std::size_t, std::size_t,
                                    const WenoCoefficients<float>&, float, float, float,
                                    std::span<float>, std::span<float>);

}  // namespace boomprop
