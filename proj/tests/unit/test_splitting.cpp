#include <cmath>
#include <numbers>
#include <random>

#include "boomprop/analysis.hpp"
#include "boomprop/error.hpp"
#include "boomprop/splitting.hpp"
#include "doctest.h"

using namespace boomprop;

namespace {

constexpr double kPi = std::numbers::pi;

Field2D random_field(std::size_t rows, std::size_t cols, unsigned seed, double lo = -1, double hi = 1) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Field2D f(rows, cols);
  for (auto& x : f.values()) x = u(gen);
  return f;
}

double max_diff(const Field2D& a, const Field2D& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

// Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

// Crank-Nicolson/trapezoid scheme assembled as one linear system over all
// (j, k) unknowns, rho rows 0..rows-1 with mirrored ghosts.
Field2D diffraction_dense(const Field2D& v, double ds, double dr, double dt) {
  const std::size_t rows = v.rows(), cols = v.cols(), n = rows * cols;
  const double c = ds * dt / (8 * kPi) / (dr * dr);
  auto idx = [&](std::size_t j, std::size_t k) { return j * cols + k; };
  auto d2_weights = [&](std::size_t j) {
    // (index, weight) pairs of the second difference at row j.
    const std::size_t jm = j == 0 ? 1 : j - 1;
    const std::size_t jp = j + 1 == rows ? rows - 2 : j + 1;
    return std::vector<std::pair<std::size_t, double>>{{jm, 1.0}, {j, -2.0}, {jp, 1.0}};
  };
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  std::vector<double> rhs(n);
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t k = 0; k < cols; ++k) {
      const std::size_t r = idx(j, k);
      a[r][r] += 1.0;
      rhs[r] = v(j, k);
      if (k == 0) continue;  // zero-width trapezoid
      for (std::size_t l = 0; l <= k; ++l) {
        const double w = (l == 0 || l == k) ? 0.5 : 1.0;
        for (const auto& [jj, dw] : d2_weights(j)) {
          a[r][idx(jj, l)] -= c * w * dw;
          rhs[r] += c * w * dw * v(jj, l);
        }
      }
    }
  }
  const auto x = dense_solve(a, rhs);
  Field2D out(rows, cols);
  std::copy(x.begin(), x.end(), out.data());
  return out;
}

}  // namespace

TEST_CASE("diffraction matches the dense assembled system") {
  const auto v = random_field(9, 8, 1);
  for (double ds : {0.4, 5.0}) {
    const auto dense = diffraction_dense(v, ds, 0.3, 0.2);
    for (auto mode : {DiffractionSum::direct, DiffractionSum::running}) {
      const auto x = step_diffraction_cn(v, ds, 0.3, 0.2, mode);
      CHECK(max_diff(x, dense) < 1e-12);
    }
  }
}

TEST_CASE("diffraction leaves rho-constant and rho-linear plateaus unchanged") {
  Field2D v(10, 16);
  for (std::size_t j = 0; j < v.rows(); ++j) {
    for (std::size_t k = 0; k < v.cols(); ++k) v(j, k) = std::sin(0.3 * k);
  }
  CHECK(max_diff(step_diffraction_cn(v, 0.4, 0.3, 0.2), v) < 1e-15);

  // Linear in rho: second differences vanish away from the mirrored ends.
  Field2D w(12, 8);
  for (std::size_t j = 0; j < w.rows(); ++j) {
    for (std::size_t k = 0; k < w.cols(); ++k) w(j, k) = 1.0 + 0.1 * j;
  }
  const auto out = step_diffraction_cn(w, 0.4, 1.0, 0.2);
  // Column 0 is never modified; the interior response is driven only by the ends.
  for (std::size_t j = 0; j < w.rows(); ++j) CHECK(out(j, 0) == w(j, 0));
  CHECK(std::abs(out(6, 1) - w(6, 1)) < 1e-6);
}

TEST_CASE("direct and running sums agree on a realistic row count") {
  const auto v = random_field(65, 48, 3);
  const auto a = step_diffraction_cn(v, 0.4, 0.32, 0.196, DiffractionSum::direct);
  const auto b = step_diffraction_cn(v, 0.4, 0.32, 0.196, DiffractionSum::running);
  CHECK(max_diff(a, b) < 1e-12);
}

TEST_CASE("Godunov flux against a dense grid search") {
  const double b = 0.05;
  CHECK(godunov_flux(0, 0, b) == 0.0);
  CHECK(godunov_flux(1, 2, b) == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(godunov_flux(2, 1, b) == doctest::Approx(-0.025).epsilon(1e-15));
  CHECK(godunov_flux(-1, 1, b) == doctest::Approx(-0.025).epsilon(1e-15));

  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 200; ++t) {
    const double ul = u(gen), ur = u(gen);
    const double lo = std::min(ul, ur), hi = std::max(ul, ur);
    double best = ul <= ur ? INFINITY : -INFINITY;
    constexpr int kSamples = 20000;
    for (int i = 0; i <= kSamples; ++i) {
      const double x = lo + (hi - lo) * i / kSamples;
      const double f = -0.5 * b * x * x;
      best = ul <= ur ? std::min(best, f) : std::max(best, f);
    }
    if (lo < 0 && hi > 0 && ul > ur) best = std::max(best, 0.0);
    CHECK(godunov_flux(ul, ur, b) == doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("Burgers step conserves row sums and constants") {
  const auto v = random_field(20, 448, 7, -2, 2);
  const double b = 0.05, ds = 0.4, dt = 28 * kPi / 448;
  Field2D w = v;
  for (int s = 0; s < 100; ++s) w = step_burgers_godunov(w, b, ds, dt);
  for (std::size_t j = 0; j < v.rows(); ++j) {
    double s0 = 0, s1 = 0, scale = 0;
    for (std::size_t k = 0; k < v.cols(); ++k) {
      s0 += v(j, k);
      s1 += w(j, k);
      scale += std::abs(v(j, k));
    }
    CHECK(std::abs(s1 - s0) <= 1e-13 * scale);
  }
  const Field2D c(3, 10, 0.7);
  CHECK(max_diff(step_burgers_godunov(c, b, ds, dt), c) == 0.0);
}

TEST_CASE("Burgers discontinuities travel at the Rankine-Hugoniot speed") {
  // f(u) = -B/2 u^2 is concave: the jump 0 -> 1 is a shock with speed
  // -B/2 (0 + 1); the jump 1 -> 0 opens a rarefaction fan between the
  // characteristic speeds f'(1) = -B and f'(0) = 0.
  const double b = 0.05, length = 100.0, sigma_end = 200.0;
  const double a0 = 30.0, b0 = 70.0;
  const double speed = -0.5 * b * (0.0 + 1.0);
  std::vector<double> errors;
  for (int n : {500, 1000, 2000}) {
    const double dt = length / n;
    const double ds = 0.4 * dt / b;  // Courant number 0.4 at u = 1
    const int steps = static_cast<int>(std::lround(sigma_end / ds));
    Field2D v(1, static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const double th = (k + 0.5) * dt;
      v(0, static_cast<std::size_t>(k)) = th > a0 && th < b0 ? 1.0 : 0.0;
    }
    for (int s = 0; s < steps; ++s) v = step_burgers_godunov(v, b, ds, dt);
    // Shock location: first crossing of 1/2 left of the plateau centre.
    double x = 0;
    for (int k = 1; k < n; ++k) {
      if (v(0, k - 1) < 0.5 && v(0, k) >= 0.5 && k * dt < 50) {
        const double f = (0.5 - v(0, k - 1)) / (v(0, k) - v(0, k - 1));
        x = (k - 0.5 + f) * dt;
        break;
      }
    }
    errors.push_back(std::abs(x - (a0 + speed * steps * ds)));
    // Rarefaction: u = 1/2 travels with f'(1/2) = -B/2.
    const auto k_fan = static_cast<std::size_t>(std::lround((b0 - 0.5 * b * steps * ds) / dt));
    CHECK(v(0, k_fan) == doctest::Approx(0.5).epsilon(0.1));
  }
  for (double e : errors) CHECK(e < 2 * length / 500);
  CHECK(errors.back() <= errors.front());
}

TEST_CASE("axial step shifts a single mode and damps by the absorption factor") {
  const std::size_t rows = 3, cols = 64;
  const double span = 28 * kPi, theta0 = -13 * kPi, dt = span / cols, ds = 0.4;
  const int m = 5;
  const double w = 2 * kPi * m / span;
  Field2D v(rows, cols);
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t k = 0; k < cols; ++k) v(j, k) = std::cos(w * (k * dt));
  }
  const std::vector<double> c{0.01, -0.02, 0.0};
  const auto shifted = step_axial_absorption_spectral(v, c, 0.0, ds, span);
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t k = 0; k < cols; ++k) {
      CHECK(shifted(j, k) == doctest::Approx(std::cos(w * (k * dt + 2 * kPi * c[j] * ds))).epsilon(1e-12).scale(1.0));
    }
  }
  const double a = 3.4e-4;
  const std::vector<double> zero(rows, 0.0);
  const auto damped = step_axial_absorption_spectral(v, zero, a, ds, span);
  const double factor = std::exp(-a * w * w * ds);
  for (std::size_t k = 0; k < cols; ++k) {
    CHECK(damped(1, k) == doctest::Approx(factor * v(1, k)).epsilon(1e-12).scale(1.0));
  }
  // The row mean (mode 0) is untouched.
  const auto r = random_field(rows, cols, 9);
  const auto rd = step_axial_absorption_spectral(r, c, a, ds, span);
  for (std::size_t j = 0; j < rows; ++j) {
    double s0 = 0, s1 = 0;
    for (std::size_t k = 0; k < cols; ++k) {
      s0 += r(j, k);
      s1 += rd(j, k);
    }
    CHECK(std::abs(s0 - s1) < 1e-12);
  }
  CHECK(max_diff(step_axial_absorption_spectral(r, zero, 0.0, ds, span), r) < 1e-14);
  (void)theta0;
}

TEST_CASE("Lax-Wendroff transverse step") {
  const auto v = random_field(11, 6, 13);
  const std::vector<double> zero(11, 0.0);
  CHECK(max_diff(step_transverse_lw(v, zero, zero, zero, 0.4, 0.32), v) == 0.0);

  // Linear data: exact interior update V - c ds slope.
  Field2D lin(11, 4);
  const double slope = 0.7, dr = 0.32, ds = 0.4, c = 0.05;
  for (std::size_t j = 0; j < 11; ++j) {
    for (std::size_t k = 0; k < 4; ++k) lin(j, k) = 2.0 + slope * j * dr + k;
  }
  const std::vector<double> cc(11, c);
  const auto out = step_transverse_lw(lin, cc, zero, zero, ds, dr);
  for (std::size_t j = 1; j + 1 < 11; ++j) {
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(out(j, k) == doctest::Approx(lin(j, k) - c * ds * slope).epsilon(1e-14));
    }
  }

  // Re-derivation: V + ds dV + ds^2/2 d2V with dV = -U V_r and
  // d2V = -U_s V_r + U U_r (-dV / ... ) written through the Taylor substitutions.
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  std::vector<double> up(11), us(11), ur(11);
  for (std::size_t j = 0; j < 11; ++j) {
    up[j] = u(gen);
    us[j] = u(gen);
    ur[j] = u(gen);
  }
  const auto lw = step_transverse_lw(v, up, us, ur, ds, dr);
  for (std::size_t j = 0; j < 11; ++j) {
    const std::size_t jm = j == 0 ? 1 : j - 1;
    const std::size_t jp = j == 10 ? 9 : j + 1;
    for (std::size_t k = 0; k < 6; ++k) {
      const double v_r = (v(jp, k) - v(jm, k)) / (2 * dr);
      const double v_rr = (v(jp, k) - 2 * v(j, k) + v(jm, k)) / (dr * dr);
      const double dv = -up[j] * v_r;
      // d2V = -U_s V_r - U d(V_s)/dr, with V_s = -U V_r so d(V_s)/dr = -U_r V_r - U V_rr.
      const double d2v = -us[j] * v_r - up[j] * (-ur[j] * v_r - up[j] * v_rr);
      CHECK(lw(j, k) == doctest::Approx(v(j, k) + ds * dv + 0.5 * ds * ds * d2v).epsilon(1e-14));
    }
  }
}

TEST_CASE("CFL report") {
  const auto set1 = grid_set(1);
  const auto r = check_cfl_splitting(set1, 5.0, 0.05);
  CHECK(r.ok());
  CHECK(r.n_theta_limit == doctest::Approx(879.6).epsilon(1e-4));
  CHECK(r.n_theta_limit == doctest::Approx(28 * kPi / 30 * set1.n_sigma).epsilon(1e-12));
  CHECK(r.n_rho_limit == doctest::Approx(200.0 / 3 * set1.n_sigma).epsilon(1e-12));
  DomainConfig zero = set1;
  zero.nonlinearity = 0;
  zero.n_theta = 100000;
  CHECK(check_cfl_splitting(zero, 5.0, 0.0).ok());
  DomainConfig bad = set1;
  bad.n_theta = 1000;
  CHECK_FALSE(check_cfl_splitting(bad, 5.0, 0.05).burgers_ok());
}

TEST_CASE("Lie step equals the manual composition") {
  DomainConfig c = grid_set(1);
  c.n_rho = 40;
  c.n_theta = 64;
  c.n_sigma = 10;
  c.sigma_total = 4;
  const TurbulenceParams p;
  const auto axes = build_axes(c, RhoBoundary::neumann);
  const auto fields = evaluate_fields(sample_modes(p), p.lambda, p.c0, axes.sigma, axes.rho);
  const auto v0 = initial_nwave(axes.rho, axes.theta, c.absorption, c.nonlinearity);
  SplittingSolver solver(c, fields);
  SplittingState s{v0, 3};
  const auto next = solver.lie_step(s);
  CHECK(next.sigma_index == 4);
  const double ds = c.d_sigma();
  Field2D m = step_diffraction_cn(v0, ds, c.d_rho(), c.d_theta());
  m = step_burgers_godunov(m, c.nonlinearity, ds, c.d_theta());
  m = step_axial_absorption_spectral(m, fields.u_par.row(3), c.absorption, ds, c.theta_span());
  m = step_transverse_lw(m, fields.u_perp.row(3), fields.du_perp_dsigma.row(3),
                         fields.du_perp_drho.row(3), ds, c.d_rho());
  CHECK(max_diff(next.v, m) < 1e-15);

  // A = B = 0, U = 0, constant V: unchanged.
  DomainConfig flat = c;
  flat.absorption = 0;
  flat.nonlinearity = 0;
  const auto still = zero_fields(axes.sigma.size(), axes.rho.size());
  SplittingSolver quiet(flat, still);
  const Field2D constant(v0.rows(), v0.cols(), 0.3);
  CHECK(max_diff(quiet.lie_step({constant, 0}).v, constant) < 1e-15);
}

TEST_CASE("divergence guard raises InstabilityError") {
  DomainConfig c = grid_set(1);
  c.n_rho = 8;
  c.n_theta = 16;
  c.n_sigma = 2;
  const auto fields = zero_fields(3, 9);
  SplittingSolver solver(c, fields, {DiffractionSum::direct, 1.0});
  Field2D big(9, 16, 2.0);
  CHECK_THROWS_AS(solver.lie_step({big, 0}), InstabilityError);
  Field2D nan(9, 16, 0.0);
  nan(2, 3) = NAN;
  CHECK_THROWS_AS(solver.lie_step({nan, 0}), InstabilityError);
}

TEST_CASE("Lie splitting is first order on a small problem") {
  DomainConfig c = grid_set(1);
  c.n_rho = 48;
  c.n_theta = 128;
  c.sigma_total = 8;
  c.rho_max = 40;
  c.roi_rho = {10, 30};
  const TurbulenceParams p;
  c.n_sigma = 160;
  const auto axes = build_axes(c, RhoBoundary::neumann);
  const auto ref_fields = evaluate_fields(sample_modes(p), p.lambda, p.c0, axes.sigma, axes.rho);
  const std::vector<int> n_list{10, 20, 40};
  const auto rows = convergence_study(c, n_list, 160, SolverKind::splitting, ref_fields);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].beta);
    CHECK(*rows[i].beta >= 0.8);
    CHECK(*rows[i].beta <= 1.3);
  }
}
