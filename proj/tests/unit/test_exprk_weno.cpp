#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "boomprop/analysis.hpp"
#include "boomprop/error.hpp"
#include "boomprop/exprk.hpp"
#include "boomprop/parallel.hpp"
#include "boomprop/phi.hpp"
#include "boomprop/splitting.hpp"
#include "boomprop/weno5.hpp"
#include "doctest.h"

using namespace boomprop;
using cd = std::complex<double>;
using cld = std::complex<long double>;

namespace {

constexpr double kPi = std::numbers::pi;

// phi_p(z) = sum_k z^k / (k + p)! in extended precision.
cld phi_series(cld z, int p, int terms = 80) {
  cld sum = 0, term = 1;
  long double fact = 1;
  for (int i = 1; i <= p; ++i) fact *= i;
  term = 1.0L / fact;
  for (int k = 0; k < terms; ++k) {
    sum += term;
    term *= z / static_cast<long double>(k + 1 + p);
  }
  return sum;
}

cld phi_oracle(cd z, int p) {
  const cld zl(z.real(), z.imag());
  if (std::abs(z) < 8.0) return phi_series(zl, p);
  const cld e = std::exp(zl);
  return p == 1 ? (e - 1.0L) / zl : (e - 1.0L - zl) / (zl * zl);
}

double rel(cd a, cld b) {
  const cd bd(static_cast<double>(b.real()), static_cast<double>(b.imag()));
  return std::abs(a - bd) / std::max(std::abs(bd), 1e-300);
}

std::vector<cd> z_table() {
  std::vector<cd> zs{0.0, 1.0, -2.0, {0, 1}, {0, -30}, -1e6, {-5e5, 3e3}, {1e-9, 1e-9}};
  for (double r : {1e-12, 1e-8, 1e-5, 9.9999e-5, 1.0001e-4, 0.01, 0.5, 0.999, 1.0, 1.001, 2.0, 7.9, 8.1, 40.0}) {
    for (double arg : {0.0, 0.3, 1.5707963, 2.0, kPi, -2.5, -1.5707963}) zs.push_back(std::polar(r, arg));
  }
  return zs;
}

DomainConfig small_config(int n_rho = 32, int n_theta = 64) {
  DomainConfig c;
  c.n_rho = n_rho;
  c.n_theta = n_theta;
  c.n_sigma = 10;
  c.sigma_total = 4;
  return c;
}

// Discrete L2 error between b and the exact values.
double l2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / a.size());
}

struct WenoCase {
  std::size_t n_rho, n_theta;
  double d_rho, d_theta;
  std::vector<double> v, up, uq, dq, exact;
  double b_coef;
};

std::vector<double> weno(const WenoCase& c) {
  std::vector<double> b(c.v.size()), scratch(c.v.size());
  weno5_b<double>(c.v, c.n_rho, c.n_theta, {c.up, c.uq, c.dq}, c.b_coef, c.d_rho, c.d_theta, b, scratch);
  return b;
}

double fitted_order(const std::vector<double>& errors) {
  // Least-squares slope of log2(err) against refinement level.
  const double n = errors.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double x = i, y = std::log2(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("phi values") {
  CHECK(phi1(0.0) == cd(1.0));
  CHECK(phi2(0.0) == cd(0.5));
  CHECK(std::abs(phi1(1.0) - cd(std::exp(1.0) - 1.0)) < 1e-15);
  CHECK(rel(phi1(1.0), phi_series(1.0L, 1, 50)) < 1e-15);
  CHECK(std::abs(phi2(-2.0) - cd((std::exp(-2.0) + 1.0) / 4.0)) < 1e-15);
  CHECK(phi2(-2.0).real() == doctest::Approx(0.283833821).epsilon(1e-9));
}

TEST_CASE("phi functions are accurate on both sides of the series radius") {
  for (const cd z : z_table()) {
    INFO("z = " << z);
    CHECK(rel(phi1(z), phi_oracle(z, 1)) <= 1e-13);
    CHECK(rel(phi2(z), phi_oracle(z, 2)) <= 1e-13);
  }
}

TEST_CASE("phi recurrences") {
  for (const cd z : z_table()) {
    INFO("z = " << z);
    const double scale = std::max(1.0, std::abs(phi1(z)));
    CHECK(std::abs(z * phi2(z) - (phi1(z) - 1.0)) <= 1e-12 * scale);
    CHECK(std::abs(z * phi1(z) - boomprop::expm1(z)) <= 1e-12 * std::max(1.0, std::abs(z * phi1(z))));
  }
}

TEST_CASE("multipliers") {
  auto c = grid_set(1);
  const double eps = unit_roundoff(Precision::f64);
  CHECK(eps == std::ldexp(1.0, -53));
  CHECK(unit_roundoff(Precision::f32) == std::ldexp(1.0, -24));
  const auto m = build_multipliers<double>(c, eps);
  const std::size_t modes = c.n_theta / 2 + 1;
  CHECK(m.e[0] == cd(1.0));
  CHECK(m.phi1[0] == cd(1.0));
  CHECK(m.phi2[0] == cd(0.5));

  // j = 0 row: the absorption factor of the splitting solver.
  const double ds = c.d_sigma();
  for (std::size_t k = 0; k < modes; k += 17) {
    const double w = 2 * kPi * k / c.theta_span();
    CHECK(std::abs(m.e[k] - std::exp(-c.absorption * w * w * ds)) < 1e-15);
  }
  // Whole table: Re z <= 0 and |E| <= 1; the k = 0 column decays with |j|.
  double prev = 1.0;
  for (std::size_t r = 0; r < m.n_rho; ++r) {
    const long j = r <= m.n_rho / 2 ? static_cast<long>(r) : static_cast<long>(r) - static_cast<long>(m.n_rho);
    for (std::size_t k = 0; k < modes; ++k) {
      const cd z = multiplier_exponent(c, j, static_cast<long>(k), eps);
      REQUIRE(z.real() <= 0.0);
      REQUIRE(std::abs(m.e[r * modes + k]) <= 1.0);
    }
    if (r > 0 && r <= m.n_rho / 2) {
      const double e0 = std::abs(m.e[r * modes]);
      CHECK(e0 <= prev);
      prev = e0;
    }
  }
  CHECK(std::abs(m.e[1 * modes]) < 1e-300);

  // Angular-frequency scaling of the exponent.
  const cd z = multiplier_exponent(c, 3, 5, 0.0);
  const double xi = 2 * kPi * 3 / c.rho_span(), w = 2 * kPi * 5 / c.theta_span();
  CHECK(std::abs(z - ds * (-(xi * xi / (4 * kPi)) / cd(0, w) - c.absorption * w * w)) < 1e-15);
}

TEST_CASE("constant fields are equilibria of b") {
  const std::size_t nr = 24, nt = 32;
  std::vector<double> up(nr), uq(nr, 0.037), dq(nr, 0.0);
  for (std::size_t j = 0; j < nr; ++j) up[j] = 0.01 * std::sin(0.3 * j);
  for (double c : {0.0, 1.0, -0.7}) {
    WenoCase w{nr, nt, 0.32, 0.2, std::vector<double>(nr * nt, c), up, uq, dq, {}, 0.05};
    const auto b = weno(w);
    double m = 0;
    for (double x : b) m = std::max(m, std::abs(x));
    CHECK(m <= 1e-12 * std::max(1.0, std::abs(c)));
  }
}

TEST_CASE("WENO5 order on the three analytic cases") {
  // 1: constant V, rho-varying U_perp: the flux divergence cancels the source.
  // 2: U = 0, V = sin(w (theta - theta_min)): b = (B/2) d(V^2)/dtheta.
  // 3: B = 0, U_par = 0, U_perp = c: b = -c dV/drho.
  const double rho_span = 400.0, theta_span = 28 * kPi, b_coef = 0.05;
  std::vector<double> e1, e2, e3;
  for (int level = 0; level < 3; ++level) {
    const std::size_t nr = 64u << level, nt = 64u << level;
    const double dr = rho_span / nr, dt = theta_span / nt;
    const double xi = 2 * kPi * 4 / rho_span, w = 2 * kPi * 3 / theta_span;
    std::vector<double> zero(nr, 0.0), uq(nr), dq(nr);
    for (std::size_t j = 0; j < nr; ++j) {
      uq[j] = 0.04 * std::sin(xi * j * dr);
      dq[j] = 0.04 * xi * std::cos(xi * j * dr);
    }
    WenoCase c1{nr, nt, dr, dt, std::vector<double>(nr * nt, 0.8), zero, uq, dq,
                std::vector<double>(nr * nt, 0.0), b_coef};
    e1.push_back(l2(weno(c1), c1.exact));

    WenoCase c2{nr, nt, dr, dt, std::vector<double>(nr * nt), zero, zero, zero,
                std::vector<double>(nr * nt), b_coef};
    for (std::size_t j = 0; j < nr; ++j) {
      for (std::size_t k = 0; k < nt; ++k) {
        const double s = std::sin(w * k * dt);
        c2.v[j * nt + k] = s;
        c2.exact[j * nt + k] = b_coef * s * w * std::cos(w * k * dt);
      }
    }
    e2.push_back(l2(weno(c2), c2.exact));

    const double u = 0.03;
    WenoCase c3{nr, nt, dr, dt, std::vector<double>(nr * nt), zero, std::vector<double>(nr, u), zero,
                std::vector<double>(nr * nt), 0.0};
    for (std::size_t j = 0; j < nr; ++j) {
      for (std::size_t k = 0; k < nt; ++k) {
        c3.v[j * nt + k] = std::sin(xi * j * dr) * (1.0 + 0.1 * std::cos(w * k * dt));
        c3.exact[j * nt + k] = -u * xi * std::cos(xi * j * dr) * (1.0 + 0.1 * std::cos(w * k * dt));
      }
    }
    e3.push_back(l2(weno(c3), c3.exact));
  }
  INFO("errors: " << e1[0] << " " << e1[1] << " " << e1[2] << " | " << e2[0] << " " << e2[1] << " "
                  << e2[2] << " | " << e3[0] << " " << e3[1] << " " << e3[2]);
  CHECK(fitted_order(e1) >= 4.5);
  CHECK(fitted_order(e2) >= 4.5);
  CHECK(fitted_order(e3) >= 4.5);
}

TEST_CASE("single and double precision WENO agree") {
  const std::size_t nr = 16, nt = 32;
  std::vector<double> v(nr * nt), up(nr, 0.01), uq(nr), dq(nr);
  for (std::size_t j = 0; j < nr; ++j) {
    uq[j] = 0.02 * std::cos(0.4 * j);
    dq[j] = -0.008 * std::sin(0.4 * j);
    for (std::size_t k = 0; k < nt; ++k) v[j * nt + k] = std::sin(0.2 * k) * std::cos(0.4 * j);
  }
  WenoCase c{nr, nt, 0.32, 0.2, v, up, uq, dq, {}, 0.05};
  const auto bd = weno(c);
  std::vector<float> vf(v.begin(), v.end()), upf(up.begin(), up.end()), uqf(uq.begin(), uq.end()),
      dqf(dq.begin(), dq.end()), bf(v.size()), sf(v.size());
  weno5_b<float>(vf, nr, nt, {upf, uqf, dqf}, 0.05f, 0.32f, 0.2f, bf, sf);
  double m = 0, scale = 0;
  for (std::size_t i = 0; i < bd.size(); ++i) {
    m = std::max(m, std::abs(bd[i] - bf[i]));
    scale = std::max(scale, std::abs(bd[i]));
  }
  CHECK(m <= 1e-5 * scale);
}

TEST_CASE("exponential steps with b = 0 apply the linear flow") {
  const auto c = small_config();
  const auto m = build_multipliers<double>(c, unit_roundoff(Precision::f64));
  SpectralTransform<double> t(32, 64);
  ExpWorkspace<double> work(32, 64);
  const BEvaluator<double> zero_b = [](int, std::span<const double>, std::span<double> b) {
    std::fill(b.begin(), b.end(), 0.0);
  };
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(32 * 64);
  for (auto& x : v) x = u(gen);
  std::vector<cd> vhat(32 * 33);
  t.forward(v.data(), vhat.data());
  auto a = vhat, b = vhat;
  exprk22_step<double>(a, m, t, zero_b, 0, work);
  exp_euler_step<double>(b, m, t, zero_b, 0, work);
  for (std::size_t i = 0; i < vhat.size(); ++i) {
    const cd expected = m.e[i] * vhat[i];
    CHECK(std::abs(a[i] - expected) <= 1e-15 * std::max(1.0, std::abs(expected)));
    CHECK(a[i] == b[i]);
  }
}

TEST_CASE("the ExpRK22 stage equals the exponential Euler step bitwise") {
  const auto c = small_config();
  const auto m = build_multipliers<double>(c, unit_roundoff(Precision::f64));
  SpectralTransform<double> t(32, 64);
  ExpWorkspace<double> work(32, 64);
  const std::vector<double> up(32, 0.01), uq(32, 0.02), dq(32, 0.0);
  std::vector<double> scratch(32 * 64);
  const BEvaluator<double> b_eval = [&](int, std::span<const double> v, std::span<double> b) {
    weno5_b<double>(v, 32, 64, {up, uq, dq}, 0.05, c.d_rho(), c.d_theta(), b, scratch);
  };
  Field2D v0(32, 64);
  for (std::size_t j = 0; j < 32; ++j) {
    for (std::size_t k = 0; k < 64; ++k) v0(j, k) = std::sin(0.1 * k) + 0.1 * std::cos(0.2 * j);
  }
  std::vector<cd> vhat(32 * 33);
  t.forward(v0.data(), vhat.data());
  auto euler = vhat;
  exp_euler_step<double>(euler, m, t, b_eval, 0, work);
  auto rk = vhat;
  t.reset_transform_count();
  exprk22_step<double>(rk, m, t, b_eval, 0, work);
  CHECK(t.transform_count() == 4);
  CHECK(work.stage_hat == euler);
  t.reset_transform_count();
  exp_euler_step<double>(euler, m, t, b_eval, 1, work);
  CHECK(t.transform_count() == 2);
}

TEST_CASE("linear exactness on a single mode") {
  for (double a : {3.4e-4, 0.0}) {
    auto c = small_config(32, 64);
    c.absorption = a;
    c.nonlinearity = 0.0;
    const auto axes = build_axes(c, RhoBoundary::periodic);
    const long j = 3, k = 5;
    const double xi = 2 * kPi * j / c.rho_span(), w = 2 * kPi * k / c.theta_span();
    Field2D v0(32, 64);
    for (std::size_t r = 0; r < 32; ++r) {
      for (std::size_t q = 0; q < 64; ++q) {
        v0(r, q) = std::cos(xi * (axes.rho[r] - c.rho_min) + w * (axes.theta[q] - c.theta_min));
      }
    }
    const auto fields = zero_fields(11, 33);
    ExpRkSolver<double> solver(c, fields);
    solver.set_initial(v0);
    solver.step();
    const auto out = solver.field();
    // Independent evaluation of the multiplier in extended precision.
    const long double eps = std::ldexp(1.0L, -53);
    const long double ds = c.d_sigma();
    const cld denom(eps / (4 * std::numbers::pi_v<long double>), w);
    const cld z = ds * (-(static_cast<long double>(xi) * xi / (4 * std::numbers::pi_v<long double>)) / denom -
                        static_cast<long double>(a) * w * w);
    const cld e = std::exp(z);
    double err = 0, norm = 0, in_norm = 0;
    for (std::size_t r = 0; r < 32; ++r) {
      for (std::size_t q = 0; q < 64; ++q) {
        const long double phase = xi * (axes.rho[r] - c.rho_min) + w * (axes.theta[q] - c.theta_min);
        const double exact = static_cast<double>((e * std::exp(cld(0, phase))).real());
        err += std::pow(out(r, q) - exact, 2);
        norm += exact * exact;
        in_norm += v0(r, q) * v0(r, q);
      }
    }
    CHECK(std::sqrt(err / norm) <= 1e-12);
    if (a == 0.0) CHECK(std::abs(std::sqrt(norm / in_norm) - 1.0) < 1e-12);
  }
}

TEST_CASE("zero initial data stays zero") {
  auto c = small_config();
  const TurbulenceParams p;
  const auto axes = build_axes(c, RhoBoundary::neumann);
  const auto fields = evaluate_fields(sample_modes(p), p.lambda, p.c0, axes.sigma, axes.rho);
  const Field2D zero(32, 64);
  const auto report = run_exprk(c, zero, fields, {}, Precision::f64);
  CHECK(report.steps == c.n_sigma);
  CHECK(max_abs(report.final_field.values()) == 0.0);
  CHECK(report.transforms == 4u * c.n_sigma);
}

TEST_CASE("runs are bitwise identical across thread counts") {
  auto c = small_config(40, 96);
  const TurbulenceParams p;
  const auto axes = build_axes(c, RhoBoundary::neumann);
  const auto fields = evaluate_fields(sample_modes(p), p.lambda, p.c0, axes.sigma, axes.rho);
  const auto pax = build_axes(c, RhoBoundary::periodic);
  const auto v0 = initial_nwave(pax.rho, pax.theta, c.absorption, c.nonlinearity);
  const int before = thread_count();
  set_thread_count(1);
  const auto one = run_exprk(c, v0, fields, {}, Precision::f64).final_field;
  set_thread_count(4);
  const auto four = run_exprk(c, v0, fields, {}, Precision::f64).final_field;
  set_thread_count(3);
  const auto three = run_exprk(c, v0, fields, {}, Precision::f64).final_field;
  set_thread_count(before);
  CHECK(one == four);
  CHECK(one == three);
}

TEST_CASE("single precision tracks double precision") {
  auto c = small_config(40, 96);
  const TurbulenceParams p;
  const auto axes = build_axes(c, RhoBoundary::neumann);
  const auto fields = evaluate_fields(sample_modes(p), p.lambda, p.c0, axes.sigma, axes.rho);
  const auto pax = build_axes(c, RhoBoundary::periodic);
  const auto v0 = initial_nwave(pax.rho, pax.theta, c.absorption, c.nonlinearity);
  const auto d = run_exprk(c, v0, fields, {}, Precision::f64).final_field;
  const auto f = run_exprk(c, v0, fields, {}, Precision::f32).final_field;
  CHECK(relative_error(d, f, c.d_rho(), c.d_theta()) < 1e-5);
}

TEST_CASE("divergence guard") {
  auto c = small_config();
  const auto fields = zero_fields(11, 33);
  const Field2D big(32, 64, 20.0);
  CHECK_THROWS_AS(run_exprk(c, big, fields, {}, Precision::f64), InstabilityError);
  try {
    run_exprk(c, big, fields, {}, Precision::f64);
  } catch (const InstabilityError& e) {
    CHECK(e.max_abs() == doctest::Approx(20.0));
    CHECK(e.sigma() == 0.0);
  }
}
