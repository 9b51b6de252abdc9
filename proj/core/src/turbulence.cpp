#include "boomprop/turbulence.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "boomprop/error.hpp"

namespace boomprop {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform on [0, 2 pi) from the top 53 bits; std::uniform_real_distribution
// is not reproducible across standard libraries.
double uniform_angle(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53 * kTwoPi;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed + (stream + 1) * 0x9E3779B97F4A7C15ull);
}

TurbulenceParams TurbulenceParams::make(double sigma_u, double c0, double pulse_duration,
                                        int n_modes, std::uint64_t seed) {
  TurbulenceParams p;
  p.sigma_u = sigma_u;
  p.c0 = c0;
  p.pulse_duration = pulse_duration;
  p.n_modes = n_modes;
  p.seed = seed;
  p.lambda = pulse_duration * c0;
  p.corr_length = 4.0 * p.lambda;
  p.k_min = 0.1 / p.corr_length;
  p.k_max = 9.0 / p.corr_length;
  return p;
}

void TurbulenceParams::validate() const {
  if (n_modes <= 0) throw ConfigError("n_modes: must be positive", "n_modes");
  if (!(sigma_u > 0)) throw ConfigError("sigma_u: must be positive", "sigma_u");
  if (!(c0 > 0)) throw ConfigError("c0: must be positive", "c0");
  if (!(pulse_duration > 0)) {
    throw ConfigError("pulse_duration: must be positive", "pulse_duration");
  }
  if (!(lambda > 0)) throw ConfigError("lambda: must be positive", "lambda");
  if (!(corr_length > 0)) throw ConfigError("corr_length: must be positive", "corr_length");
  if (!(k_min >= 0 && k_max > k_min)) throw ConfigError("k_max: must exceed k_min", "k_max");
}

double energy_spectrum(double k, double sigma_u, double corr_length) {
  if (!(k >= 0)) throw std::domain_error("energy_spectrum: negative wavenumber");
  const double kl = k * corr_length;
  return 0.125 * sigma_u * sigma_u * k * k * k * std::pow(corr_length, 4) *
         std::exp(-0.25 * kl * kl);
}

TurbulenceSpec sample_modes(const TurbulenceParams& params) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.n_modes);
  TurbulenceSpec spec;
  spec.phase.resize(n);
  spec.angle.resize(n);
  spec.wavenumber.resize(n);
  spec.amp_par.resize(n);
  spec.amp_perp.resize(n);

  std::mt19937_64 phase_gen(stream_seed(params.seed, 0));
  std::mt19937_64 angle_gen(stream_seed(params.seed, 1));
  const double dk = n > 1 ? (params.k_max - params.k_min) / static_cast<double>(n - 1) : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    spec.phase[i] = uniform_angle(phase_gen);
    spec.angle[i] = uniform_angle(angle_gen);
    spec.wavenumber[i] = i + 1 == n && n > 1 ? params.k_max : params.k_min + i * dk;
    const double amp = std::sqrt(
        energy_spectrum(spec.wavenumber[i], params.sigma_u, params.corr_length) / n);
    spec.amp_par[i] = -amp * std::sin(spec.angle[i]);
    spec.amp_perp[i] = amp * std::cos(spec.angle[i]);
  }
  return spec;
}

VelocityFields evaluate_fields(const TurbulenceSpec& spec, double lambda, double scale,
                               std::span<const double> sigma_nodes,
                               std::span<const double> rho_nodes) {
  const std::size_t ns = sigma_nodes.size();
  const std::size_t nr = rho_nodes.size();
  const std::size_t modes = spec.size();
  VelocityFields out{Field2D(ns, nr), Field2D(ns, nr), Field2D(ns, nr), Field2D(ns, nr)};
  if (ns == 0 || nr == 0 || modes == 0) return out;

  // cos(K.r + phi) = Re(exp(i K_s lambda sigma) exp(i (K_r lambda rho + phi))):
  // one complex product per (point, mode) instead of a sincos.
  std::vector<std::complex<double>> rho_phase(modes * nr);
  std::vector<double> k_sigma(modes), k_rho(modes);
  for (std::size_t m = 0; m < modes; ++m) {
    k_sigma[m] = spec.wavenumber[m] * std::cos(spec.angle[m]) * lambda;
    k_rho[m] = spec.wavenumber[m] * std::sin(spec.angle[m]) * lambda;
    for (std::size_t j = 0; j < nr; ++j) {
      const double arg = k_rho[m] * rho_nodes[j] + spec.phase[m];
      rho_phase[m * nr + j] = {std::cos(arg), std::sin(arg)};
    }
  }
  const double inv = 1.0 / scale;
  constexpr std::size_t kBlock = 128;
  const long rows = static_cast<long>(ns);

#pragma omp parallel
  {
    std::vector<double> up(kBlock), uq(kBlock), ds(kBlock), dr(kBlock);
#pragma omp for schedule(static)
    for (long i = 0; i < rows; ++i) {
      const double sigma = sigma_nodes[static_cast<std::size_t>(i)];
      for (std::size_t j0 = 0; j0 < nr; j0 += kBlock) {
        const std::size_t width = std::min(kBlock, nr - j0);
        std::fill(up.begin(), up.end(), 0.0);
        std::fill(uq.begin(), uq.end(), 0.0);
        std::fill(ds.begin(), ds.end(), 0.0);
        std::fill(dr.begin(), dr.end(), 0.0);
        for (std::size_t m = 0; m < modes; ++m) {
          const double ca = std::cos(k_sigma[m] * sigma);
          const double sa = std::sin(k_sigma[m] * sigma);
          const double a1 = spec.amp_par[m];
          const double a2 = spec.amp_perp[m];
          const double a2ks = a2 * k_sigma[m];
          const double a2kr = a2 * k_rho[m];
          const std::complex<double>* ph = rho_phase.data() + m * nr + j0;
          for (std::size_t b = 0; b < width; ++b) {
            const double c = ca * ph[b].real() - sa * ph[b].imag();
            const double s = sa * ph[b].real() + ca * ph[b].imag();
            up[b] += a1 * c;
            uq[b] += a2 * c;
            ds[b] -= a2ks * s;
            dr[b] -= a2kr * s;
          }
        }
        const auto row = static_cast<std::size_t>(i);
        for (std::size_t b = 0; b < width; ++b) {
          out.u_par(row, j0 + b) = up[b] * inv;
          out.u_perp(row, j0 + b) = uq[b] * inv;
          out.du_perp_dsigma(row, j0 + b) = ds[b] * inv;
          out.du_perp_drho(row, j0 + b) = dr[b] * inv;
        }
      }
    }
  }
  return out;
}

VelocityFields downsample_fields(const VelocityFields& fields, int factor_sigma,
                                 int factor_rho) {
  if (factor_sigma < 1 || factor_rho < 1) {
    throw std::invalid_argument("downsample_fields: factors must be positive");
  }
  const std::size_t ns = fields.sigma_nodes();
  const std::size_t nr = fields.rho_nodes();
  const auto fs = static_cast<std::size_t>(factor_sigma);
  const auto fr = static_cast<std::size_t>(factor_rho);
  // Node counts are N + 1 with N divisible by the factor (or N when the axis
  // excludes its endpoint).
  auto divides = [](std::size_t nodes, std::size_t f) {
    return f == 1 || (nodes - 1) % f == 0 || nodes % f == 0;
  };
  if (ns == 0 || nr == 0 || !divides(ns, fs) || !divides(nr, fr)) {
    throw std::invalid_argument("downsample_fields: factor does not divide the grid");
  }
  const std::size_t out_s = (ns - 1) / fs + 1;
  const std::size_t out_r = (nr - 1) / fr + 1;
  auto pick = [&](const Field2D& src) {
    Field2D dst(out_s, out_r);
    for (std::size_t i = 0; i < out_s; ++i) {
      for (std::size_t j = 0; j < out_r; ++j) dst(i, j) = src(i * fs, j * fr);
    }
    return dst;
  };
  return {pick(fields.u_par), pick(fields.u_perp), pick(fields.du_perp_dsigma),
          pick(fields.du_perp_drho)};
}

VelocityFields zero_fields(std::size_t sigma_nodes, std::size_t rho_nodes) {
  return {Field2D(sigma_nodes, rho_nodes), Field2D(sigma_nodes, rho_nodes),
          Field2D(sigma_nodes, rho_nodes), Field2D(sigma_nodes, rho_nodes)};
}

}  // namespace boomprop
