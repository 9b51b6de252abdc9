#include "boomprop/domain.hpp"

#include <cmath>
#include <string>

#include "boomprop/error.hpp"

namespace boomprop {
namespace {

void require(bool condition, const char* key, const std::string& message) {
  if (!condition) throw ConfigError(std::string(key) + ": " + message, key);
}

bool inside(Interval inner, double lo, double hi) {
  return inner.lo >= lo && inner.hi <= hi && inner.lo <= inner.hi;
}

}  // namespace

void DomainConfig::validate() const {
  require(std::isfinite(sigma_total) && sigma_total > 0, "sigma_total", "must be positive");
  require(std::isfinite(rho_min) && std::isfinite(rho_max) && rho_max > rho_min, "rho_max",
          "must exceed rho_min");
  require(std::isfinite(theta_min) && std::isfinite(theta_max) && theta_max > theta_min,
          "theta_max", "must exceed theta_min");
  require(n_sigma >= 1, "n_sigma", "must be at least 1");
  require(n_rho >= 2, "n_rho", "must be at least 2");
  require(n_theta >= 2, "n_theta", "must be at least 2");
  require(std::isfinite(absorption) && absorption >= 0, "absorption", "must be >= 0");
  require(std::isfinite(nonlinearity) && nonlinearity >= 0, "nonlinearity", "must be >= 0");
  require(std::isfinite(d_sigma()) && d_sigma() > 0, "n_sigma", "step is not positive");
  require(std::isfinite(d_rho()) && d_rho() > 0, "n_rho", "step is not positive");
  require(std::isfinite(d_theta()) && d_theta() > 0, "n_theta", "step is not positive");
  require(inside(roi_rho, rho_min, rho_max), "roi_rho", "must lie inside [rho_min, rho_max]");
  require(inside(roi_theta, theta_min, theta_max), "roi_theta",
          "must lie inside [theta_min, theta_max]");
}

DomainConfig grid_set(int set) {
  if (set < 1 || set > 4) throw ConfigError("set: expected 1..4", "set");
  DomainConfig config;
  const int scale = 1 << (set - 1);
  config.n_sigma = 300 * scale;
  config.n_rho = 1250 * scale;
  config.n_theta = 7 * 64 * scale;
  return config;
}

std::vector<double> uniform_nodes(double lo, double hi, int n, int count) {
  std::vector<double> nodes(static_cast<std::size_t>(count));
  const double step = (hi - lo) / n;
  for (int i = 0; i < count; ++i) nodes[static_cast<std::size_t>(i)] = lo + i * step;
  return nodes;
}

Axes build_axes(const DomainConfig& config, RhoBoundary rho_boundary) {
  config.validate();
  Axes axes;
  axes.sigma = uniform_nodes(0.0, config.sigma_total, config.n_sigma, config.n_sigma + 1);
  axes.sigma.back() = config.sigma_total;
  const int rho_count = rho_boundary == RhoBoundary::neumann ? config.n_rho + 1 : config.n_rho;
  axes.rho = uniform_nodes(config.rho_min, config.rho_max, config.n_rho, rho_count);
  axes.theta = uniform_nodes(config.theta_min, config.theta_max, config.n_theta, config.n_theta);
  return axes;
}

}  // namespace boomprop
