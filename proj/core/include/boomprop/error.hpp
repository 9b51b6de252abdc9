#pragma once

#include <stdexcept>
#include <string>

namespace boomprop {

/// Invalid configuration value. `key` names the offending setting when known.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what, std::string key = {})
      : std::invalid_argument(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A solver produced non-finite values or exceeded its divergence bound.
class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(const std::string& what, double sigma, double max_abs)
      : std::runtime_error(what), sigma_(sigma), max_abs_(max_abs) {}
  double sigma() const noexcept { return sigma_; }
  double max_abs() const noexcept { return max_abs_; }

 private:
  double sigma_;
  double max_abs_;
};

class CflError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Wall-clock budget exhausted (or projected to be exhausted) during a run.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double projected_seconds)
      : std::runtime_error(what), projected_(projected_seconds) {}
  double projected_seconds() const noexcept { return projected_; }

 private:
  double projected_;
};

}  // namespace boomprop
