#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "boomprop/error.hpp"

namespace boomprop::app {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

long long parse_integer(const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw std::invalid_argument("expected an integer, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text) {
  const long long v = parse_integer(text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw std::invalid_argument("integer out of range: '" + text + "'");
  }
  return static_cast<int>(v);
}

bool parse_bool(const std::string& text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "1" || t == "true" || t == "on" || t == "yes") return true;
  if (t == "0" || t == "false" || t == "off" || t == "no") return false;
  throw std::invalid_argument("expected a boolean, got '" + text + "'");
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(parse_real(item));
  }
  return out;
}

Interval parse_interval(const std::string& text) {
  const auto v = parse_real_list(text);
  if (v.size() != 2) throw std::invalid_argument("expected 'lo, hi', got '" + text + "'");
  return {v[0], v[1]};
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_real(v[i]);
  return out;
}

struct Key {
  std::string name;
  std::vector<std::string> aliases;
  std::function<void(Settings&, const std::string&)> set;
  std::function<std::string(const Settings&)> get;
};

#define REAL_KEY(name, member)                                                  \
  Key {                                                                         \
    name, {}, [](Settings& s, const std::string& v) { s.member = parse_real(v); }, \
        [](const Settings& s) { return format_real(s.member); }                 \
  }

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys = {
      REAL_KEY("sigma_total", domain.sigma_total),
      REAL_KEY("rho_min", domain.rho_min),
      REAL_KEY("rho_max", domain.rho_max),
      REAL_KEY("theta_min", domain.theta_min),
      REAL_KEY("theta_max", domain.theta_max),
      {"n_sigma", {"N_sigma"},
       [](Settings& s, const std::string& v) { s.domain.n_sigma = parse_int(v); },
       [](const Settings& s) { return std::to_string(s.domain.n_sigma); }},
      {"n_rho", {"N_rho"},
       [](Settings& s, const std::string& v) { s.domain.n_rho = parse_int(v); },
       [](const Settings& s) { return std::to_string(s.domain.n_rho); }},
      {"n_theta", {"N_theta"},
       [](Settings& s, const std::string& v) { s.domain.n_theta = parse_int(v); },
       [](const Settings& s) { return std::to_string(s.domain.n_theta); }},
      {"absorption", {"A"},
       [](Settings& s, const std::string& v) { s.domain.absorption = parse_real(v); },
       [](const Settings& s) { return format_real(s.domain.absorption); }},
      {"nonlinearity", {"B"},
       [](Settings& s, const std::string& v) { s.domain.nonlinearity = parse_real(v); },
       [](const Settings& s) { return format_real(s.domain.nonlinearity); }},
      {"roi_rho", {},
       [](Settings& s, const std::string& v) { s.domain.roi_rho = parse_interval(v); },
       [](const Settings& s) { return join({s.domain.roi_rho.lo, s.domain.roi_rho.hi}); }},
      {"roi_theta", {},
       [](Settings& s, const std::string& v) { s.domain.roi_theta = parse_interval(v); },
       [](const Settings& s) { return join({s.domain.roi_theta.lo, s.domain.roi_theta.hi}); }},
      {"turbulence", {},
       [](Settings& s, const std::string& v) { s.turbulence_enabled = parse_bool(v); },
       [](const Settings& s) { return std::string(s.turbulence_enabled ? "on" : "off"); }},
      {"field_master", {},
       [](Settings& s, const std::string& v) { s.field_master = parse_bool(v); },
       [](const Settings& s) { return std::string(s.field_master ? "on" : "off"); }},
      {"n_modes", {},
       [](Settings& s, const std::string& v) { s.turbulence.n_modes = parse_int(v); },
       [](const Settings& s) { return std::to_string(s.turbulence.n_modes); }},
      REAL_KEY("sigma_u", turbulence.sigma_u),
      REAL_KEY("c0", turbulence.c0),
      REAL_KEY("pulse_duration", turbulence.pulse_duration),
      REAL_KEY("lambda", turbulence.lambda),
      REAL_KEY("corr_length", turbulence.corr_length),
      REAL_KEY("k_min", turbulence.k_min),
      REAL_KEY("k_max", turbulence.k_max),
      {"seed", {},
       [](Settings& s, const std::string& v) {
         const long long x = parse_integer(v);
         if (x < 0) throw std::invalid_argument("seed must be non-negative");
         s.turbulence.seed = static_cast<std::uint64_t>(x);
       },
       [](const Settings& s) { return std::to_string(s.turbulence.seed); }},
      {"solver", {},
       [](Settings& s, const std::string& v) { s.solver = parse_solver_kind(trim(v)); },
       [](const Settings& s) { return std::string(to_string(s.solver)); }},
      {"precision", {},
       [](Settings& s, const std::string& v) {
         const auto t = trim(v);
         if (t == "double") s.precision = Precision::f64;
         else if (t == "single") s.precision = Precision::f32;
         else throw std::invalid_argument("expected double or single, got '" + v + "'");
       },
       [](const Settings& s) {
         return std::string(s.precision == Precision::f64 ? "double" : "single");
       }},
      {"diffraction", {},
       [](Settings& s, const std::string& v) {
         const auto t = trim(v);
         if (t == "direct") s.diffraction = DiffractionSum::direct;
         else if (t == "running") s.diffraction = DiffractionSum::running;
         else throw std::invalid_argument("expected direct or running, got '" + v + "'");
       },
       [](const Settings& s) {
         return std::string(s.diffraction == DiffractionSum::direct ? "direct" : "running");
       }},
      {"threads", {},
       [](Settings& s, const std::string& v) {
         s.threads = parse_int(v);
         if (s.threads < 0) throw std::invalid_argument("threads must be >= 0");
       },
       [](const Settings& s) { return std::to_string(s.threads); }},
      {"deterministic", {},
       [](Settings& s, const std::string& v) { s.deterministic = parse_bool(v); },
       [](const Settings& s) { return std::string(s.deterministic ? "on" : "off"); }},
      {"budget_seconds", {},
       [](Settings& s, const std::string& v) {
         if (trim(v) == "none") {
           s.budget_seconds.reset();
           return;
         }
         const double b = parse_real(v);
         if (!(b > 0)) throw std::invalid_argument("budget must be positive");
         s.budget_seconds = b;
       },
       [](const Settings& s) {
         return s.budget_seconds ? format_real(*s.budget_seconds) : std::string("none");
       }},
      {"snapshots", {},
       [](Settings& s, const std::string& v) { s.snapshots = parse_real_list(v); },
       [](const Settings& s) { return join(s.snapshots); }},
      REAL_KEY("probe_rho", probe_rho),
  };
  return keys;
}

#undef REAL_KEY

const Key* find_key(const std::string& name) {
  for (const auto& k : key_table()) {
    if (k.name == name) return &k;
    if (std::find(k.aliases.begin(), k.aliases.end(), name) != k.aliases.end()) return &k;
  }
  return nullptr;
}

std::string where(const Assignment& a) {
  return a.line > 0 ? a.origin + ":" + std::to_string(a.line) : a.origin;
}

}  // namespace

double parse_real(const std::string& text) {
  std::string t = trim(text);
  double factor = 1.0;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    t = trim(t.substr(0, t.size() - 2));
    if (!t.empty() && t.back() == '*') t = trim(t.substr(0, t.size() - 1));
    if (t.empty() || t == "+") t = "1";
    if (t == "-") t = "-1";
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw std::invalid_argument("expected a number, got '" + text + "'");
  }
  return v * factor;
}

std::vector<Assignment> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string(), "config");
  std::vector<Assignment> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(number) +
                            ": expected 'key = value'",
                        trim(line));
    }
    out.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1)), path.string(), number});
  }
  return out;
}

Assignment parse_assignment(const std::string& text, const std::string& origin) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw ConfigError(origin + ": expected key=value, got '" + text + "'", trim(text));
  }
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1)), origin, 0};
}

Settings resolve_settings(const std::vector<Assignment>& file,
                          const std::vector<Assignment>& flags) {
  const Assignment* preset = nullptr;
  for (const auto* layer : {&file, &flags}) {
    for (const auto& a : *layer) {
      if (a.key == "set") preset = &a;
    }
  }
  Settings s;
  if (preset) {
    try {
      s.grid_set = parse_int(preset->value);
      s.domain = grid_set(s.grid_set);
    } catch (const std::exception& e) {
      throw ConfigError("set (" + where(*preset) + "): " + e.what(), "set");
    }
  } else {
    s.domain = grid_set(1);
  }

  std::map<std::string, std::string> origin;
  for (const auto* layer : {&file, &flags}) {
    for (const auto& a : *layer) {
      if (a.key == "set") continue;
      const Key* key = find_key(a.key);
      if (!key) throw ConfigError("unknown key '" + a.key + "' (" + where(a) + ")", a.key);
      try {
        key->set(s, a.value);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError(key->name + " (" + where(a) + "): " + e.what(), key->name);
      }
      origin[key->name] = where(a);
    }
  }

  // Scales not given explicitly follow c0 and the pulse duration.
  auto& t = s.turbulence;
  if (!origin.count("lambda")) t.lambda = t.c0 * t.pulse_duration;
  if (!origin.count("corr_length")) t.corr_length = 4.0 * t.lambda;
  if (!origin.count("k_min")) t.k_min = 0.1 / t.corr_length;
  if (!origin.count("k_max")) t.k_max = 9.0 / t.corr_length;

  auto rethrow = [&](const ConfigError& e) {
    const auto it = origin.find(e.key());
    const std::string from = it != origin.end() ? it->second : "defaults";
    throw ConfigError(std::string(e.what()) + " (" + from + ")", e.key());
  };
  try {
    s.domain.validate();
    t.validate();
  } catch (const ConfigError& e) {
    rethrow(e);
  }
  return s;
}

std::vector<std::pair<std::string, std::string>> to_assignments(const Settings& settings) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("set", std::to_string(settings.grid_set));
  for (const auto& k : key_table()) out.emplace_back(k.name, k.get(settings));
  return out;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v{"set"};
    for (const auto& k : key_table()) v.push_back(k.name);
    return v;
  }();
  return names;
}

std::vector<double> default_snapshot_sigmas(const DomainConfig& domain) {
  std::vector<double> out;
  for (int i = 1; i <= 10; ++i) out.push_back(domain.sigma_total * i / 10.0);
  for (double s : {41.0, 115.0}) {
    if (s <= domain.sigma_total) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::set<int> snapshot_steps(const Settings& settings) {
  const auto& d = settings.domain;
  const auto sigmas = settings.snapshots.empty() ? default_snapshot_sigmas(d) : settings.snapshots;
  std::set<int> steps{d.n_sigma};
  for (double s : sigmas) {
    if (s < 0.0 || s > d.sigma_total) {
      throw ConfigError("snapshots: sigma " + format_real(s) + " outside [0, sigma_total]",
                        "snapshots");
    }
    steps.insert(static_cast<int>(std::lround(s / d.d_sigma())));
  }
  return steps;
}

}  // namespace boomprop::app
