#pragma once

#include <cstdlib>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "abelpide/errors.hpp"
#include "abelpide/experiments.hpp"
#include "abelpide/kernel.hpp"
#include "abelpide/model.hpp"

namespace abelpide {

/// Flat `key = value` entries. Blank lines and `#` comments are skipped,
/// values may be double-quoted, lists are comma separated inside [ ].
using ConfigMap = std::map<std::string, std::string>;

namespace config_detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

}  // namespace config_detail

inline ConfigMap parse_config(std::istream& in) {
  using namespace config_detail;
  ConfigMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (!out.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

inline ConfigMap parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline double config_number(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *config_detail::trim(end).c_str() != '\0') {
    throw ConfigError("config: '" + key + "' is not a number: '" + value + "'");
  }
  return v;
}

inline int config_int(const std::string& key, const std::string& value) {
  const double v = config_number(key, value);
  if (v != static_cast<double>(static_cast<long long>(v)) || v < -2e9 || v > 2e9) {
    throw ConfigError("config: '" + key + "' must be an integer");
  }
  return static_cast<int>(v);
}

inline std::vector<double> config_list(const std::string& key, std::string value) {
  value = config_detail::trim(value);
  if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
    value = value.substr(1, value.size() - 2);
  }
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = config_detail::trim(item);
    if (!item.empty()) out.push_back(config_number(key, item));
  }
  if (out.empty()) throw ConfigError("config: '" + key + "' must be a non-empty list");
  return out;
}

/// Everything one CLI invocation needs: the model plus study parameters.
struct ExperimentConfig {
  ModelConfig model;
  std::vector<int> levels;
  std::vector<double> alphas{0.2, 0.5, 0.8, 1.0};
  std::vector<double> mus{0.1, 0.2, 0.4};
  double probe_x = 0.5;
  // Kernel tables.
  double t_min = 1e-3;
  double t_max = 1e3;
  int points = 121;
  Spacing spacing = Spacing::log;
  double ml_beta = 0.3;
  std::vector<double> family_rates{0.1, 1.0, 10.0};
};

/// Reads `cfg` on top of `base`. Keys not listed below are rejected.
inline ExperimentConfig apply_config(const ConfigMap& cfg, ExperimentConfig base) {
  static const std::set<std::string> known{
      "domain.a",    "domain.b",      "grid.M",         "grid.N",        "grid.T",
      "model.mu",    "model.zeta",    "alpha.kind",     "alpha.c0",      "alpha.c1",
      "alpha.a",     "kernel.kind",   "kernel.beta",    "forcing.kind",  "forcing.x0",
      "forcing.width", "forcing.rate", "forcing.amplitude", "initial.kind", "initial.amplitude",
      "scheme",      "study.levels",  "study.alphas",   "study.mus",     "probe.x",
      "table.t_min", "table.t_max",   "table.points",   "table.spacing", "table.beta",
      "table.rates"};
  for (const auto& [key, value] : cfg) {
    if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
  }
  const auto has = [&](const char* k) { return cfg.count(k) > 0; };
  const auto num = [&](const char* k, double fallback) {
    return has(k) ? config_number(k, cfg.at(k)) : fallback;
  };
  const auto integer = [&](const char* k, int fallback) {
    return has(k) ? config_int(k, cfg.at(k)) : fallback;
  };

  ExperimentConfig out = std::move(base);
  ModelConfig& m = out.model;
  m.a = num("domain.a", m.a);
  m.b = num("domain.b", m.b);
  m.T = num("grid.T", m.T);
  m.M = integer("grid.M", m.M);
  m.N = integer("grid.N", m.N);
  m.mu = num("model.mu", m.mu);
  m.zeta = num("model.zeta", m.zeta);

  try {
    if (has("alpha.kind") || has("kernel.kind")) {
      const std::string akind = has("alpha.kind") ? cfg.at("alpha.kind") : "linear";
      const double c0 = num("alpha.c0", 1.0);
      ExponentSpec spec = ExponentSpec::constant(c0, m.T);
      if (akind == "constant") {
        spec = ExponentSpec::constant(c0, m.T);
      } else if (akind == "linear") {
        spec = ExponentSpec::linear(c0, num("alpha.c1", -0.8), m.T);
      } else if (akind == "exp_decay") {
        spec = ExponentSpec::exp_decay(c0, num("alpha.c1", 0.0), num("alpha.a", 0.0), m.T);
      } else {
        throw ConfigError("config: alpha.kind must be constant, linear or exp_decay");
      }
      const std::string kkind = has("kernel.kind") ? cfg.at("kernel.kind") : "multiscale";
      if (kkind == "multiscale") {
        m.kernel = multiscale_kernel(spec);
      } else if (kkind == "short_asymptote") {
        m.kernel = short_asymptote_kernel(spec);
      } else if (kkind == "long_asymptote") {
        m.kernel = long_asymptote_kernel(spec);
      } else if (kkind == "constant_abel") {
        m.kernel = constant_abel_kernel(c0);
      } else if (kkind == "mittag_leffler") {
        m.kernel = mittag_leffler_kernel(num("kernel.beta", 0.3));
      } else {
        throw ConfigError("config: unknown kernel.kind '" + kkind + "'");
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid kernel: ") + e.what());
  }

  if (has("forcing.kind")) {
    const std::string& k = cfg.at("forcing.kind");
    if (k == "zero") {
      m.forcing = SourceField::zero();
    } else if (k == "one") {
      m.forcing = SourceField::one();
    } else if (k == "gauss_source") {
      m.forcing = SourceField::gauss(0.5, 1.0, 1.0);
    } else {
      throw ConfigError("config: forcing.kind must be zero, one or gauss_source");
    }
  }
  m.forcing.center = num("forcing.x0", m.forcing.center);
  m.forcing.width = num("forcing.width", m.forcing.width);
  m.forcing.rate = num("forcing.rate", m.forcing.rate);
  m.forcing.amplitude = num("forcing.amplitude", m.forcing.amplitude);
  if (!(m.forcing.width > 0.0)) throw ConfigError("config: forcing.width must be positive");

  if (has("initial.kind")) {
    const std::string& k = cfg.at("initial.kind");
    if (k == "zero") {
      m.initial = InitialField::zero();
    } else if (k == "sine" || k == "sine_ic") {
      m.initial = InitialField::sine();
    } else {
      throw ConfigError("config: initial.kind must be zero or sine");
    }
  }
  m.initial.amplitude = num("initial.amplitude", m.initial.amplitude);

  if (has("scheme")) {
    const std::string& s = cfg.at("scheme");
    if (s == "cn2") {
      m.scheme = Scheme::cn2;
    } else if (s == "be1") {
      m.scheme = Scheme::be1;
    } else {
      throw ConfigError("config: scheme must be cn2 or be1");
    }
  }

  if (has("study.levels")) {
    out.levels.clear();
    for (double v : config_list("study.levels", cfg.at("study.levels"))) {
      out.levels.push_back(config_int("study.levels", fmt::format("{}", v)));
    }
  }
  if (has("study.alphas")) out.alphas = config_list("study.alphas", cfg.at("study.alphas"));
  if (has("study.mus")) out.mus = config_list("study.mus", cfg.at("study.mus"));
  if (has("table.rates")) out.family_rates = config_list("table.rates", cfg.at("table.rates"));
  out.probe_x = num("probe.x", out.probe_x);
  out.t_min = num("table.t_min", out.t_min);
  out.t_max = num("table.t_max", out.t_max);
  out.points = integer("table.points", out.points);
  out.ml_beta = num("table.beta", out.ml_beta);
  if (has("table.spacing")) {
    const std::string& s = cfg.at("table.spacing");
    if (s == "log") {
      out.spacing = Spacing::log;
    } else if (s == "linear") {
      out.spacing = Spacing::linear;
    } else {
      throw ConfigError("config: table.spacing must be linear or log");
    }
  }

  try {
    m.validate();
    if (!out.levels.empty()) check_doubling_levels(out.levels);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(out.t_min > 0.0 && out.t_max > out.t_min) || out.points < 2) {
    throw ConfigError("config: need 0 < table.t_min < table.t_max and table.points >= 2");
  }
  return out;
}

// Default setups per subcommand.

inline ExperimentConfig default_time_study() {
  ExperimentConfig e;
  e.model = convergence_benchmark();
  e.levels = {64, 128, 256, 512, 1024};
  return e;
}

inline ExperimentConfig default_space_study() {
  ExperimentConfig e;
  e.model = convergence_benchmark();
  e.model.N = 32;
  e.levels = {32, 64, 128, 256, 512};
  return e;
}

inline ExperimentConfig default_parameter_study() {
  ExperimentConfig e;
  e.model = parameter_study_config();
  e.model.kernel = multiscale_kernel(ExponentSpec::linear(1.0, -0.05, e.model.T));
  return e;
}

inline ExperimentConfig default_crossover() {
  ExperimentConfig e;
  e.model = crossover_config();
  e.probe_x = 5.0;
  return e;
}

inline ExperimentConfig default_kernel_compare() {
  ExperimentConfig e;
  e.model.kernel = multiscale_kernel(crossover_exponent());
  return e;
}

}  // namespace abelpide
