// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#include "dtomo/config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "dtomo/errors.hpp"

namespace dtomo {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse real value '" + v + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse integer value '" + v + "'");
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse unsigned value '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': cannot parse boolean value '" + v + "'");
}

}  // namespace

void RunConfig::validate() const {
  calibration.validate();
  solver.validate();
  simulator.model.validate();
  if (simulator.trials < 1) throw ConfigError("simulator trials must be positive");
  if (probes.count < 1) throw ConfigError("probe count must be positive");
  if (!(probes.truncation_sigma > 0.0)) throw ConfigError("truncation_sigma must be positive");
  if (probes.truncation_dim < 0) throw ConfigError("truncation_dim must be non-negative");
  if (mc.samples < 0) throw ConfigError("mc samples must be non-negative");
  if (mc.amplitude_rel_sigma < 0.0) throw ConfigError("amplitude_rel_sigma must be non-negative");
  if (threads < 0) throw ConfigError("threads must be non-negative");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }

    if (section == "calibration") {
      if (key == "eta_cal") cfg.calibration.eta_cal = parse_real(key, value);
      else if (key == "eta_cal_sigma") cfg.calibration.eta_cal_sigma = parse_real(key, value);
      else if (key == "dark_prob_cal") cfg.calibration.dark_prob_cal = parse_real(key, value);
      else throw ConfigError("unknown key '" + key + "' in [calibration]");
    } else if (section == "solver") {
      if (key == "epsilon") cfg.solver.epsilon = parse_real(key, value);
      else if (key == "max_iterations") cfg.solver.max_iterations = parse_int(key, value);
      else if (key == "rel_tolerance") cfg.solver.rel_tolerance = parse_real(key, value);
      else if (key == "step_rule") {
        if (value == "fixed_lipschitz") cfg.solver.step_rule = StepRule::fixed_lipschitz;
        else if (value == "backtracking") cfg.solver.step_rule = StepRule::backtracking;
        else throw ConfigError("unknown step_rule '" + value + "'");
      } else throw ConfigError("unknown key '" + key + "' in [solver]");
    } else if (section == "probes") {
      if (key == "count") cfg.probes.count = static_cast<int>(parse_int(key, value));
      else if (key == "truncation_sigma") cfg.probes.truncation_sigma = parse_real(key, value);
      else if (key == "truncation_dim") cfg.probes.truncation_dim = static_cast<int>(parse_int(key, value));
      else throw ConfigError("unknown key '" + key + "' in [probes]");
    } else if (section == "mc") {
      if (key == "samples") cfg.mc.samples = static_cast<int>(parse_int(key, value));
      else if (key == "amplitude_rel_sigma") cfg.mc.amplitude_rel_sigma = parse_real(key, value);
      else if (key == "correlated") cfg.mc.correlated = parse_bool(key, value);
      else throw ConfigError("unknown key '" + key + "' in [mc]");
    } else if (section == "simulator") {
      if (key == "n_pixels") cfg.simulator.model.n_pixels = static_cast<int>(parse_int(key, value));
      else if (key == "efficiency") cfg.simulator.model.efficiency = parse_real(key, value);
      else if (key == "dark_prob") cfg.simulator.model.dark_prob = parse_real(key, value);
      else if (key == "xtalk_prob") cfg.simulator.model.xtalk_prob = parse_real(key, value);
      else if (key == "trials") cfg.simulator.trials = parse_int(key, value);
      else throw ConfigError("unknown key '" + key + "' in [simulator]");
    } else if (section == "run") {
      if (key == "seed") cfg.seed = parse_uint(key, value);
      else if (key == "threads") cfg.threads = static_cast<int>(parse_int(key, value));
      else throw ConfigError("unknown key '" + key + "' in [run]");
    } else if (section == "metadata") {
      cfg.metadata[key] = value;  // free-form
    } else if (section.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    } else {
      throw ConfigError("unknown section [" + section + "]");
    }
  }
  cfg.source_hash = fnv1a_hex(text);
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char out[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xF];
    h >>= 4;
  }
  out[16] = '\0';
  return std::string(out);
}

}  // namespace dtomo
