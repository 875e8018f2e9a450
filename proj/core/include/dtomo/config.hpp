// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "dtomo/calibration.hpp"
#include "dtomo/simulator.hpp"
#include "dtomo/solver.hpp"

namespace dtomo {

struct ProbeSetConfig {
  int count = 19;                // d^2 ladder size used when no probes file is given
  double truncation_sigma = 6.0;
  int truncation_dim = 0;        // 0 = derive via choose_truncation
};

struct McConfig {
  int samples = 100;
  double amplitude_rel_sigma = 0.05;
  bool correlated = false;
};

struct SimulatorConfig {
  ArrayDetectorModel model{4, 0.63, 2.0e-6, 0.09};
  std::int64_t trials = 5000000;
};

/// Full run configuration, loadable from a sectioned key=value file and
/// overridable per field from the command line.
struct RunConfig {
  CalibrationConstants calibration{};
  SolverConfig solver{};
  ProbeSetConfig probes{};
  McConfig mc{};
  SimulatorConfig simulator{};
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  std::map<std::string, std::string> metadata;

  // provenance of the loaded file; empty for defaults
  std::string source_hash;

  void validate() const;
};

/// Parse a config file. Sections: [calibration], [solver], [probes], [mc],
/// [simulator], [run], [metadata]. '#' starts a comment; unknown keys outside
/// [metadata] are errors. Throws ConfigError / IoError.
RunConfig load_config(const std::string& path);

/// Parse from an in-memory string (same grammar as load_config).
RunConfig parse_config(const std::string& text);

/// FNV-1a 64-bit hash of a byte string, as fixed-width hex. Used to stamp
/// output files with the provenance of the config they were produced from.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace dtomo
