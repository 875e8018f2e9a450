// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtomo/calibration.hpp"
#include "dtomo/counts.hpp"
#include "dtomo/merit.hpp"
#include "dtomo/probes.hpp"
#include "dtomo/solver.hpp"
#include "dtomo/wigner.hpp"

namespace dtomo {

/// Provenance block stamped into every output file.
struct FileMetadata {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string tool_version;
};

// ---- counts CSV: header probe_label,trials,c1,...,cK; one row per probe ----
void write_counts_csv(const std::string& path, const std::vector<ThresholdCounts>& counts,
                      const FileMetadata& meta);
std::vector<ThresholdCounts> read_counts_csv(const std::string& path);

// ---- probes CSV: header label,mean_photon, or label,p_click (needs calib) ----
void write_probes_csv(const std::string& path, const std::vector<CoherentProbe>& probes,
                      const FileMetadata& meta);
std::vector<CoherentProbe> read_probes_csv(const std::string& path,
                                           const std::optional<CalibrationConstants>& calib);

// ---- POVM JSON ----
struct PovmFile {
  PovmMatrix povm;
  SolveDiagnostics diagnostics;
  double epsilon = 0.0;
  FileMetadata meta;
};
void write_povm_json(const std::string& path, const PovmFile& file);
PovmFile read_povm_json(const std::string& path);

// ---- merit report JSON (string form; the CLI prints it to stdout) ----
std::string merit_report_json(const MeritReport& report, const FileMetadata& meta);

// ---- smoothing sweep CSV: header epsilon,theta ----
void write_sweep_csv(const std::string& path,
                     const std::vector<std::pair<double, double>>& rows, int target_i,
                     int target_n, const FileMetadata& meta);

// ---- Wigner grid export ----
void write_wigner_csv(const std::string& path, const WignerGrid& grid, const FileMetadata& meta);
void write_wigner_json(const std::string& path, const WignerGrid& grid, const FileMetadata& meta);

/// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double v);

}  // namespace dtomo
