// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#include "dtomo/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dtomo/errors.hpp"
#include "dtomo/version.hpp"

namespace dtomo {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) fields.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void write_meta_comments(std::ofstream& out, const FileMetadata& meta) {
  out << "# tool_version=" << (meta.tool_version.empty() ? kVersion : meta.tool_version) << "\n";
  if (!meta.config_hash.empty()) out << "# config_hash=" << meta.config_hash << "\n";
  out << "# seed=" << meta.seed << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::int64_t to_int(const std::string& field, const std::string& context) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw DataError(context + ": '" + field + "' is not a base-10 integer");
  }
  return v;
}

double to_real(const std::string& field, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw DataError(context + ": '" + field + "' is not a real number");
  }
}

json meta_to_json(const FileMetadata& meta) {
  return json{{"config_hash", meta.config_hash},
              {"seed", meta.seed},
              {"tool_version", meta.tool_version.empty() ? kVersion : meta.tool_version}};
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw IoError("failed to format a double");
  return std::string(buf, ptr);
}

void write_counts_csv(const std::string& path, const std::vector<ThresholdCounts>& counts,
                      const FileMetadata& meta) {
  if (counts.empty()) throw DataError("no counts to write");
  auto out = open_out(path);
  write_meta_comments(out, meta);
  const std::size_t k = counts.front().cumulative.size();
  out << "probe_label,trials";
  for (std::size_t n = 1; n <= k; ++n) out << ",c" << n;
  out << "\n";
  for (const auto& tc : counts) {
    if (tc.cumulative.size() != k) {
      throw ShapeError("probe '" + tc.probe_label + "' has inconsistent threshold count");
    }
    out << tc.probe_label << "," << tc.trials;
    for (const auto c : tc.cumulative) out << "," << c;
    out << "\n";
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

std::vector<ThresholdCounts> read_counts_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  std::vector<std::string> header;
  std::vector<ThresholdCounts> out;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (header.empty()) {
      header = split_csv_line(line);
      if (header.size() < 3 || header[0] != "probe_label" || header[1] != "trials") {
        throw DataError("counts file '" + path + "': expected header probe_label,trials,c1,...");
      }
      for (std::size_t n = 2; n < header.size(); ++n) {
        if (header[n] != "c" + std::to_string(n - 1)) {
          throw DataError("counts file '" + path + "': bad threshold column '" + header[n] + "'");
        }
      }
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw DataError("counts file '" + path + "': row for '" +
                      (fields.empty() ? "?" : fields[0]) + "' has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    ThresholdCounts tc;
    tc.probe_label = fields[0];
    tc.trials = to_int(fields[1], "probe '" + tc.probe_label + "' trials");
    for (std::size_t n = 2; n < fields.size(); ++n) {
      tc.cumulative.push_back(to_int(fields[n], "probe '" + tc.probe_label + "' " + header[n]));
    }
    out.push_back(std::move(tc));
  }
  if (out.empty()) throw DataError("counts file '" + path + "' contains no data rows");
  return out;
}

void write_probes_csv(const std::string& path, const std::vector<CoherentProbe>& probes,
                      const FileMetadata& meta) {
  if (probes.empty()) throw DataError("no probes to write");
  auto out = open_out(path);
  write_meta_comments(out, meta);
  out << "label,mean_photon\n";
  for (const auto& p : probes) {
    out << p.label << "," << format_double(p.mean_photon) << "\n";
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

std::vector<CoherentProbe> read_probes_csv(const std::string& path,
                                           const std::optional<CalibrationConstants>& calib) {
  auto in = open_in(path);
  std::string line;
  std::vector<std::string> header;
  bool from_clicks = false;
  std::vector<CoherentProbe> out;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (header.empty()) {
      header = split_csv_line(line);
      if (header.size() == 2 && header[0] == "label" && header[1] == "mean_photon") {
        from_clicks = false;
      } else if (header.size() == 2 && header[0] == "label" && header[1] == "p_click") {
        if (!calib.has_value()) {
          throw DataError("probes file '" + path +
                          "' holds click probabilities; calibration constants are required");
        }
        from_clicks = true;
      } else {
        throw DataError("probes file '" + path +
                        "': expected header label,mean_photon or label,p_click");
      }
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) {
      throw DataError("probes file '" + path + "': malformed row '" + line + "'");
    }
    CoherentProbe p;
    p.label = fields[0];
    const double v = to_real(fields[1], "probe '" + p.label + "'");
    p.mean_photon = from_clicks ? calibrate_mean_photon(v, *calib) : v;
    if (!(p.mean_photon >= 0.0)) {
      throw DataError("probe '" + p.label + "' has negative mean photon number");
    }
    out.push_back(std::move(p));
  }
  if (out.empty()) throw DataError("probes file '" + path + "' contains no data rows");
  return out;
}

void write_povm_json(const std::string& path, const PovmFile& file) {
  json cols = json::array();
  for (int n = 0; n < file.povm.n_outcomes; ++n) {
    json col = json::array();
    for (int i = 0; i < file.povm.truncation_dim; ++i) col.push_back(file.povm.entries(i, n));
    cols.push_back(std::move(col));
  }
  const json j{{"truncation_dim", file.povm.truncation_dim},
               {"n_outcomes", file.povm.n_outcomes},
               {"epsilon", file.epsilon},
               {"columns", std::move(cols)},
               {"diagnostics",
                {{"iterations_used", file.diagnostics.iterations_used},
                 {"final_objective", file.diagnostics.final_objective},
                 {"final_residual_norm", file.diagnostics.final_residual_norm},
                 {"converged", file.diagnostics.converged}}},
               {"metadata", meta_to_json(file.meta)}};
  auto out = open_out(path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("failed while writing '" + path + "'");
}

PovmFile read_povm_json(const std::string& path) {
  auto in = open_in(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("POVM file '" + path + "' is not valid JSON: " + e.what());
  }
  PovmFile file;
  try {
    file.povm.truncation_dim = j.at("truncation_dim").get<int>();
    file.povm.n_outcomes = j.at("n_outcomes").get<int>();
    file.epsilon = j.at("epsilon").get<double>();
    const auto& cols = j.at("columns");
    if (static_cast<int>(cols.size()) != file.povm.n_outcomes) {
      throw DataError("POVM file '" + path + "': column count disagrees with n_outcomes");
    }
    file.povm.entries.resize(file.povm.truncation_dim, file.povm.n_outcomes);
    for (int n = 0; n < file.povm.n_outcomes; ++n) {
      const auto& col = cols.at(static_cast<std::size_t>(n));
      if (static_cast<int>(col.size()) != file.povm.truncation_dim) {
        throw DataError("POVM file '" + path + "': column " + std::to_string(n) +
                        " has wrong length");
      }
      for (int i = 0; i < file.povm.truncation_dim; ++i) {
        file.povm.entries(i, n) = col.at(static_cast<std::size_t>(i)).get<double>();
      }
    }
    if (j.contains("diagnostics")) {
      const auto& d = j.at("diagnostics");
      file.diagnostics.iterations_used = d.value("iterations_used", 0L);
      file.diagnostics.final_objective = d.value("final_objective", 0.0);
      file.diagnostics.final_residual_norm = d.value("final_residual_norm", 0.0);
      file.diagnostics.converged = d.value("converged", false);
    }
    if (j.contains("metadata")) {
      const auto& m = j.at("metadata");
      file.meta.config_hash = m.value("config_hash", std::string{});
      file.meta.seed = m.value("seed", std::uint64_t{0});
      file.meta.tool_version = m.value("tool_version", std::string{});
    }
  } catch (const json::exception& e) {
    throw DataError("POVM file '" + path + "' has unexpected structure: " + e.what());
  }
  return file;
}

std::string merit_report_json(const MeritReport& report, const FileMetadata& meta) {
  json j{{"efficiency", report.efficiency},
         {"dark_prob", report.dark_prob},
         {"xtalk_prob", report.xtalk_prob},
         {"epsilon", report.epsilon_used},
         {"n_mc_samples", report.n_mc_samples},
         {"excluded_samples", report.excluded_samples},
         {"metadata", meta_to_json(meta)}};
  if (report.has_sigmas) {
    j["efficiency_sigma"] = report.efficiency_sigma;
    j["dark_prob_sigma"] = report.dark_prob_sigma;
    j["xtalk_prob_sigma"] = report.xtalk_prob_sigma;
  }
  return j.dump(2);
}

void write_sweep_csv(const std::string& path,
                     const std::vector<std::pair<double, double>>& rows, int target_i,
                     int target_n, const FileMetadata& meta) {
  auto out = open_out(path);
  write_meta_comments(out, meta);
  out << "# target_i=" << target_i << " target_n=" << target_n << "\n";
  out << "epsilon,theta\n";
  for (const auto& [eps, theta] : rows) {
    out << format_double(eps) << "," << format_double(theta) << "\n";
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

void write_wigner_csv(const std::string& path, const WignerGrid& grid, const FileMetadata& meta) {
  auto out = open_out(path);
  write_meta_comments(out, meta);
  out << "x,p,value\n";
  for (std::size_t ix = 0; ix < grid.x_axis.size(); ++ix) {
    for (std::size_t ip = 0; ip < grid.p_axis.size(); ++ip) {
      out << format_double(grid.x_axis[ix]) << "," << format_double(grid.p_axis[ip]) << ","
          << format_double(grid.values(static_cast<Eigen::Index>(ix),
                                       static_cast<Eigen::Index>(ip)))
          << "\n";
    }
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

void write_wigner_json(const std::string& path, const WignerGrid& grid,
                       const FileMetadata& meta) {
  json rows = json::array();
  for (std::size_t ix = 0; ix < grid.x_axis.size(); ++ix) {
    json row = json::array();
    for (std::size_t ip = 0; ip < grid.p_axis.size(); ++ip) {
      row.push_back(grid.values(static_cast<Eigen::Index>(ix), static_cast<Eigen::Index>(ip)));
    }
    rows.push_back(std::move(row));
  }
  const json j{{"x_axis", grid.x_axis},
               {"p_axis", grid.p_axis},
               {"values", std::move(rows)},
               {"metadata", meta_to_json(meta)}};
  auto out = open_out(path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace dtomo
