// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0
//
// dtomo -- detector tomography pipeline driver.
//
// Subcommands: simulate, reconstruct, report, sweep, wigner.
// Exit codes are stable API: 0 ok, 2 usage/config, 3 I/O, 4 data validation,
// 5 non-convergence, 6 invalid POVM input.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dtomo/dtomo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitData = 4;
constexpr int kExitNoConvergence = 5;
constexpr int kExitBadPovm = 6;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> epsilon;
};

dtomo::RunConfig effective_config(const CommonOpts& common) {
  dtomo::RunConfig cfg;
  if (!common.config_path.empty()) {
    cfg = dtomo::load_config(common.config_path);
  } else {
    cfg.source_hash = dtomo::fnv1a_hex("");
    cfg.validate();
  }
  if (common.seed) cfg.seed = *common.seed;
  if (common.threads) cfg.threads = *common.threads;
  if (common.epsilon) cfg.solver.epsilon = *common.epsilon;
  cfg.validate();
  return cfg;
}

int resolve_threads(const dtomo::RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

dtomo::FileMetadata metadata_for(const dtomo::RunConfig& cfg) {
  dtomo::FileMetadata meta;
  meta.config_hash = cfg.source_hash;
  meta.seed = cfg.seed;
  meta.tool_version = dtomo::kVersion;
  return meta;
}

std::vector<dtomo::CoherentProbe> load_probes(const std::string& path,
                                              const dtomo::RunConfig& cfg) {
  return dtomo::read_probes_csv(path, cfg.calibration);
}

int truncation_for(const dtomo::RunConfig& cfg, const std::vector<dtomo::CoherentProbe>& probes) {
  if (cfg.probes.truncation_dim > 0) return cfg.probes.truncation_dim;
  double max_mu = 0.0;
  for (const auto& p : probes) max_mu = std::max(max_mu, p.mean_photon);
  return dtomo::choose_truncation(max_mu, cfg.probes.truncation_sigma);
}

// ---------------------------------------------------------------------------

int cmd_simulate(const CommonOpts& common, const std::string& out_counts,
                 const std::string& out_probes, std::optional<std::int64_t> trials_flag) {
  dtomo::RunConfig cfg = effective_config(common);
  if (trials_flag) cfg.simulator.trials = *trials_flag;
  cfg.validate();

  const auto probes = dtomo::default_probe_ladder(cfg.probes.count);
  const auto counts =
      dtomo::simulate_counts(cfg.simulator.model, probes, cfg.simulator.trials, cfg.seed);

  const auto meta = metadata_for(cfg);
  dtomo::write_counts_csv(out_counts, counts, meta);
  dtomo::write_probes_csv(out_probes, probes, meta);
  return kExitOk;
}

int cmd_reconstruct(const CommonOpts& common, const std::string& counts_path,
                    const std::string& probes_path, const std::string& out_path,
                    std::optional<int> truncation_flag) {
  dtomo::RunConfig cfg = effective_config(common);
  if (truncation_flag) cfg.probes.truncation_dim = *truncation_flag;

  const auto counts = dtomo::read_counts_csv(counts_path);
  const auto probes = load_probes(probes_path, cfg);
  const auto p_matrix = dtomo::build_outcome_matrix(counts);
  const auto f_matrix = dtomo::build_probe_matrix(probes, truncation_for(cfg, probes));

  const auto [povm, diag] = dtomo::reconstruct(p_matrix, f_matrix, cfg.solver);

  dtomo::PovmFile file;
  file.povm = povm;
  file.diagnostics = diag;
  file.epsilon = cfg.solver.epsilon;
  file.meta = metadata_for(cfg);
  dtomo::write_povm_json(out_path, file);

  if (!diag.converged) {
    std::cerr << "dtomo: reconstruction did not converge within "
              << cfg.solver.max_iterations << " iterations (output written)\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

int cmd_report(const CommonOpts& common, const std::string& povm_path,
               const std::string& counts_path, const std::string& probes_path, int mc_samples,
               std::optional<bool> correlated_flag) {
  dtomo::RunConfig cfg = effective_config(common);
  if (correlated_flag) cfg.mc.correlated = *correlated_flag;

  dtomo::PovmFile file;
  try {
    file = dtomo::read_povm_json(povm_path);
  } catch (const dtomo::DataError& e) {
    // malformed input is a usage-grade failure for this command
    throw dtomo::ConfigError(e.what());
  }
  dtomo::validate_povm(file.povm);

  dtomo::MeritReport report;
  if (mc_samples > 0) {
    if (counts_path.empty() || probes_path.empty()) {
      throw dtomo::ConfigError("--mc requires --counts and --probes");
    }
    const auto counts = dtomo::read_counts_csv(counts_path);
    const auto probes = load_probes(probes_path, cfg);
    dtomo::SolverConfig solver = cfg.solver;
    solver.epsilon = file.epsilon;  // uncertainty propagation mirrors the stored solve
    dtomo::UncertaintyOptions options;
    options.correlated = cfg.mc.correlated;
    options.truncation_sigma = cfg.probes.truncation_sigma;
    options.truncation_dim = cfg.probes.truncation_dim > 0 ? cfg.probes.truncation_dim
                                                           : file.povm.truncation_dim;
    options.threads = resolve_threads(cfg);
    report = dtomo::propagate_uncertainty(counts, probes, cfg.mc.amplitude_rel_sigma, mc_samples,
                                          solver, cfg.seed, options);
  } else {
    report.efficiency = dtomo::efficiency(file.povm);
    report.dark_prob = dtomo::dark_count_probability(file.povm);
    report.xtalk_prob =
        file.povm.n_outcomes >= 3 ? dtomo::crosstalk_probability(file.povm) : 0.0;
    report.epsilon_used = file.epsilon;
    report.has_sigmas = false;
  }

  std::cout << dtomo::merit_report_json(report, metadata_for(cfg)) << "\n";
  return kExitOk;
}

int cmd_sweep(const CommonOpts& common, const std::string& counts_path,
              const std::string& probes_path, const std::string& out_path,
              const std::string& grid_spec, int target_i, int target_n,
              std::optional<int> truncation_flag) {
  dtomo::RunConfig cfg = effective_config(common);
  if (truncation_flag) cfg.probes.truncation_dim = *truncation_flag;

  std::vector<double> grid;
  if (grid_spec.rfind("log:", 0) == 0) {
    // log:lo:hi:n -> n log-spaced points
    double lo = 0.0, hi = 0.0;
    int n = 0;
    std::istringstream in(grid_spec.substr(4));
    std::string lo_s, hi_s, n_s;
    if (!std::getline(in, lo_s, ':') || !std::getline(in, hi_s, ':') || !std::getline(in, n_s)) {
      throw dtomo::ConfigError("bad --grid, expected log:lo:hi:n");
    }
    try {
      lo = std::stod(lo_s);
      hi = std::stod(hi_s);
      n = std::stoi(n_s);
    } catch (const std::exception&) {
      throw dtomo::ConfigError("bad --grid, expected log:lo:hi:n");
    }
    if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw dtomo::ConfigError("bad log grid bounds");
    for (int k = 0; k < n; ++k) {
      const double t = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
      grid.push_back(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
    }
  } else {
    std::istringstream in(grid_spec);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (tok.empty()) continue;
      try {
        grid.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw dtomo::ConfigError("bad epsilon value '" + tok + "' in --grid");
      }
    }
  }
  if (grid.empty()) throw dtomo::ConfigError("empty epsilon grid");

  const auto counts = dtomo::read_counts_csv(counts_path);
  const auto probes = load_probes(probes_path, cfg);
  const auto p_matrix = dtomo::build_outcome_matrix(counts);
  const auto f_matrix = dtomo::build_probe_matrix(probes, truncation_for(cfg, probes));

  const auto rows = dtomo::sweep_smoothing(p_matrix, f_matrix, grid, target_i, target_n,
                                           cfg.solver, resolve_threads(cfg));
  dtomo::write_sweep_csv(out_path, rows, target_i, target_n, metadata_for(cfg));
  return kExitOk;
}

int cmd_wigner(const CommonOpts& common, const std::string& povm_path, int outcome,
               const std::string& out_path, double extent, int resolution,
               const std::string& format) {
  dtomo::RunConfig cfg = effective_config(common);

  dtomo::PovmFile file;
  try {
    file = dtomo::read_povm_json(povm_path);
  } catch (const dtomo::DataError& e) {
    throw dtomo::ConfigError(e.what());
  }
  dtomo::validate_povm(file.povm);
  if (outcome < 0 || outcome >= file.povm.n_outcomes) {
    throw dtomo::ConfigError("outcome index " + std::to_string(outcome) +
                             " outside [0, " + std::to_string(file.povm.n_outcomes) + ")");
  }

  dtomo::WignerGridSpec spec;
  spec.extent = extent;
  spec.resolution = resolution;
  const auto grid =
      dtomo::povm_wigner(file.povm.entries.col(outcome), spec, resolve_threads(cfg));

  if (format == "csv") {
    dtomo::write_wigner_csv(out_path, grid, metadata_for(cfg));
  } else if (format == "json") {
    dtomo::write_wigner_json(out_path, grid, metadata_for(cfg));
  } else {
    throw dtomo::ConfigError("unknown wigner format '" + format + "'");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dtomo: diagonal POVM tomography of multi-pixel click detectors"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "print help for every subcommand");

  CommonOpts common;
  app.add_option("--config", common.config_path, "run configuration file (key = value sections)")
      ->envname("DTOMO_CONFIG");
  std::uint64_t seed_val = 0;
  auto* seed_opt = app.add_option("--seed", seed_val, "override the configured random seed");
  int threads_val = 0;
  auto* threads_opt =
      app.add_option("--threads", threads_val, "worker threads (0 = hardware concurrency)");
  double eps_val = 0.0;
  auto* eps_opt =
      app.add_option("--epsilon", eps_val, "override the solver smoothing weight in [0, 1]");

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate synthetic counts from a detector model");
  std::string out_counts = "counts.csv", out_probes = "probes.csv";
  std::int64_t trials_val = 0;
  sim->add_option("--out-counts", out_counts, "counts CSV output path");
  sim->add_option("--out-probes", out_probes, "probes CSV output path");
  auto* trials_opt = sim->add_option("--trials", trials_val, "pulses per probe state");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "solve for the POVM from counts and probes");
  std::string counts_path, probes_path, out_povm = "povm.json";
  int truncation_val = 0;
  rec->add_option("--counts", counts_path, "counts CSV input")->required();
  rec->add_option("--probes", probes_path, "probes CSV input")->required();
  rec->add_option("--out", out_povm, "POVM JSON output path");
  auto* trunc_opt = rec->add_option("--truncation", truncation_val,
                                    "override the Hilbert-space truncation dimension");

  // report
  auto* rep = app.add_subcommand("report", "figures of merit from a reconstructed POVM");
  std::string rep_povm, rep_counts, rep_probes;
  int mc_samples = 0;
  bool correlated = false;
  rep->add_option("--povm", rep_povm, "POVM JSON input")->required();
  rep->add_option("--counts", rep_counts, "counts CSV (needed for --mc)");
  rep->add_option("--probes", rep_probes, "probes CSV (needed for --mc)");
  rep->add_option("--mc", mc_samples, "Monte-Carlo samples for uncertainty propagation");
  auto* corr_opt = rep->add_flag("--correlated", correlated,
                                 "perturb all probe amplitudes by one shared factor");

  // sweep
  auto* swp = app.add_subcommand("sweep", "smoothing-parameter sweep of one POVM element");
  std::string swp_counts, swp_probes, swp_out = "sweep.csv", grid_spec;
  int target_i = 0, target_n = 1, swp_trunc = 0;
  swp->add_option("--counts", swp_counts, "counts CSV input")->required();
  swp->add_option("--probes", swp_probes, "probes CSV input")->required();
  swp->add_option("--out", swp_out, "sweep CSV output path");
  swp->add_option("--grid", grid_spec, "epsilon grid: comma list, or log:lo:hi:n")->required();
  swp->add_option("--target-i", target_i, "photon index of the tracked element");
  swp->add_option("--target-n", target_n, "outcome index of the tracked element");
  auto* swp_trunc_opt = swp->add_option("--truncation", swp_trunc,
                                        "override the Hilbert-space truncation dimension");

  // wigner
  auto* wig = app.add_subcommand("wigner", "phase-space Wigner function of one outcome");
  std::string wig_povm, wig_out = "wigner.csv", wig_format = "csv";
  int outcome = 0, resolution = 201;
  double extent = 4.0;
  wig->add_option("--povm", wig_povm, "POVM JSON input")->required();
  wig->add_option("--outcome", outcome, "outcome column to export");
  wig->add_option("--out", wig_out, "output path");
  wig->add_option("--extent", extent, "axes span [-extent, extent]");
  wig->add_option("--resolution", resolution, "grid points per axis");
  wig->add_option("--format", wig_format, "csv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (seed_opt->count() > 0) common.seed = seed_val;
  if (threads_opt->count() > 0) common.threads = threads_val;
  if (eps_opt->count() > 0) common.epsilon = eps_val;

  try {
    if (sim->parsed()) {
      return cmd_simulate(common, out_counts, out_probes,
                          trials_opt->count() > 0 ? std::optional(trials_val) : std::nullopt);
    }
    if (rec->parsed()) {
      return cmd_reconstruct(common, counts_path, probes_path, out_povm,
                             trunc_opt->count() > 0 ? std::optional(truncation_val)
                                                    : std::nullopt);
    }
    if (rep->parsed()) {
      return cmd_report(common, rep_povm, rep_counts, rep_probes, mc_samples,
                        corr_opt->count() > 0 ? std::optional(correlated) : std::nullopt);
    }
    if (swp->parsed()) {
      return cmd_sweep(common, swp_counts, swp_probes, swp_out, grid_spec, target_i, target_n,
                       swp_trunc_opt->count() > 0 ? std::optional(swp_trunc) : std::nullopt);
    }
    if (wig->parsed()) {
      return cmd_wigner(common, wig_povm, outcome, wig_out, extent, resolution, wig_format);
    }
  } catch (const dtomo::ConfigError& e) {
    std::cerr << "dtomo: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dtomo::DomainError& e) {
    std::cerr << "dtomo: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dtomo::ShapeError& e) {
    std::cerr << "dtomo: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dtomo::IoError& e) {
    std::cerr << "dtomo: " << e.what() << "\n";
    return kExitIo;
  } catch (const dtomo::DataError& e) {
    std::cerr << "dtomo: " << e.what() << "\n";
    return kExitData;
  } catch (const dtomo::TruncationError& e) {
    std::cerr << "dtomo: " << e.what() << "\n";
    return kExitData;
  } catch (const dtomo::PovmValidationError& e) {
    std::cerr << "dtomo: " << e.what() << "\n";
    return kExitBadPovm;
  } catch (const std::exception& e) {
    std::cerr << "dtomo: internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
