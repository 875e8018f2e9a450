// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "dtomo/counts.hpp"
#include "dtomo/probes.hpp"
#include "dtomo/solver.hpp"

namespace dtomo {

/// Detector figures of merit read off a reconstructed POVM, optionally with
/// Monte-Carlo uncertainties from the probe-amplitude calibration error.
struct MeritReport {
  double efficiency = 0.0;
  double efficiency_sigma = 0.0;
  double dark_prob = 0.0;
  double dark_prob_sigma = 0.0;
  double xtalk_prob = 0.0;
  double xtalk_prob_sigma = 0.0;
  double epsilon_used = 0.0;
  int n_mc_samples = 0;
  int excluded_samples = 0;
  bool has_sigmas = false;
};

/// p(click | 1 photon) = 1 - theta_1^(0).
double efficiency(const PovmMatrix& pi);

/// p(1 click | 0 photons) = theta_0^(1).
double dark_count_probability(const PovmMatrix& pi);

/// Single-pixel cross-talk probability theta_1^(2) - theta_1^(1) * theta_0^(1).
/// May be slightly negative for noisy reconstructions; reported as-is.
double crosstalk_probability(const PovmMatrix& pi);

struct UncertaintyOptions {
  bool correlated = false;    // one shared amplitude factor per sample instead of per-probe
  double truncation_sigma = 6.0;
  int truncation_dim = 0;     // 0 = derive from the probe set via choose_truncation
  int threads = 1;
};

/// Monte-Carlo propagation of the probe-amplitude calibration uncertainty.
/// Central values come from the unperturbed reconstruction; sigmas are the
/// sample standard deviations over n_samples reconstructions whose mean
/// photon numbers are multiplied by Gaussian factors N(1, amplitude_rel_sigma)
/// truncated at zero. Deterministic given seed; samples whose reconstruction
/// fails to converge (or whose probe matrix fails truncation) are excluded
/// and counted.
MeritReport propagate_uncertainty(const std::vector<ThresholdCounts>& raw_counts,
                                  const std::vector<CoherentProbe>& calib_means,
                                  double amplitude_rel_sigma, int n_samples,
                                  const SolverConfig& config, std::uint64_t seed,
                                  const UncertaintyOptions& options = {});

}  // namespace dtomo
