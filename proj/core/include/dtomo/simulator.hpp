// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "dtomo/counts.hpp"
#include "dtomo/probes.hpp"
#include "dtomo/solver.hpp"

namespace dtomo {

/// Exact forward model of a K-pixel click-detector array. Photons are
/// detected with probability `efficiency` and routed uniformly over pixels;
/// unfired pixels dark-click independently with `dark_prob`; every fired
/// pixel then induces a click in each still-unfired pixel with probability
/// `xtalk_prob` in a single round (induced clicks do not cascade).
struct ArrayDetectorModel {
  int n_pixels = 4;
  double efficiency = 1.0;
  double dark_prob = 0.0;
  double xtalk_prob = 0.0;

  void validate() const;
};

/// q(j) = P(exactly j distinct pixels hit | m photons thrown uniformly and
/// independently onto n_pixels pixels), j = 0..n_pixels.
Eigen::VectorXd occupied_pixel_distribution(int m_detected, int n_pixels);

/// p(k clicks | i incident photons), k = 0..n_pixels, by exact composition of
/// binomial thinning, pixel occupancy, dark counts and single-round cross-talk.
Eigen::VectorXd click_distribution_given_photons(const ArrayDetectorModel& model, int photons);

/// Ground-truth POVM: row i = click_distribution_given_photons(model, i).
PovmMatrix true_povm(const ArrayDetectorModel& model, int truncation_dim);

/// Noiseless outcome matrix P = F * true_povm(model, M).
OutcomeMatrix exact_outcome_matrix(const ArrayDetectorModel& model, const ProbeMatrix& F);

/// Finite-sample synthetic acquisition: multinomial counts per probe from the
/// exact outcome distribution, reported in the cumulative threshold form that
/// the click_statistics path ingests. Deterministic given seed; each probe
/// owns a generator derived from (seed, probe index).
std::vector<ThresholdCounts> simulate_counts(const ArrayDetectorModel& model,
                                             const std::vector<CoherentProbe>& probes,
                                             std::int64_t trials_per_probe, std::uint64_t seed);

}  // namespace dtomo
