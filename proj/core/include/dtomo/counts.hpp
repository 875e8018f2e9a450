// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dtomo {

/// Raw cumulative threshold counts for one probe state: trials pulses were
/// recorded, and cumulative[n-1] of them crossed the "at least n pixels
/// fired" threshold, n = 1..N-1.
struct ThresholdCounts {
  std::int64_t trials = 0;
  std::vector<std::int64_t> cumulative;
  std::string probe_label;
};

/// D x N matrix of outcome probabilities, one row per probe state.
struct OutcomeMatrix {
  Eigen::MatrixXd entries;
  std::vector<std::string> probe_order;
  int n_outcomes = 0;
};

/// Exact-count outcomes from cumulative thresholds: c'_n = c_n - c_{n+1}
/// with c_0 = trials, and the top outcome kept as "at least N-1 clicks".
/// The result always sums to trials. Throws DataError if the cumulative
/// counts are not monotone non-increasing.
std::vector<std::int64_t> orthogonalize(const ThresholdCounts& tc);

/// Stack orthogonalized counts, normalised per probe, into the outcome
/// matrix P. All probes must share the same number of thresholds.
OutcomeMatrix build_outcome_matrix(const std::vector<ThresholdCounts>& all_counts);

}  // namespace dtomo
