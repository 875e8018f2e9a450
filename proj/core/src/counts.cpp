// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#include "dtomo/counts.hpp"

#include <string>

#include "dtomo/errors.hpp"

namespace dtomo {

std::vector<std::int64_t> orthogonalize(const ThresholdCounts& tc) {
  if (tc.trials <= 0) {
    throw DataError("probe '" + tc.probe_label + "': trials must be positive");
  }
  const std::size_t n_thresholds = tc.cumulative.size();
  // c_0 = trials, then the recorded thresholds c_1..c_{N-1}
  std::int64_t prev = tc.trials;
  for (std::size_t n = 0; n < n_thresholds; ++n) {
    const std::int64_t c = tc.cumulative[n];
    if (c < 0 || c > prev) {
      throw DataError("probe '" + tc.probe_label + "': cumulative counts not monotone at c_" +
                      std::to_string(n) + " -> c_" + std::to_string(n + 1) + " (" +
                      std::to_string(prev) + " -> " + std::to_string(c) + ")");
    }
    prev = c;
  }

  std::vector<std::int64_t> exact(n_thresholds + 1);
  std::int64_t upper = tc.trials;
  for (std::size_t n = 0; n < n_thresholds; ++n) {
    exact[n] = upper - tc.cumulative[n];
    upper = tc.cumulative[n];
  }
  exact[n_thresholds] = upper;  // top outcome: "at least N-1 clicks"
  return exact;
}

OutcomeMatrix build_outcome_matrix(const std::vector<ThresholdCounts>& all_counts) {
  if (all_counts.empty()) throw DataError("no threshold counts given");
  const std::size_t n_outcomes = all_counts.front().cumulative.size() + 1;

  OutcomeMatrix out;
  out.n_outcomes = static_cast<int>(n_outcomes);
  out.entries.resize(static_cast<Eigen::Index>(all_counts.size()),
                     static_cast<Eigen::Index>(n_outcomes));
  out.probe_order.reserve(all_counts.size());

  for (std::size_t d = 0; d < all_counts.size(); ++d) {
    const ThresholdCounts& tc = all_counts[d];
    if (tc.cumulative.size() + 1 != n_outcomes) {
      throw ShapeError("probe '" + tc.probe_label + "' has " +
                       std::to_string(tc.cumulative.size() + 1) + " outcomes, expected " +
                       std::to_string(n_outcomes));
    }
    const std::vector<std::int64_t> exact = orthogonalize(tc);
    const double trials = static_cast<double>(tc.trials);
    for (std::size_t n = 0; n < n_outcomes; ++n) {
      out.entries(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n)) =
          static_cast<double>(exact[n]) / trials;
    }
    out.probe_order.push_back(tc.probe_label);
  }
  return out;
}

}  // namespace dtomo
