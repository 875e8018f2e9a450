// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#include "dtomo/probes.hpp"

#include <cmath>
#include <string>

#include "dtomo/errors.hpp"

namespace dtomo {

double poisson_pmf(double mu, int i) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw DomainError("Poisson mean must be finite and non-negative");
  }
  if (i < 0) return 0.0;
  if (mu == 0.0) return i == 0 ? 1.0 : 0.0;
  // log-space evaluation; naive mu^i / i! overflows for the probe ladder
  // (mu up to ~330, i up to ~440).
  return std::exp(static_cast<double>(i) * std::log(mu) - mu - std::lgamma(i + 1.0));
}

std::vector<CoherentProbe> default_probe_ladder(int count_d) {
  if (count_d < 1) throw DomainError("probe ladder needs at least one probe");
  std::vector<CoherentProbe> probes;
  probes.reserve(count_d);
  for (int d = 0; d < count_d; ++d) {
    CoherentProbe p;
    p.mean_photon = static_cast<double>(d) * static_cast<double>(d);
    p.label = "d" + std::string(d < 10 ? "0" : "") + std::to_string(d);
    probes.push_back(std::move(p));
  }
  return probes;
}

int choose_truncation(double max_mean_photon, double k_sigma) {
  if (!(max_mean_photon >= 0.0)) throw DomainError("max mean photon must be non-negative");
  if (!(k_sigma > 0.0)) throw DomainError("k_sigma must be positive");
  const double max_index = std::ceil(max_mean_photon + k_sigma * std::sqrt(max_mean_photon));
  return static_cast<int>(max_index) + 1;  // photon index -> dimension count
}

ProbeMatrix build_probe_matrix(const std::vector<CoherentProbe>& probes, int truncation_dim) {
  if (truncation_dim < 1) throw DomainError("truncation dimension must be at least 1");
  if (probes.empty()) throw DomainError("probe set is empty");

  ProbeMatrix result;
  result.entries.resize(static_cast<Eigen::Index>(probes.size()), truncation_dim);
  result.probes = probes;
  result.truncation_dim = truncation_dim;

  for (std::size_t d = 0; d < probes.size(); ++d) {
    const double mu = probes[d].mean_photon;
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
      throw DomainError("probe '" + probes[d].label + "' has invalid mean photon number");
    }
    double row_sum = 0.0;
    for (int i = 0; i < truncation_dim; ++i) {
      const double v = poisson_pmf(mu, i);
      result.entries(static_cast<Eigen::Index>(d), i) = v;
      row_sum += v;
    }
    if (row_sum < 1.0 - 1e-6) {
      throw TruncationError("probe '" + probes[d].label + "' (mean photon " +
                            std::to_string(mu) + ") loses " + std::to_string(1.0 - row_sum) +
                            " of its Poisson mass at truncation " +
                            std::to_string(truncation_dim));
    }
  }
  return result;
}

}  // namespace dtomo
