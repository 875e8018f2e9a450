// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace dtomo {

/// One coherent probe state, characterised by its mean photon number |alpha|^2.
struct CoherentProbe {
  double mean_photon = 0.0;
  std::string label;
};

/// D x M matrix of the photon-number distributions of the probe states.
/// Row d holds the Poisson distribution with mean probes[d].mean_photon,
/// truncated at photon index M-1.
struct ProbeMatrix {
  Eigen::MatrixXd entries;
  std::vector<CoherentProbe> probes;
  int truncation_dim = 0;
};

/// Poisson pmf evaluated in log space; exact for mu = 0.
double poisson_pmf(double mu, int i);

/// Default ladder of D probes with mean photon numbers 0, 1, 4, ..., (D-1)^2.
std::vector<CoherentProbe> default_probe_ladder(int count_d);

/// Hilbert-space dimension covering the largest probe plus k_sigma standard
/// deviations of its photon-number distribution:
/// ceil(mu_max + k_sigma*sqrt(mu_max)) + 1.
int choose_truncation(double max_mean_photon, double k_sigma = 6.0);

/// Build the probe matrix. Throws TruncationError if any row retains less
/// than 1 - 1e-6 of its Poisson mass.
ProbeMatrix build_probe_matrix(const std::vector<CoherentProbe>& probes, int truncation_dim);

}  // namespace dtomo
