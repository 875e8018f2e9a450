// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#include "dtomo/merit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "dtomo/errors.hpp"

namespace dtomo {

namespace {

void require_shape(const PovmMatrix& pi, int min_m, int min_n, const char* what) {
  if (pi.entries.rows() < min_m || pi.entries.cols() < min_n) {
    throw ShapeError(std::string(what) + " needs a POVM of at least " + std::to_string(min_m) +
                     " photon indices and " + std::to_string(min_n) + " outcomes");
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double positive_gaussian_factor(std::mt19937_64& rng, double sigma) {
  std::normal_distribution<double> normal(1.0, sigma);
  double g = normal(rng);
  while (g <= 0.0) g = normal(rng);  // truncate at zero
  return g;
}

double sample_stddev(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace

double efficiency(const PovmMatrix& pi) {
  require_shape(pi, 2, 2, "efficiency");
  return 1.0 - pi.entries(1, 0);
}

double dark_count_probability(const PovmMatrix& pi) {
  require_shape(pi, 1, 2, "dark-count probability");
  return pi.entries(0, 1);
}

double crosstalk_probability(const PovmMatrix& pi) {
  require_shape(pi, 2, 3, "cross-talk probability");
  return pi.entries(1, 2) - pi.entries(1, 1) * pi.entries(0, 1);
}

MeritReport propagate_uncertainty(const std::vector<ThresholdCounts>& raw_counts,
                                  const std::vector<CoherentProbe>& calib_means,
                                  double amplitude_rel_sigma, int n_samples,
                                  const SolverConfig& config, std::uint64_t seed,
                                  const UncertaintyOptions& options) {
  if (amplitude_rel_sigma < 0.0) throw DomainError("amplitude_rel_sigma must be non-negative");
  if (n_samples < 2) throw DomainError("need at least 2 Monte-Carlo samples");
  if (raw_counts.size() != calib_means.size()) {
    throw ShapeError("counts and probe sets disagree in size");
  }

  double max_mu = 0.0;
  for (const auto& p : calib_means) max_mu = std::max(max_mu, p.mean_photon);
  const int trunc = options.truncation_dim > 0
                        ? options.truncation_dim
                        : choose_truncation(max_mu, options.truncation_sigma);

  const OutcomeMatrix p_matrix = build_outcome_matrix(raw_counts);
  const ProbeMatrix f_central = build_probe_matrix(calib_means, trunc);
  const auto [pi_central, diag_central] = reconstruct(p_matrix, f_central, config);

  MeritReport report;
  report.efficiency = efficiency(pi_central);
  report.dark_prob = dark_count_probability(pi_central);
  report.xtalk_prob = pi_central.n_outcomes >= 3 ? crosstalk_probability(pi_central) : 0.0;
  report.epsilon_used = config.epsilon;
  report.n_mc_samples = n_samples;
  report.has_sigmas = true;

  if (amplitude_rel_sigma == 0.0) {
    return report;  // every perturbed problem is identical; all sigmas vanish
  }

  struct Sample {
    double eff = 0.0, dark = 0.0, xtalk = 0.0;
    bool ok = false;
  };
  std::vector<Sample> samples(static_cast<std::size_t>(n_samples));

  auto run_sample = [&](int s) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
    std::vector<CoherentProbe> perturbed = calib_means;
    if (options.correlated) {
      const double g = positive_gaussian_factor(rng, amplitude_rel_sigma);
      for (auto& p : perturbed) p.mean_photon *= g;
    } else {
      for (auto& p : perturbed) p.mean_photon *= positive_gaussian_factor(rng, amplitude_rel_sigma);
    }
    try {
      const ProbeMatrix f = build_probe_matrix(perturbed, trunc);
      const auto [pi, diag] = reconstruct(p_matrix, f, config);
      if (!diag.converged) return;
      Sample& out = samples[static_cast<std::size_t>(s)];
      out.eff = efficiency(pi);
      out.dark = dark_count_probability(pi);
      out.xtalk = pi.n_outcomes >= 3 ? crosstalk_probability(pi) : 0.0;
      out.ok = true;
    } catch (const TruncationError&) {
      // amplitude drawn beyond the truncated Hilbert space; excluded
    }
  };

  const int threads = std::max(1, std::min(options.threads, n_samples));
  if (threads == 1) {
    for (int s = 0; s < n_samples; ++s) run_sample(s);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int s = next.fetch_add(1);
        if (s >= n_samples) return;
        run_sample(s);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<double> effs, darks, xts;
  for (const Sample& s : samples) {
    if (!s.ok) continue;
    effs.push_back(s.eff);
    darks.push_back(s.dark);
    xts.push_back(s.xtalk);
  }
  report.excluded_samples = n_samples - static_cast<int>(effs.size());
  report.efficiency_sigma = sample_stddev(effs);
  report.dark_prob_sigma = sample_stddev(darks);
  report.xtalk_prob_sigma = sample_stddev(xts);
  return report;
}

}  // namespace dtomo
