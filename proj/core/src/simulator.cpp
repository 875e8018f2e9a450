// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#include "dtomo/simulator.hpp"

#include <cmath>
#include <random>
#include <string>

#include "dtomo/errors.hpp"

namespace dtomo {

namespace {

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Binomial(n, p) pmf over k = 0..n, log-space for large n.
Eigen::VectorXd binomial_pmf(int n, double p) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n + 1);
  if (n == 0 || p <= 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (p >= 1.0) {
    out[n] = 1.0;
    return out;
  }
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  for (int k = 0; k <= n; ++k) {
    out[k] = std::exp(log_binom(n, k) + k * lp + (n - k) * lq);
  }
  return out;
}

// occupancy pmf over j = 0..K for m photons on K pixels, by inclusion-exclusion:
// q(j) = C(K,j) * sum_l (-1)^l C(j,l) ((j-l)/K)^m
void occupancy_into(int m, int k_pixels, Eigen::VectorXd& q) {
  q.setZero();
  for (int j = 0; j <= k_pixels; ++j) {
    double s = 0.0;
    for (int l = 0; l <= j; ++l) {
      const double base = static_cast<double>(j - l) / static_cast<double>(k_pixels);
      double pw;
      if (j - l == 0) {
        pw = (m == 0) ? 1.0 : 0.0;
      } else {
        pw = std::pow(base, m);
      }
      const double mag = std::exp(log_binom(k_pixels, j) + log_binom(j, l)) * pw;
      s += (l % 2 == 0) ? mag : -mag;
    }
    q[j] = std::max(s, 0.0);
  }
}

// rows m = 0..m_max of the occupancy distribution
Eigen::MatrixXd occupancy_table(int m_max, int k_pixels) {
  Eigen::MatrixXd table(m_max + 1, k_pixels + 1);
  Eigen::VectorXd scratch(k_pixels + 1);
  for (int m = 0; m <= m_max; ++m) {
    occupancy_into(m, k_pixels, scratch);
    table.row(m) = scratch.transpose();
  }
  return table;
}

Eigen::VectorXd click_distribution_impl(const ArrayDetectorModel& model, int photons,
                                        const Eigen::MatrixXd& occ) {
  const int k = model.n_pixels;

  // stage 1+2: binomial thinning of the incident photons, then pixel occupancy
  Eigen::VectorXd fired = Eigen::VectorXd::Zero(k + 1);
  const Eigen::VectorXd thin = binomial_pmf(photons, model.efficiency);
  for (int m = 0; m <= photons; ++m) {
    if (thin[m] == 0.0) continue;
    fired += thin[m] * occ.row(std::min(m, static_cast<int>(occ.rows()) - 1)).transpose();
  }

  // stage 3: independent dark clicks on the unfired pixels
  Eigen::VectorXd with_dark = Eigen::VectorXd::Zero(k + 1);
  for (int j = 0; j <= k; ++j) {
    if (fired[j] == 0.0) continue;
    const Eigen::VectorXd extra = binomial_pmf(k - j, model.dark_prob);
    for (int a = 0; a <= k - j; ++a) with_dark[j + a] += fired[j] * extra[a];
  }

  // stage 4: single-round cross-talk; every fired pixel couples to every
  // still-unfired pixel, induced clicks do not cascade
  Eigen::VectorXd clicks = Eigen::VectorXd::Zero(k + 1);
  for (int f = 0; f <= k; ++f) {
    if (with_dark[f] == 0.0) continue;
    const double p_induce = 1.0 - std::pow(1.0 - model.xtalk_prob, f);
    const Eigen::VectorXd extra = binomial_pmf(k - f, p_induce);
    for (int a = 0; a <= k - f; ++a) clicks[f + a] += with_dark[f] * extra[a];
  }
  return clicks;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 step on a golden-ratio-spread stream index
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

void ArrayDetectorModel::validate() const {
  if (n_pixels < 1) throw DomainError("detector needs at least one pixel");
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(efficiency) || !in_unit(dark_prob) || !in_unit(xtalk_prob)) {
    throw DomainError("detector model probabilities must lie in [0, 1]");
  }
}

Eigen::VectorXd occupied_pixel_distribution(int m_detected, int n_pixels) {
  if (m_detected < 0) throw DomainError("photon count must be non-negative");
  if (n_pixels < 1) throw DomainError("need at least one pixel");
  Eigen::VectorXd q(n_pixels + 1);
  occupancy_into(m_detected, n_pixels, q);
  return q;
}

Eigen::VectorXd click_distribution_given_photons(const ArrayDetectorModel& model, int photons) {
  model.validate();
  if (photons < 0) throw DomainError("photon count must be non-negative");
  return click_distribution_impl(model, photons, occupancy_table(photons, model.n_pixels));
}

PovmMatrix true_povm(const ArrayDetectorModel& model, int truncation_dim) {
  model.validate();
  if (truncation_dim < 1) throw DomainError("truncation dimension must be at least 1");
  const Eigen::MatrixXd occ = occupancy_table(truncation_dim - 1, model.n_pixels);
  PovmMatrix pi;
  pi.truncation_dim = truncation_dim;
  pi.n_outcomes = model.n_pixels + 1;
  pi.entries.resize(truncation_dim, model.n_pixels + 1);
  for (int i = 0; i < truncation_dim; ++i) {
    pi.entries.row(i) = click_distribution_impl(model, i, occ).transpose();
  }
  return pi;
}

OutcomeMatrix exact_outcome_matrix(const ArrayDetectorModel& model, const ProbeMatrix& F) {
  const PovmMatrix pi = true_povm(model, F.truncation_dim);
  OutcomeMatrix p;
  p.n_outcomes = pi.n_outcomes;
  p.entries = F.entries * pi.entries;
  p.probe_order.reserve(F.probes.size());
  for (const auto& probe : F.probes) p.probe_order.push_back(probe.label);
  return p;
}

std::vector<ThresholdCounts> simulate_counts(const ArrayDetectorModel& model,
                                             const std::vector<CoherentProbe>& probes,
                                             std::int64_t trials_per_probe, std::uint64_t seed) {
  model.validate();
  if (trials_per_probe < 1) throw DomainError("trials_per_probe must be at least 1");
  if (probes.empty()) throw DomainError("probe set is empty");

  double max_mu = 0.0;
  for (const auto& p : probes) max_mu = std::max(max_mu, p.mean_photon);
  const int m = choose_truncation(max_mu);
  const ProbeMatrix f = build_probe_matrix(probes, m);
  const PovmMatrix pi = true_povm(model, m);
  const Eigen::MatrixXd p_exact = f.entries * pi.entries;
  const int n = pi.n_outcomes;

  std::vector<ThresholdCounts> out;
  out.reserve(probes.size());
  for (std::size_t d = 0; d < probes.size(); ++d) {
    Eigen::VectorXd prob = p_exact.row(static_cast<Eigen::Index>(d)).transpose();
    prob /= prob.sum();  // renormalise away the truncation deficit

    // multinomial draw via chained binomials, one generator per probe
    std::mt19937_64 rng(mix_seed(seed, d));
    std::vector<std::int64_t> exact(static_cast<std::size_t>(n), 0);
    std::int64_t remaining = trials_per_probe;
    double mass = 1.0;
    for (int k = 0; k + 1 < n && remaining > 0; ++k) {
      const double pk = std::clamp(prob[k] / mass, 0.0, 1.0);
      std::binomial_distribution<std::int64_t> bin(remaining, pk);
      const std::int64_t c = bin(rng);
      exact[static_cast<std::size_t>(k)] = c;
      remaining -= c;
      mass = std::max(mass - prob[k], 1e-300);
    }
    exact[static_cast<std::size_t>(n - 1)] += remaining;

    ThresholdCounts tc;
    tc.trials = trials_per_probe;
    tc.probe_label = probes[d].label;
    tc.cumulative.resize(static_cast<std::size_t>(n - 1));
    std::int64_t acc = 0;
    for (int k = n - 1; k >= 1; --k) {
      acc += exact[static_cast<std::size_t>(k)];
      tc.cumulative[static_cast<std::size_t>(k - 1)] = acc;
    }
    out.push_back(std::move(tc));
  }
  return out;
}

}  // namespace dtomo
