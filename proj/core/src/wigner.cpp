// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#include "dtomo/wigner.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "dtomo/errors.hpp"

namespace dtomo {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// e^{-z/2} L_i(z) by the three-term recurrence carried on the scaled values,
// which stay in [-1, 1] for all i and z >= 0 (naive L_i overflows near i ~ 150).
double scaled_laguerre(int i, double z) {
  double prev = std::exp(-0.5 * z);  // k = 0
  if (i == 0) return prev;
  double cur = (1.0 - z) * prev;  // k = 1
  for (int k = 1; k < i; ++k) {
    const double next = ((2.0 * k + 1.0 - z) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

// sum_i theta[i] (-1)^i e^{-z/2} L_i(z), one recurrence pass
double mixture_value(const Eigen::VectorXd& theta, double z) {
  double prev = std::exp(-0.5 * z);
  double acc = theta[0] * prev;
  if (theta.size() == 1) return acc;
  double cur = (1.0 - z) * prev;
  acc -= theta[1] * cur;
  double sign = 1.0;
  for (Eigen::Index k = 1; k + 1 < theta.size(); ++k) {
    const double next = ((2.0 * k + 1.0 - z) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    acc += sign * theta[k + 1] * cur;
    sign = -sign;
  }
  return acc;
}

}  // namespace

double fock_wigner(int i, double x, double p) {
  if (i < 0) throw DomainError("Fock index must be non-negative");
  const double z = 2.0 * (x * x + p * p);
  const double sign = (i % 2 == 0) ? 1.0 : -1.0;
  return sign / kPi * scaled_laguerre(i, z);
}

WignerGrid povm_wigner(const Eigen::VectorXd& theta_column, const WignerGridSpec& spec,
                       int threads) {
  if (theta_column.size() < 1) throw DomainError("theta column is empty");
  for (Eigen::Index i = 0; i < theta_column.size(); ++i) {
    const double t = theta_column[i];
    if (!(t >= -1e-12 && t <= 1.0 + 1e-12)) {
      throw DomainError("theta entries must lie in [0, 1]");
    }
  }
  if (!(spec.extent > 0.0) || spec.resolution < 2) {
    throw DomainError("grid needs positive extent and at least 2 points per axis");
  }

  WignerGrid grid;
  grid.x_axis.resize(static_cast<std::size_t>(spec.resolution));
  grid.p_axis.resize(static_cast<std::size_t>(spec.resolution));
  const double step = 2.0 * spec.extent / (spec.resolution - 1);
  for (int k = 0; k < spec.resolution; ++k) {
    grid.x_axis[static_cast<std::size_t>(k)] = -spec.extent + step * k;
    grid.p_axis[static_cast<std::size_t>(k)] = -spec.extent + step * k;
  }
  grid.values.resize(spec.resolution, spec.resolution);

  auto fill_row = [&](int ix) {
    const double x = grid.x_axis[static_cast<std::size_t>(ix)];
    for (int ip = 0; ip < spec.resolution; ++ip) {
      const double p = grid.p_axis[static_cast<std::size_t>(ip)];
      const double z = 2.0 * (x * x + p * p);
      grid.values(ix, ip) = mixture_value(theta_column, z) / kPi;
    }
  };

  const int nw = std::max(1, std::min(threads, spec.resolution));
  if (nw == 1) {
    for (int ix = 0; ix < spec.resolution; ++ix) fill_row(ix);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int ix = next.fetch_add(1);
        if (ix >= spec.resolution) return;
        fill_row(ix);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return grid;
}

}  // namespace dtomo
