// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#include "dtomo/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dtomo/errors.hpp"

namespace dtomo {

namespace {

// Held-Wolfe-Crowder threshold: with u the entries sorted in decreasing
// order, tau = (sum_{k<=rho} u_k - 1) / rho for the largest rho keeping
// u_rho - tau positive; the projection is max(v - tau, 0).
double simplex_threshold(std::vector<double>& sorted_desc) {
  std::sort(sorted_desc.begin(), sorted_desc.end(), std::greater<double>());
  double cumsum = 0.0;
  double tau = 0.0;
  int rho = 0;
  for (std::size_t j = 0; j < sorted_desc.size(); ++j) {
    cumsum += sorted_desc[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (sorted_desc[j] - t > 0.0) {
      tau = t;
      rho = static_cast<int>(j + 1);
    }
  }
  (void)rho;
  return tau;
}

}  // namespace

Eigen::VectorXd project_row_simplex(const Eigen::VectorXd& v) {
  if (v.size() == 0) throw DomainError("cannot project an empty vector");
  if (!v.allFinite()) throw DomainError("simplex projection requires finite entries");
  std::vector<double> work(v.data(), v.data() + v.size());
  const double tau = simplex_threshold(work);
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[i] = std::max(v[i] - tau, 0.0);
  }
  return out;
}

void project_rows_to_simplex(Eigen::MatrixXd& m) {
  std::vector<double> work(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) work[static_cast<std::size_t>(c)] = m(r, c);
    const double tau = simplex_threshold(work);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = std::max(m(r, c) - tau, 0.0);
    }
  }
}

}  // namespace dtomo
