// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <Eigen/Core>

namespace dtomo {

/// Phase-space grid of a Wigner function: values(ix, ip) = W(x_axis[ix], p_axis[ip]).
struct WignerGrid {
  std::vector<double> x_axis;
  std::vector<double> p_axis;
  Eigen::MatrixXd values;
};

struct WignerGridSpec {
  double extent = 4.0;   // axes span [-extent, extent]
  int resolution = 201;  // points per axis
};

/// Wigner function of the Fock state |i>, hbar = 1 convention with unit
/// normalisation: W_i(x, p) = ((-1)^i / pi) exp(-r^2) L_i(2 r^2), r^2 = x^2 + p^2.
/// Evaluated through the scaled Laguerre recurrence on exp(-z/2) L_i(z), which
/// stays bounded by 1 for any i and z >= 0.
double fock_wigner(int i, double x, double p);

/// Wigner function of the diagonal operator sum_i theta[i] |i><i| on a square
/// grid. The grid integral equals sum_i theta[i] (the operator trace).
WignerGrid povm_wigner(const Eigen::VectorXd& theta_column, const WignerGridSpec& spec = {},
                       int threads = 1);

}  // namespace dtomo
