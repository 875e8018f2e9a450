// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

namespace dtomo {

/// Euclidean projection of v onto the probability simplex
/// { w : w_i >= 0, sum w_i = 1 }, by the exact sort-based algorithm.
Eigen::VectorXd project_row_simplex(const Eigen::VectorXd& v);

/// In-place rowwise simplex projection of a matrix.
void project_rows_to_simplex(Eigen::MatrixXd& m);

}  // namespace dtomo
