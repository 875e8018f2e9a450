// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "dtomo/counts.hpp"
#include "dtomo/probes.hpp"

namespace dtomo {

/// M x N matrix of the diagonal POVM elements: entries(i, n) is the
/// probability of outcome n given i incident photons. Rows live on the
/// probability simplex.
struct PovmMatrix {
  Eigen::MatrixXd entries;
  int truncation_dim = 0;
  int n_outcomes = 0;
};

enum class StepRule {
  fixed_lipschitz,  // constant step 1/L from the gradient Lipschitz bound
  backtracking,     // Armijo-backtracked steps; objective trace is monotone
};

struct SolverConfig {
  double epsilon = 0.1;           // smoothing weight, in [0, 1]
  long max_iterations = 200000;   // total projected-gradient iteration budget
  double rel_tolerance = 1e-10;   // relative objective-change stopping criterion
  StepRule step_rule = StepRule::fixed_lipschitz;

  void validate() const;
};

struct SolveDiagnostics {
  long iterations_used = 0;
  double final_objective = 0.0;      // ||P - F Pi||_F + epsilon * smoothing
  double final_residual_norm = 0.0;  // ||P - F Pi||_F
  bool converged = false;
};

/// Quadratic reconstruction objective
///   ||P - F Pi||_F^2 + epsilon * sum_{i,n} (Pi_{i,n} - Pi_{i+1,n})^2.
/// This is the smooth objective whose gradient drives the projected-gradient
/// engine; see reconstruct() for the relation to the minimised merit.
double objective(const OutcomeMatrix& P, const ProbeMatrix& F, const PovmMatrix& Pi,
                 double epsilon);

/// Analytic gradient of objective() with respect to Pi.
Eigen::MatrixXd objective_gradient(const OutcomeMatrix& P, const ProbeMatrix& F,
                                   const PovmMatrix& Pi, double epsilon);

/// Smoothing penalty sum_{i,n} (Pi_{i,n} - Pi_{i+1,n})^2.
double smoothing_penalty(const Eigen::MatrixXd& pi);

/// Reconstruct the POVM from outcome statistics P and probe matrix F by
/// minimising ||P - F Pi||_F + epsilon * smoothing over row-stochastic Pi.
///
/// For epsilon = 0 this is projected-gradient descent (optionally Nesterov
/// accelerated) on the squared residual; for epsilon > 0 the non-smooth
/// residual norm is handled by an augmented-Lagrangian outer loop whose
/// subproblems are solved by the same projected-gradient engine. Outputs are
/// deterministic for identical inputs and config.
std::pair<PovmMatrix, SolveDiagnostics> reconstruct(const OutcomeMatrix& P,
                                                    const ProbeMatrix& F,
                                                    const SolverConfig& config);

/// Re-run the reconstruction for every smoothing weight in eps_grid and
/// report the POVM element at (photon index target_i, outcome target_n).
/// Solves are independent and run on `threads` workers.
std::vector<std::pair<double, double>> sweep_smoothing(const OutcomeMatrix& P,
                                                       const ProbeMatrix& F,
                                                       const std::vector<double>& eps_grid,
                                                       int target_i, int target_n,
                                                       const SolverConfig& base_config,
                                                       int threads = 1);

/// Row-stochasticity check used on POVM inputs: entries in [-tol, 1 + tol]
/// and row sums within tol of 1. Throws PovmValidationError otherwise.
void validate_povm(const PovmMatrix& pi, double tol = 1e-8);

namespace detail {

struct EngineResult {
  long iterations = 0;
  bool converged = false;
};

/// Minimise smooth_w * smoothing(Pi) + (res_w / 2) * ||F Pi - B||_F^2 over
/// row-stochastic Pi with projected gradient steps, starting from pi
/// (modified in place). Stops when the gradient-mapping norm falls below
/// grad_map_tol, when the relative objective change stays below
/// rel_change_tol across two consecutive checks (when positive), or when the
/// iteration budget runs out. When trace is non-null the objective value of
/// every iterate is appended (used by the monotone-descent tests).
EngineResult minimize_simplex_quadratic(Eigen::MatrixXd& pi, const Eigen::MatrixXd& F,
                                        const Eigen::MatrixXd& B, double smooth_w, double res_w,
                                        double grad_map_tol, double rel_change_tol,
                                        long max_iters, StepRule rule, double lambda_max,
                                        std::vector<double>* trace = nullptr);

}  // namespace detail

}  // namespace dtomo
