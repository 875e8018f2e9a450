// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#include "dtomo/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include <Eigen/Dense>

#include "dtomo/errors.hpp"
#include "dtomo/simplex.hpp"

namespace dtomo {

namespace {

void check_shapes(const OutcomeMatrix& P, const ProbeMatrix& F, const PovmMatrix& Pi) {
  if (F.entries.rows() != P.entries.rows()) {
    throw ShapeError("probe matrix has " + std::to_string(F.entries.rows()) +
                     " rows but outcome matrix has " + std::to_string(P.entries.rows()));
  }
  if (Pi.entries.rows() != F.entries.cols() || Pi.entries.cols() != P.entries.cols()) {
    throw ShapeError("POVM matrix is " + std::to_string(Pi.entries.rows()) + "x" +
                     std::to_string(Pi.entries.cols()) + ", expected " +
                     std::to_string(F.entries.cols()) + "x" + std::to_string(P.entries.cols()));
  }
}

// G += w * Lpath * Pi, Lpath the path-graph Laplacian along photon number.
void add_smoothing_gradient(const Eigen::MatrixXd& pi, double w, Eigen::MatrixXd& g) {
  const Eigen::Index m = pi.rows();
  if (m < 2 || w == 0.0) return;
  const auto dif = (pi.topRows(m - 1) - pi.bottomRows(m - 1)).eval();
  g.topRows(m - 1) += w * dif;
  g.bottomRows(m - 1) -= w * dif;
}

double largest_gram_eigenvalue(const Eigen::MatrixXd& f) {
  // lambda_max(F F^T) == sigma_max(F)^2, computed on the small D x D Gram matrix.
  Eigen::MatrixXd gram = f * f.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  return std::max(es.eigenvalues().maxCoeff(), 0.0);
}

struct EngineScratch {
  Eigen::MatrixXd y, grad, cand, resid, diff;
};

double quad_value(const Eigen::MatrixXd& pi, const Eigen::MatrixXd& f, const Eigen::MatrixXd& b,
                  double smooth_w, double res_w, EngineScratch& s) {
  s.resid.noalias() = f * pi;
  s.resid -= b;
  double v = 0.5 * res_w * s.resid.squaredNorm();
  if (smooth_w != 0.0) v += smooth_w * smoothing_penalty(pi);
  return v;
}

void quad_gradient(const Eigen::MatrixXd& pi, const Eigen::MatrixXd& f, const Eigen::MatrixXd& b,
                   double smooth_w, double res_w, EngineScratch& s, Eigen::MatrixXd& g) {
  s.resid.noalias() = f * pi;
  s.resid -= b;
  g.noalias() = res_w * (f.transpose() * s.resid);
  add_smoothing_gradient(pi, 2.0 * smooth_w, g);
}

double gradient_map_norm(const Eigen::MatrixXd& pi, const Eigen::MatrixXd& f,
                         const Eigen::MatrixXd& b, double smooth_w, double res_w, double lip,
                         EngineScratch& s) {
  quad_gradient(pi, f, b, smooth_w, res_w, s, s.grad);
  s.cand = pi - s.grad / lip;
  project_rows_to_simplex(s.cand);
  return (pi - s.cand).norm() * lip;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in [0, 1]");
  if (max_iterations < 1) throw DomainError("max_iterations must be at least 1");
  if (!(rel_tolerance > 0.0)) throw DomainError("rel_tolerance must be positive");
}

double smoothing_penalty(const Eigen::MatrixXd& pi) {
  const Eigen::Index m = pi.rows();
  if (m < 2) return 0.0;
  return (pi.topRows(m - 1) - pi.bottomRows(m - 1)).squaredNorm();
}

double objective(const OutcomeMatrix& P, const ProbeMatrix& F, const PovmMatrix& Pi,
                 double epsilon) {
  check_shapes(P, F, Pi);
  const double res = (P.entries - F.entries * Pi.entries).squaredNorm();
  return res + epsilon * smoothing_penalty(Pi.entries);
}

Eigen::MatrixXd objective_gradient(const OutcomeMatrix& P, const ProbeMatrix& F,
                                   const PovmMatrix& Pi, double epsilon) {
  check_shapes(P, F, Pi);
  Eigen::MatrixXd g = 2.0 * (F.entries.transpose() * (F.entries * Pi.entries - P.entries));
  add_smoothing_gradient(Pi.entries, 2.0 * epsilon, g);
  return g;
}

namespace detail {

EngineResult minimize_simplex_quadratic(Eigen::MatrixXd& pi, const Eigen::MatrixXd& F,
                                        const Eigen::MatrixXd& B, double smooth_w, double res_w,
                                        double grad_map_tol, double rel_change_tol,
                                        long max_iters, StepRule rule, double lambda_max,
                                        std::vector<double>* trace) {
  const double lip = 8.0 * smooth_w + res_w * lambda_max;
  EngineScratch s;
  project_rows_to_simplex(pi);
  if (max_iters < 1 || lip <= 0.0 || pi.cols() == 1) {
    // nothing to optimise (single outcome forces all-ones rows)
    return {0, true};
  }

  constexpr int kCheckInterval = 16;
  Eigen::MatrixXd x_prev = pi;
  s.y = pi;
  double t = 1.0;
  double f_check = std::numeric_limits<double>::infinity();
  int below_count = 0;
  double l_bt = lip / 64.0;  // running backtracking estimate

  if (trace) trace->push_back(quad_value(pi, F, B, smooth_w, res_w, s));

  for (long it = 1; it <= max_iters; ++it) {
    if (rule == StepRule::backtracking) {
      // plain monotone projected-gradient step with doubling line search
      const double f_x = quad_value(pi, F, B, smooth_w, res_w, s);
      quad_gradient(pi, F, B, smooth_w, res_w, s, s.grad);
      double lk = std::max(l_bt / 2.0, lip / 1024.0);
      for (;;) {
        s.cand = pi - s.grad / lk;
        project_rows_to_simplex(s.cand);
        s.diff = s.cand - pi;
        const double model =
            f_x + s.grad.cwiseProduct(s.diff).sum() + 0.5 * lk * s.diff.squaredNorm();
        if (quad_value(s.cand, F, B, smooth_w, res_w, s) <= model || lk >= lip) break;
        lk *= 2.0;
      }
      l_bt = lk;
      pi.swap(s.cand);
    } else {
      // FISTA step from the extrapolated point, gradient-scheme restart
      quad_gradient(s.y, F, B, smooth_w, res_w, s, s.grad);
      s.cand = s.y - s.grad / lip;
      project_rows_to_simplex(s.cand);
      const double restart = (s.y - s.cand).cwiseProduct(s.cand - pi).sum();
      if (restart > 0.0) t = 1.0;
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      s.y = s.cand + ((t - 1.0) / t_next) * (s.cand - pi);
      t = t_next;
      pi.swap(s.cand);
    }

    if (trace) trace->push_back(quad_value(pi, F, B, smooth_w, res_w, s));

    if (it % kCheckInterval == 0 || it == max_iters) {
      const double gm = gradient_map_norm(pi, F, B, smooth_w, res_w, lip, s);
      if (gm <= grad_map_tol) return {it, true};
      if (rel_change_tol > 0.0) {
        const double f = quad_value(pi, F, B, smooth_w, res_w, s);
        if (std::abs(f_check - f) <= rel_change_tol * std::max(f, 1e-300)) {
          if (++below_count >= 2) return {it, true};
        } else {
          below_count = 0;
        }
        f_check = f;
      }
    }
  }
  return {max_iters, false};
}

}  // namespace detail

namespace {

PovmMatrix finalize_povm(Eigen::MatrixXd entries, int n_outcomes) {
  const double min_entry = entries.minCoeff();
  if (min_entry < -1e-12) {
    throw PovmValidationError("solver produced entry " + std::to_string(min_entry) +
                              " below the clamping tolerance");
  }
  entries = entries.cwiseMax(0.0);
  for (Eigen::Index r = 0; r < entries.rows(); ++r) {
    const double s = entries.row(r).sum();
    if (std::abs(s - 1.0) > 1e-8) {
      throw PovmValidationError("solver produced row sum " + std::to_string(s));
    }
    entries.row(r) /= s;
  }
  PovmMatrix pi;
  pi.truncation_dim = static_cast<int>(entries.rows());
  pi.n_outcomes = n_outcomes;
  pi.entries = std::move(entries);
  return pi;
}

}  // namespace

std::pair<PovmMatrix, SolveDiagnostics> reconstruct(const OutcomeMatrix& P, const ProbeMatrix& F,
                                                    const SolverConfig& config) {
  config.validate();
  const Eigen::Index d = F.entries.rows();
  const Eigen::Index m = F.entries.cols();
  const Eigen::Index n = P.entries.cols();
  if (P.entries.rows() != d) {
    throw ShapeError("outcome matrix has " + std::to_string(P.entries.rows()) +
                     " probes, probe matrix has " + std::to_string(d));
  }
  const double lambda_max = largest_gram_eigenvalue(F.entries);
  const double eps = config.epsilon;

  Eigen::MatrixXd pi =
      Eigen::MatrixXd::Constant(m, n, 1.0 / static_cast<double>(n));  // feasible, unbiased
  SolveDiagnostics diag;

  if (eps == 0.0) {
    // minimizers of ||P - F Pi||_F and its square coincide; run the projected
    // gradient engine on the smooth square directly
    const double floor_tol = 1e-12 * std::sqrt(static_cast<double>(d * n));
    const auto r = detail::minimize_simplex_quadratic(
        pi, F.entries, P.entries, 0.0, 2.0, floor_tol, config.rel_tolerance,
        config.max_iterations, config.step_rule, lambda_max, nullptr);
    diag.iterations_used = r.iterations;
    diag.converged = r.converged;
  } else {
    // Augmented-Lagrangian splitting Z = P - F Pi: the Z update is the prox of
    // the Frobenius norm (ball shrinkage), the Pi update reuses the projected
    // gradient engine on a smooth quadratic. The penalty rho is rebalanced
    // against the primal/dual residuals; below the exact-penalty threshold
    // the dual otherwise climbs at the rate of the (tiny) fit residual.
    double rho = 300.0;
    const long outer_cap = 2000;
    const double relax = 1.7;
    constexpr double kEpsAbs = 1e-12;
    constexpr double kEpsRel = 3e-7;
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(d, n);
    Eigen::MatrixXd z_prev = z;
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(d, n);
    Eigen::MatrixXd pi_prev = pi;
    Eigen::MatrixXd b(d, n), v(d, n), fres(d, n), h_rel(d, n);
    double pri_prev = 1.0;
    double f_prev = std::numeric_limits<double>::infinity();
    int settled = 0;
    for (long outer = 0; outer < outer_cap; ++outer) {
      const long left = config.max_iterations - diag.iterations_used;
      if (left <= 0) break;
      b = P.entries - z - u;
      const double inner_tol = std::clamp(1e-3 * rho * pri_prev, 1e-13, 1e-2);
      // truncated inner solves (inexact ADMM); warm starts refine across outers
      const long inner_cap = std::min<long>(left, 6000);
      const auto r = detail::minimize_simplex_quadratic(pi, F.entries, b, eps, rho, inner_tol,
                                                        0.0, inner_cap, config.step_rule,
                                                        lambda_max, nullptr);
      diag.iterations_used += std::max(r.iterations, 1L);
      fres.noalias() = F.entries * pi;
      h_rel = relax * fres + (1.0 - relax) * (P.entries - z);
      v = P.entries - h_rel - u;
      const double nv = v.norm();
      z_prev.swap(z);
      if (rho * nv > 1.0) {
        z = v * (1.0 - 1.0 / (rho * nv));
      } else {
        z.setZero();
      }
      u += h_rel + z - P.entries;
      const double pri = (fres + z - P.entries).norm();
      const double dual = rho * (F.entries.transpose() * (z - z_prev)).norm();
      const double f = (P.entries - fres).norm() + eps * smoothing_penalty(pi);

      // textbook stopping pair plus an iterate-stability fallback
      const double eps_pri = kEpsAbs * std::sqrt(static_cast<double>(d * n)) +
                             kEpsRel * std::max({fres.norm(), z.norm(), P.entries.norm()});
      const double eps_dual = kEpsAbs * std::sqrt(static_cast<double>(m * n)) +
                              kEpsRel * rho * (F.entries.transpose() * u).norm();
      const bool residuals_ok = pri <= eps_pri && dual <= eps_dual;
      const bool f_ok =
          std::abs(f - f_prev) <= std::max(config.rel_tolerance * std::max(f, 1.0), 1e-13);
      const bool pi_ok = (pi - pi_prev).cwiseAbs().maxCoeff() <= 1e-6;
      settled = (f_ok && pi_ok) ? settled + 1 : 0;
      if (std::getenv("DTOMO_SOLVER_TRACE")) {
        std::fprintf(stderr,
                     "outer %ld rho %.1e pri %.3e dual %.3e f %.12f dPi %.2e inner %ld\n", outer,
                     rho, pri, dual, f, (pi - pi_prev).cwiseAbs().maxCoeff(), r.iterations);
      }
      if (residuals_ok || settled >= 3) {
        diag.converged = true;
        break;
      }
      f_prev = f;
      pi_prev = pi;
      pri_prev = std::max(pri, 1e-16);

      // residual balancing (Boyd et al. sec. 3.4.1); U is the scaled dual
      if (pri > 10.0 * dual && rho < 1e9) {
        rho *= 2.0;
        u *= 0.5;
      } else if (dual > 10.0 * pri && rho > 1.0) {
        rho *= 0.5;
        u *= 2.0;
      }
    }
  }

  PovmMatrix result = finalize_povm(std::move(pi), static_cast<int>(n));
  diag.final_residual_norm = (P.entries - F.entries * result.entries).norm();
  diag.final_objective = diag.final_residual_norm + eps * smoothing_penalty(result.entries);
  return {std::move(result), diag};
}

std::vector<std::pair<double, double>> sweep_smoothing(const OutcomeMatrix& P,
                                                       const ProbeMatrix& F,
                                                       const std::vector<double>& eps_grid,
                                                       int target_i, int target_n,
                                                       const SolverConfig& base_config,
                                                       int threads) {
  if (eps_grid.empty()) throw DomainError("epsilon grid is empty");
  for (double e : eps_grid) {
    if (!(e >= 0.0 && e <= 1.0)) throw DomainError("epsilon grid entries must lie in [0, 1]");
  }
  if (target_i < 0 || target_i >= F.entries.cols() || target_n < 0 ||
      target_n >= P.entries.cols()) {
    throw ShapeError("sweep target element (" + std::to_string(target_i) + ", " +
                     std::to_string(target_n) + ") outside the POVM shape");
  }

  std::vector<std::pair<double, double>> out(eps_grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= eps_grid.size()) return;
      SolverConfig cfg = base_config;
      cfg.epsilon = eps_grid[k];
      const auto [pi, diag] = reconstruct(P, F, cfg);
      out[k] = {eps_grid[k], pi.entries(target_i, target_n)};
    }
  };
  const int nw = std::max(1, std::min<int>(threads, static_cast<int>(eps_grid.size())));
  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

void validate_povm(const PovmMatrix& pi, double tol) {
  if (pi.entries.rows() != pi.truncation_dim || pi.entries.cols() != pi.n_outcomes) {
    throw PovmValidationError("POVM matrix shape disagrees with its declared dimensions");
  }
  if (pi.truncation_dim < 1 || pi.n_outcomes < 1) {
    throw PovmValidationError("POVM must have at least one photon index and one outcome");
  }
  for (Eigen::Index r = 0; r < pi.entries.rows(); ++r) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < pi.entries.cols(); ++c) {
      const double v = pi.entries(r, c);
      if (!(v >= -tol && v <= 1.0 + tol)) {
        throw PovmValidationError("POVM entry (" + std::to_string(r) + ", " + std::to_string(c) +
                                  ") = " + std::to_string(v) + " outside [0, 1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw PovmValidationError("POVM row " + std::to_string(r) + " sums to " +
                                std::to_string(sum));
    }
  }
}

}  // namespace dtomo
