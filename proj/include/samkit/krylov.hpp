// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SAMKIT_KRYLOV_HPP
#define SAMKIT_KRYLOV_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "samkit/operator.hpp"

namespace samkit {

struct GmresConfig {
  /// Restart length m. "Full" GMRES uses m = max_total_iters.
  std::size_t restart = 50;
  double rel_tol = 1e-10;
  std::size_t max_total_iters = 1000;
  /// Second modified Gram-Schmidt pass per Arnoldi step.
  bool reorthogonalize = false;

  static GmresConfig full(std::size_t max_iters, double rel_tol) {
    return {max_iters, rel_tol, max_iters, false};
  }
  void validate() const;
};

struct SolveReport {
  std::size_t iterations = 0;
  /// Restarts performed after the first cycle.
  std::size_t restarts = 0;
  bool converged = false;
  /// Set when an Arnoldi step produced a (near) zero basis vector.
  bool breakdown = false;
  /// ||b - A x|| / ||b|| of the returned iterate.
  double final_rel_residual = 0.0;
  /// Relative residuals: the explicit residual at the start of every cycle
  /// followed by the recurrence value after each inner iteration.
  std::vector<double> residual_history;
  /// Index into residual_history where each cycle begins.
  std::vector<std::size_t> cycle_starts;
  /// Largest |recurrence - explicit| residual gap seen at a restart,
  /// scaled by ||b||.
  double max_restart_gap = 0.0;
  double wall_seconds = 0.0;
};

template <Scalar T>
struct GmresResult {
  std::vector<T> x;
  SolveReport report;
};

/// Restarted GMRES with right preconditioning. The Krylov space is built
/// for A*M by modified Gram-Schmidt Arnoldi and the Hessenberg least-squares
/// problem is reduced with Givens rotations, so the recurrence residual is
/// the true residual of x = x0 + M V y. Convergence is decided on the
/// explicitly recomputed residual ||b - A x|| / ||b|| at cycle boundaries.
/// `preconditioner` may be null (identity); x0 may be empty (zero guess).
template <Scalar T>
GmresResult<T> gmres(const LinearOperator<T>& a, std::span<const T> b,
                     const LinearOperator<T>* preconditioner,
                     std::span<const T> x0, const GmresConfig& config);

}  // namespace samkit

#endif  // SAMKIT_KRYLOV_HPP
