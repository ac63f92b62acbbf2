// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "samkit/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "samkit/error.hpp"

namespace samkit {

namespace {

constexpr double kBreakdownTol = 1e-14;

template <Scalar T>
T dot(std::span<const T> x, std::span<const T> y) {
  T s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += conj(x[i]) * y[i];
  return s;
}

template <Scalar T>
void axpy(T alpha, std::span<const T> x, std::span<T> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// Rotation [c s; -conj(s) c] mapping (a, b) to (r, 0); c is real.
template <Scalar T>
struct Givens {
  double c = 1.0;
  T s{};

  static Givens make(T a, T b) {
    Givens g;
    const double abs_a = magnitude(a);
    const double abs_b = magnitude(b);
    if (abs_b == 0.0) return g;
    if (abs_a == 0.0) {
      g.c = 0.0;
      g.s = conj(b) / T{abs_b};
      return g;
    }
    const double t = std::hypot(abs_a, abs_b);
    g.c = abs_a / t;
    g.s = (a / T{abs_a}) * conj(b) / T{t};
    return g;
  }
  void apply(T& x, T& y) const {
    const T nx = T{c} * x + s * y;
    const T ny = -conj(s) * x + T{c} * y;
    x = nx;
    y = ny;
  }
};

}  // namespace

void GmresConfig::validate() const {
  if (restart < 1) {
    throw Error(ErrorCode::kInvalidArgument, "GMRES restart must be >= 1");
  }
  if (!(rel_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "GMRES rel_tol must be > 0");
  }
  if (max_total_iters < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "GMRES max_total_iters must be >= 1");
  }
}

template <Scalar T>
GmresResult<T> gmres(const LinearOperator<T>& a, std::span<const T> b,
                     const LinearOperator<T>* preconditioner,
                     std::span<const T> x0, const GmresConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = b.size();
  if (a.rows() != n || a.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "GMRES: operator is " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + ", right-hand side has length " +
                    std::to_string(n));
  }
  if (preconditioner != nullptr &&
      (preconditioner->rows() != n || preconditioner->cols() != n)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "GMRES: preconditioner dimension mismatch");
  }
  if (!x0.empty() && x0.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "GMRES: initial guess has wrong length");
  }

  GmresResult<T> result;
  SolveReport& rep = result.report;
  std::vector<T>& x = result.x;
  if (x0.empty()) {
    x.assign(n, T{});
  } else {
    x.assign(x0.begin(), x0.end());
  }

  const double bnorm = norm2(b);
  auto finish = [&]() {
    rep.wall_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    return std::move(result);
  };
  if (bnorm == 0.0) {
    x.assign(n, T{});
    rep.converged = true;
    rep.final_rel_residual = 0.0;
    return finish();
  }

  const std::size_t m = std::min(config.restart, config.max_total_iters);
  std::vector<std::vector<T>> basis(m + 1, std::vector<T>(n));
  // Column-major (m+1) x m Hessenberg matrix.
  std::vector<T> h((m + 1) * m, T{});
  auto hat = [&](std::size_t i, std::size_t j) -> T& { return h[j * (m + 1) + i]; };
  std::vector<Givens<T>> rotations(m);
  std::vector<T> g(m + 1);
  std::vector<T> r(n);
  std::vector<T> w(n);
  std::vector<T> z(n);
  std::vector<T> y(m);

  double last_recurrence = -1.0;
  while (true) {
    a.apply(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    const double beta = norm2<T>(r);
    if (last_recurrence >= 0.0) {
      rep.max_restart_gap =
          std::max(rep.max_restart_gap, std::abs(last_recurrence - beta) / bnorm);
    }
    rep.final_rel_residual = beta / bnorm;
    if (rep.final_rel_residual <= config.rel_tol) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= config.max_total_iters || rep.breakdown) break;
    if (!rep.cycle_starts.empty()) ++rep.restarts;
    rep.cycle_starts.push_back(rep.residual_history.size());
    rep.residual_history.push_back(beta / bnorm);

    for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / T{beta};
    std::fill(g.begin(), g.end(), T{});
    g[0] = T{beta};
    std::size_t steps = 0;
    double recurrence = beta;
    for (std::size_t j = 0; j < m && rep.iterations < config.max_total_iters;
         ++j) {
      if (preconditioner != nullptr) {
        preconditioner->apply(basis[j], z);
        a.apply(z, w);
      } else {
        a.apply(basis[j], w);
      }
      const int passes = config.reorthogonalize ? 2 : 1;
      for (std::size_t i = 0; i <= j; ++i) hat(i, j) = T{};
      for (int pass = 0; pass < passes; ++pass) {
        for (std::size_t i = 0; i <= j; ++i) {
          const T hij = dot<T>(basis[i], w);
          hat(i, j) += hij;
          axpy<T>(-hij, basis[i], w);
        }
      }
      const double wnorm = norm2<T>(w);
      hat(j + 1, j) = T{wnorm};
      for (std::size_t i = 0; i < j; ++i) rotations[i].apply(hat(i, j), hat(i + 1, j));
      rotations[j] = Givens<T>::make(hat(j, j), hat(j + 1, j));
      rotations[j].apply(hat(j, j), hat(j + 1, j));
      rotations[j].apply(g[j], g[j + 1]);
      ++steps;
      ++rep.iterations;
      recurrence = magnitude(g[j + 1]);
      rep.residual_history.push_back(recurrence / bnorm);

      if (wnorm <= kBreakdownTol * beta) {
        rep.breakdown = true;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) basis[j + 1][i] = w[i] / T{wnorm};
      if (recurrence / bnorm <= config.rel_tol) break;
    }

    // y = H(0:steps, 0:steps)^{-1} g, skipping columns whose rotated
    // diagonal vanished (singular operator).
    for (std::size_t i = steps; i-- > 0;) {
      T s = g[i];
      for (std::size_t k = i + 1; k < steps; ++k) s -= hat(i, k) * y[k];
      y[i] = magnitude(hat(i, i)) > 0.0 ? s / hat(i, i) : T{};
    }
    std::fill(w.begin(), w.end(), T{});
    for (std::size_t k = 0; k < steps; ++k) axpy<T>(y[k], basis[k], w);
    if (preconditioner != nullptr) {
      preconditioner->apply(w, z);
      axpy<T>(T{1}, z, x);
    } else {
      axpy<T>(T{1}, w, x);
    }
    last_recurrence = recurrence;
  }
  return finish();
}

template GmresResult<double> gmres<double>(const LinearOperator<double>&,
                                           std::span<const double>,
                                           const LinearOperator<double>*,
                                           std::span<const double>,
                                           const GmresConfig&);
template GmresResult<Complex> gmres<Complex>(const LinearOperator<Complex>&,
                                             std::span<const Complex>,
                                             const LinearOperator<Complex>*,
                                             std::span<const Complex>,
                                             const GmresConfig&);

}  // namespace samkit
