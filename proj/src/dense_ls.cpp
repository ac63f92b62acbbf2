// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "samkit/dense_ls.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "samkit/error.hpp"

namespace samkit {

namespace {

// Elementary reflector H = I - tau v v^H with v(0) = 1 such that
// H^H (alpha, x)^T = (beta, 0)^T, beta real. On return x holds v(1:).
template <Scalar T>
T make_reflector(T& alpha, std::span<T> x) {
  double xnorm2 = 0.0;
  for (const T& v : x) xnorm2 += squared_magnitude(v);
  double alpha_imag = 0.0;
  if constexpr (is_complex_v<T>) alpha_imag = alpha.imag();
  if (xnorm2 == 0.0 && alpha_imag == 0.0) return T{};
  double alpha_real;
  if constexpr (is_complex_v<T>) {
    alpha_real = alpha.real();
  } else {
    alpha_real = alpha;
  }
  const double norm = std::sqrt(squared_magnitude(alpha) + xnorm2);
  const double beta = alpha_real >= 0.0 ? -norm : norm;
  const T tau = (T{beta} - alpha) / T{beta};
  const T scale = T{1} / (alpha - T{beta});
  for (T& v : x) v *= scale;
  alpha = T{beta};
  return tau;
}

// y <- H^H y for the reflector stored as (1, tail).
template <Scalar T>
void apply_reflector_adjoint(T tau, std::span<const T> tail, std::span<T> y) {
  if (tau == T{}) return;
  T w = y[0];
  for (std::size_t i = 0; i < tail.size(); ++i) w += conj(tail[i]) * y[i + 1];
  w *= conj(tau);
  y[0] -= w;
  for (std::size_t i = 0; i < tail.size(); ++i) y[i + 1] -= tail[i] * w;
}

// y <- H y.
template <Scalar T>
void apply_reflector(T tau, std::span<const T> tail, std::span<T> y) {
  if (tau == T{}) return;
  T w = y[0];
  for (std::size_t i = 0; i < tail.size(); ++i) w += conj(tail[i]) * y[i + 1];
  w *= tau;
  y[0] -= w;
  for (std::size_t i = 0; i < tail.size(); ++i) y[i + 1] -= tail[i] * w;
}

}  // namespace

template <Scalar T>
LeastSquaresSolution<T> solve_least_squares(const DenseBlock<T>& a,
                                            std::span<const T> b,
                                            double rank_tol) {
  const std::size_t m = a.rows;
  const std::size_t n = a.cols;
  if (b.size() != m) {
    throw Error(ErrorCode::kDimensionMismatch,
                "least squares right-hand side has wrong length");
  }
  LeastSquaresSolution<T> out;
  out.x.assign(n, T{});
  if (m == 0 || n == 0) {
    out.residual_norm = norm2(b);
    return out;
  }

  DenseBlock<T> r = a;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const std::size_t steps = std::min(m, n);
  std::vector<T> taus(steps, T{});
  std::vector<double> colnorm(n);

  for (std::size_t j = 0; j < steps; ++j) {
    // Pivot: the remaining column with the largest trailing norm. Blocks
    // are tiny, so norms are recomputed rather than downdated.
    std::size_t best = j;
    for (std::size_t c = j; c < n; ++c) {
      double s = 0.0;
      for (std::size_t i = j; i < m; ++i) s += squared_magnitude(r(i, c));
      colnorm[c] = s;
      if (s > colnorm[best]) best = c;
    }
    if (best != j) {
      std::swap_ranges(r.column(j).begin(), r.column(j).end(),
                       r.column(best).begin());
      std::swap(perm[j], perm[best]);
    }
    auto col = r.column(j);
    taus[j] = make_reflector<T>(col[j], col.subspan(j + 1));
    std::span<const T> tail = col.subspan(j + 1);
    for (std::size_t c = j + 1; c < n; ++c) {
      apply_reflector_adjoint<T>(taus[j], tail, r.column(c).subspan(j));
    }
  }

  const double lead = magnitude(r(0, 0));
  std::size_t rank = 0;
  while (rank < steps && lead > 0.0 &&
         magnitude(r(rank, rank)) > rank_tol * lead) {
    ++rank;
  }
  out.rank = rank;

  std::vector<T> c(b.begin(), b.end());
  for (std::size_t j = 0; j < steps; ++j) {
    apply_reflector_adjoint<T>(taus[j], std::span<const T>(r.column(j)).subspan(j + 1),
                               std::span<T>(c).subspan(j));
  }

  std::vector<T> y(n, T{});
  if (rank == n) {
    for (std::size_t ii = n; ii-- > 0;) {
      T s = c[ii];
      for (std::size_t q = ii + 1; q < n; ++q) s -= r(ii, q) * y[q];
      y[ii] = s / r(ii, ii);
    }
  } else if (rank > 0) {
    // Leading rank rows form an upper trapezoid R1 (rank x n). Factor
    // R1^H = Z [S; 0], so R1 = [S^H 0] Z^H and the minimum-norm y is
    // Z [S^-H c(0:rank); 0].
    DenseBlock<T> w(n, rank);
    for (std::size_t q = 0; q < rank; ++q) {
      for (std::size_t i = q; i < n; ++i) w(i, q) = conj(r(q, i));
    }
    std::vector<T> ztaus(rank, T{});
    for (std::size_t q = 0; q < rank; ++q) {
      auto col = w.column(q);
      ztaus[q] = make_reflector<T>(col[q], col.subspan(q + 1));
      std::span<const T> tail = col.subspan(q + 1);
      for (std::size_t k = q + 1; k < rank; ++k) {
        apply_reflector_adjoint<T>(ztaus[q], tail, w.column(k).subspan(q));
      }
    }
    for (std::size_t i = 0; i < rank; ++i) {
      T s = c[i];
      for (std::size_t q = 0; q < i; ++q) s -= conj(w(q, i)) * y[q];
      y[i] = s / conj(w(i, i));
    }
    for (std::size_t q = rank; q-- > 0;) {
      apply_reflector<T>(ztaus[q], std::span<const T>(w.column(q)).subspan(q + 1),
                         std::span<T>(y).subspan(q));
    }
  }
  for (std::size_t j = 0; j < n; ++j) out.x[perm[j]] = y[j];

  double res2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    T s = -b[i];
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * out.x[j];
    res2 += squared_magnitude(s);
  }
  out.residual_norm = std::sqrt(res2);
  return out;
}

template LeastSquaresSolution<double> solve_least_squares<double>(
    const DenseBlock<double>&, std::span<const double>, double);
template LeastSquaresSolution<Complex> solve_least_squares<Complex>(
    const DenseBlock<Complex>&, std::span<const Complex>, double);

}  // namespace samkit
