// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SAMKIT_DENSE_LS_HPP
#define SAMKIT_DENSE_LS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "samkit/sparse.hpp"

namespace samkit {

template <Scalar T>
struct LeastSquaresSolution {
  std::vector<T> x;
  /// ||A x - b||_2, evaluated explicitly against the input block.
  double residual_norm = 0.0;
  std::size_t rank = 0;
};

/// Minimum-norm solution of min ||A x - b||_2 for a small dense block.
///
/// Householder QR with column pivoting determines the numerical rank r as
/// the number of diagonal entries of R above rank_tol * |R(0,0)|. When
/// r < ncols, the leading r rows of R are reduced once more by an
/// orthogonal factorization of their adjoint, which yields the
/// minimum-norm solution of the rank-r problem.
template <Scalar T>
LeastSquaresSolution<T> solve_least_squares(const DenseBlock<T>& a,
                                            std::span<const T> b,
                                            double rank_tol = 1e-12);

}  // namespace samkit

#endif  // SAMKIT_DENSE_LS_HPP
