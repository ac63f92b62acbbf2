// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SAMKIT_ILUTP_HPP
#define SAMKIT_ILUTP_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "samkit/operator.hpp"
#include "samkit/sparse.hpp"

namespace samkit {

struct IlutpParams {
  /// Largest number of entries kept per row in L, and separately in U
  /// (the diagonal of U does not count).
  std::size_t lfil = 20;
  /// Entries below droptol times the 2-norm of the original row are dropped.
  double droptol = 1e-3;
  /// Columns i and j swap when pivtol * |w_j| > |w_i|. 0 disables pivoting.
  double pivtol = 1.0;

  void validate() const;
};

/// Factors with A * P = L * U, where P moves column colperm[k] of A to
/// position k. L is unit lower triangular with the unit diagonal implicit
/// (only strictly lower entries are stored); U is upper triangular with its
/// diagonal stored last in each column.
template <Scalar T>
struct IlutpFactors {
  SparseMatrix<T> lower;
  SparseMatrix<T> upper;
  std::vector<std::size_t> colperm;
  IlutpParams params;

  std::size_t size() const { return colperm.size(); }
};

/// Dual-threshold incomplete LU with column pivoting, computed row by row
/// (IKJ order). Throws FactorizationError naming the row when a pivot of
/// magnitude below 1e-300 survives pivoting.
template <Scalar T>
IlutpFactors<T> ilutp_factor(const SparseMatrix<T>& a, const IlutpParams& params);

/// Approximates A^{-1} v: solves L y = v, U z = y and undoes the column
/// permutation.
template <Scalar T>
void ilutp_apply_solve(const IlutpFactors<T>& f, std::span<const T> v,
                       std::span<T> out);

template <Scalar T>
std::vector<T> ilutp_apply_solve(const IlutpFactors<T>& f,
                                 std::span<const T> v);

/// The factors as a preconditioner operator.
template <Scalar T>
class IlutpOperator final : public LinearOperator<T> {
 public:
  explicit IlutpOperator(IlutpFactors<T> f)
      : factors_(std::make_shared<const IlutpFactors<T>>(std::move(f))) {}
  explicit IlutpOperator(std::shared_ptr<const IlutpFactors<T>> f)
      : factors_(std::move(f)) {}

  std::size_t rows() const override { return factors_->size(); }
  std::size_t cols() const override { return factors_->size(); }
  void apply(std::span<const T> x, std::span<T> y) const override {
    ilutp_apply_solve(*factors_, x, y);
  }
  const IlutpFactors<T>& factors() const { return *factors_; }

 private:
  std::shared_ptr<const IlutpFactors<T>> factors_;
};

}  // namespace samkit

#endif  // SAMKIT_ILUTP_HPP
