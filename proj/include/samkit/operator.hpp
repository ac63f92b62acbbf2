// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SAMKIT_OPERATOR_HPP
#define SAMKIT_OPERATOR_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include "samkit/error.hpp"
#include "samkit/sparse.hpp"

namespace samkit {

/// y = Op(x). Implementations are immutable once built, so a single
/// operator may be applied from several threads.
template <Scalar T>
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual void apply(std::span<const T> x, std::span<T> y) const = 0;
};

template <Scalar T>
using OperatorPtr = std::shared_ptr<const LinearOperator<T>>;

template <Scalar T>
class IdentityOperator final : public LinearOperator<T> {
 public:
  explicit IdentityOperator(std::size_t n) : n_(n) {}
  std::size_t rows() const override { return n_; }
  std::size_t cols() const override { return n_; }
  void apply(std::span<const T> x, std::span<T> y) const override {
    if (x.size() != n_ || y.size() != n_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "identity operator applied to vector of wrong length");
    }
    std::copy(x.begin(), x.end(), y.begin());
  }

 private:
  std::size_t n_;
};

template <Scalar T>
class MatrixOperator final : public LinearOperator<T> {
 public:
  explicit MatrixOperator(SparseMatrix<T> a)
      : a_(std::make_shared<const SparseMatrix<T>>(std::move(a))) {}
  explicit MatrixOperator(std::shared_ptr<const SparseMatrix<T>> a)
      : a_(std::move(a)) {}

  std::size_t rows() const override { return a_->nrows(); }
  std::size_t cols() const override { return a_->ncols(); }
  void apply(std::span<const T> x, std::span<T> y) const override {
    matvec_into(*a_, x, y);
  }
  const SparseMatrix<T>& matrix() const { return *a_; }

 private:
  std::shared_ptr<const SparseMatrix<T>> a_;
};

/// Wraps any callable with the apply signature; handy for oracles.
template <Scalar T>
class FunctionOperator final : public LinearOperator<T> {
 public:
  using Fn = std::function<void(std::span<const T>, std::span<T>)>;
  FunctionOperator(std::size_t rows, std::size_t cols, Fn fn)
      : rows_(rows), cols_(cols), fn_(std::move(fn)) {}
  std::size_t rows() const override { return rows_; }
  std::size_t cols() const override { return cols_; }
  void apply(std::span<const T> x, std::span<T> y) const override {
    fn_(x, y);
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  Fn fn_;
};

}  // namespace samkit

#endif  // SAMKIT_OPERATOR_HPP
