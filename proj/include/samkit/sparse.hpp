// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SAMKIT_SPARSE_HPP
#define SAMKIT_SPARSE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "samkit/scalar.hpp"

namespace samkit {

/// Coordinate-format staging buffer. Duplicates are allowed and get summed
/// when the buffer is converted into a SparseMatrix.
template <Scalar T>
struct TripletBuffer {
  std::size_t nrows = 0;
  std::size_t ncols = 0;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::vector<T> values;

  TripletBuffer() = default;
  TripletBuffer(std::size_t nr, std::size_t nc) : nrows(nr), ncols(nc) {}

  void reserve(std::size_t n) {
    rows.reserve(n);
    cols.reserve(n);
    values.reserve(n);
  }
  void add(std::size_t i, std::size_t j, T v) {
    rows.push_back(i);
    cols.push_back(j);
    values.push_back(v);
  }
  std::size_t size() const { return values.size(); }
};

/// Small dense column-major block, the least-squares workspace.
template <Scalar T>
struct DenseBlock {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  DenseBlock() = default;
  DenseBlock(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T{}) {}

  T& operator()(std::size_t i, std::size_t j) { return data[j * rows + i]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data[j * rows + i];
  }
  std::span<T> column(std::size_t j) { return {data.data() + j * rows, rows}; }
  std::span<const T> column(std::size_t j) const {
    return {data.data() + j * rows, rows};
  }
};

/// Compressed sparse column matrix. Row indices strictly increase within a
/// column. Stored zeros are kept as-is; nothing is pruned implicitly.
template <Scalar T>
class SparseMatrix {
 public:
  using value_type = T;

  SparseMatrix() : colptr_(1, 0) {}
  SparseMatrix(std::size_t nrows, std::size_t ncols);
  /// Takes ownership of raw CSC arrays; throws if they violate the layout
  /// invariants.
  SparseMatrix(std::size_t nrows, std::size_t ncols,
               std::vector<std::size_t> colptr,
               std::vector<std::size_t> rowind, std::vector<T> values);

  static SparseMatrix identity(std::size_t n);
  static SparseMatrix diagonal(std::span<const T> d);
  static SparseMatrix from_triplets(const TripletBuffer<T>& t);

  std::size_t nrows() const { return nrows_; }
  std::size_t ncols() const { return ncols_; }
  std::size_t nnz() const { return rowind_.size(); }

  std::span<const std::size_t> colptr() const { return colptr_; }
  std::span<const std::size_t> rowind() const { return rowind_; }
  std::span<const T> values() const { return values_; }

  std::span<const std::size_t> column_rows(std::size_t j) const {
    return {rowind_.data() + colptr_[j], colptr_[j + 1] - colptr_[j]};
  }
  std::span<const T> column_values(std::size_t j) const {
    return {values_.data() + colptr_[j], colptr_[j + 1] - colptr_[j]};
  }

  /// Entry (i, j), zero when not stored.
  T coeff(std::size_t i, std::size_t j) const;

  TripletBuffer<T> to_triplets() const;
  /// Plain (non-conjugating) transpose.
  SparseMatrix transpose() const;
  /// Same dimensions and identical stored positions.
  bool same_structure(const SparseMatrix& other) const;

 private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> colptr_;
  std::vector<std::size_t> rowind_;
  std::vector<T> values_;
};

/// Explicit real-to-complex promotion.
SparseMatrix<Complex> promote(const SparseMatrix<double>& a);

template <Scalar T>
std::vector<T> matvec(const SparseMatrix<T>& a, std::span<const T> x);

/// y = A x written into caller storage; columns are swept in order.
template <Scalar T>
void matvec_into(const SparseMatrix<T>& a, std::span<const T> x,
                 std::span<T> y);

/// Structural sparse product; cancellation zeros stay stored.
template <Scalar T>
SparseMatrix<T> spmm(const SparseMatrix<T>& a, const SparseMatrix<T>& b);

/// Dense copy of A(rows, cols); both index sets must be sorted.
template <Scalar T>
DenseBlock<T> extract_dense_submatrix(const SparseMatrix<T>& a,
                                      std::span<const std::size_t> rows,
                                      std::span<const std::size_t> cols);

/// alpha * E + A over the union of both patterns.
template <Scalar T>
SparseMatrix<T> shifted_combine(T alpha, const SparseMatrix<T>& e,
                                const SparseMatrix<T>& a);

template <Scalar T>
double frobenius_norm(const SparseMatrix<T>& a);

/// ||A - B||_F.
template <Scalar T>
double frobenius_norm_diff(const SparseMatrix<T>& a, const SparseMatrix<T>& b);

template <Scalar T>
double norm2(std::span<const T> x);

}  // namespace samkit

#endif  // SAMKIT_SPARSE_HPP
