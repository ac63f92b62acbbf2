// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SAMKIT_PATTERN_HPP
#define SAMKIT_PATTERN_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "samkit/sparse.hpp"

namespace samkit {

/// Value-free index structure: per-column sorted, duplicate-free row sets.
/// A pattern S defines the subspace of matrices supported on S.
class SparsityPattern {
 public:
  SparsityPattern() : colptr_(1, 0) {}
  SparsityPattern(std::size_t nrows, std::size_t ncols);
  /// Validates the compressed-column layout.
  SparsityPattern(std::size_t nrows, std::size_t ncols,
                  std::vector<std::size_t> colptr,
                  std::vector<std::size_t> rowind);
  /// Builds from arbitrary (row, col) pairs; duplicates are merged.
  static SparsityPattern from_entries(
      std::size_t nrows, std::size_t ncols,
      std::span<const std::pair<std::size_t, std::size_t>> entries);

  std::size_t nrows() const { return nrows_; }
  std::size_t ncols() const { return ncols_; }
  std::size_t nnz() const { return rowind_.size(); }
  std::span<const std::size_t> colptr() const { return colptr_; }
  std::span<const std::size_t> rowind() const { return rowind_; }
  std::span<const std::size_t> column(std::size_t j) const {
    return {rowind_.data() + colptr_[j], colptr_[j + 1] - colptr_[j]};
  }
  bool contains(std::size_t i, std::size_t j) const;

  friend bool operator==(const SparsityPattern&, const SparsityPattern&) =
      default;

 private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> colptr_;
  std::vector<std::size_t> rowind_;
};

/// Positions of the stored entries of A, explicit zeros included.
template <Scalar T>
SparsityPattern pattern_of(const SparseMatrix<T>& a);

/// (s + o, s) for every column s and offset o, clipped at the borders.
SparsityPattern offset_pattern(std::size_t n, std::span<const long> offsets);

SparsityPattern diagonal_pattern(std::size_t n);
SparsityPattern tridiagonal_pattern(std::size_t n);

/// Boolean product P * Q.
SparsityPattern boolean_product(const SparsityPattern& p,
                                const SparsityPattern& q);

/// Structure of A^p for 1 <= p <= 5.
SparsityPattern symbolic_power(const SparsityPattern& pattern, int power);

enum class ThresholdMode { kRelative, kAbsolute };

/// Positions of A^p whose magnitude reaches tau. In relative mode A^p is
/// first scaled to unit maximum magnitude.
template <Scalar T>
SparsityPattern sparsified_power(const SparseMatrix<T>& a, int power,
                                 double tau,
                                 ThresholdMode mode = ThresholdMode::kRelative);

SparsityPattern pattern_union(const SparsityPattern& p,
                              const SparsityPattern& q);
SparsityPattern pattern_intersection(const SparsityPattern& p,
                                     const SparsityPattern& q);
bool is_subset(const SparsityPattern& p, const SparsityPattern& q);

/// Text format: "nrows ncols nnz" then nnz lines "row col", 0-based, any
/// order.
SparsityPattern read_pattern(const std::filesystem::path& path);
void write_pattern(const SparsityPattern& pattern,
                   const std::filesystem::path& path);

}  // namespace samkit

#endif  // SAMKIT_PATTERN_HPP
