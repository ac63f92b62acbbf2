// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

// Generators and dense oracles shared by the test binaries. Everything here
// goes through Eigen, never through the library's own dense kernels.

#ifndef SAMKIT_TESTS_SUPPORT_HPP
#define SAMKIT_TESTS_SUPPORT_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "samkit/pattern.hpp"
#include "samkit/scalar.hpp"
#include "samkit/sparse.hpp"

namespace samkit::testing {

template <class T>
using DenseMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using DenseVec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_);
  }
  template <class T>
  T value() {
    if constexpr (is_complex_v<T>) {
      return {uniform(), uniform()};
    } else {
      return uniform();
    }
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

template <class T>
DenseMat<T> to_dense(const SparseMatrix<T>& a) {
  DenseMat<T> d = DenseMat<T>::Zero(a.nrows(), a.ncols());
  for (std::size_t j = 0; j < a.ncols(); ++j) {
    auto rows = a.column_rows(j);
    auto vals = a.column_values(j);
    for (std::size_t p = 0; p < rows.size(); ++p) d(rows[p], j) += vals[p];
  }
  return d;
}

/// Keeps every entry of d, zeros included, when keep_zeros is set.
template <class T>
SparseMatrix<T> from_dense(const DenseMat<T>& d, bool keep_zeros = false) {
  TripletBuffer<T> t(d.rows(), d.cols());
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      if (keep_zeros || d(i, j) != T(0)) t.add(i, j, d(i, j));
    }
  }
  return SparseMatrix<T>::from_triplets(t);
}

template <class T>
DenseVec<T> to_eigen(const std::vector<T>& v) {
  DenseVec<T> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

template <class T>
std::vector<T> random_vector(Rng& rng, std::size_t n) {
  std::vector<T> v(n);
  for (auto& x : v) x = rng.template value<T>();
  return v;
}

/// Random sparse matrix with about per_column entries in each column.
template <class T>
SparseMatrix<T> random_sparse(Rng& rng, std::size_t nrows, std::size_t ncols,
                              std::size_t per_column) {
  TripletBuffer<T> t(nrows, ncols);
  for (std::size_t j = 0; j < ncols; ++j) {
    std::set<std::size_t> rows;
    while (rows.size() < std::min(per_column, nrows)) rows.insert(rng.index(nrows));
    for (auto i : rows) t.add(i, j, rng.template value<T>());
  }
  return SparseMatrix<T>::from_triplets(t);
}

/// Square, strictly diagonally dominant by a factor of two, so it is
/// nonsingular with a modest condition number.
template <class T>
SparseMatrix<T> random_well_conditioned(Rng& rng, std::size_t n,
                                        std::size_t per_column) {
  auto off = to_dense(random_sparse<T>(rng, n, n, per_column));
  for (std::size_t i = 0; i < n; ++i) off(i, i) = T(0);
  DenseMat<T> d = off;
  for (std::size_t i = 0; i < n; ++i) {
    const double row = off.row(i).cwiseAbs().sum();
    const double col = off.col(i).cwiseAbs().sum();
    const double sign = rng.uniform() < 0 ? -1.0 : 1.0;
    d(i, i) = T(sign * (2.0 * std::max(row, col) + 1.0));
  }
  return from_dense(d);
}

inline SparsityPattern random_pattern(Rng& rng, std::size_t n,
                                      std::size_t per_column) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t j = 0; j < n; ++j) {
    std::set<std::size_t> rows;
    while (rows.size() < std::min(per_column, n)) rows.insert(rng.index(n));
    for (auto i : rows) e.emplace_back(i, j);
  }
  return SparsityPattern::from_entries(n, n, e);
}

/// Minimum-norm least-squares solution through a complete SVD.
template <class T>
DenseVec<T> min_norm_lstsq(const DenseMat<T>& a, const DenseVec<T>& b) {
  if (a.cols() == 0) return DenseVec<T>(0);
  Eigen::JacobiSVD<DenseMat<T>> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = s.size() ? 1e-12 * s(0) : 0.0;
  DenseVec<T> utb = svd.matrixU().adjoint() * b;
  DenseVec<T> y = DenseVec<T>::Zero(a.cols());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) y(i) = utb(i) / s(i);
  }
  return svd.matrixV() * y;
}

/// Row-wise dense LU with the same column-pivot rule as the incomplete
/// factorization: swap when pivtol * |largest| > |diagonal candidate|.
/// Returns L (unit lower), U and colperm with A(:, colperm) = L U.
template <class T>
struct DenseLu {
  DenseMat<T> l;
  DenseMat<T> u;
  std::vector<std::size_t> colperm;
};

template <class T>
DenseLu<T> dense_pivoted_lu(const DenseMat<T>& a, double pivtol) {
  const Eigen::Index n = a.rows();
  DenseMat<T> w = a;
  std::vector<std::size_t> perm(n);
  for (Eigen::Index k = 0; k < n; ++k) perm[k] = k;
  DenseMat<T> l = DenseMat<T>::Identity(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    // Row k is eliminated against the rows above it, then pivoted.
    for (Eigen::Index i = 0; i < k; ++i) {
      const T m = w(k, i) / w(i, i);
      l(k, i) = m;
      w.row(k) -= m * w.row(i);
      w(k, i) = T(0);
    }
    Eigen::Index best = k;
    for (Eigen::Index j = k + 1; j < n; ++j) {
      if (std::abs(w(k, j)) > std::abs(w(k, best))) best = j;
    }
    if (best != k && pivtol * std::abs(w(k, best)) > std::abs(w(k, k))) {
      w.col(k).swap(w.col(best));
      std::swap(perm[k], perm[best]);
    }
  }
  DenseMat<T> u = w.template triangularView<Eigen::Upper>();
  return {l, u, perm};
}

}  // namespace samkit::testing

#endif  // SAMKIT_TESTS_SUPPORT_HPP
