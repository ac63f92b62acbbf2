// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "samkit/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "samkit/error.hpp"

namespace samkit {

namespace {

std::string dims(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

template <Scalar T>
SparseMatrix<T>::SparseMatrix(std::size_t nrows, std::size_t ncols)
    : nrows_(nrows), ncols_(ncols), colptr_(ncols + 1, 0) {}

template <Scalar T>
SparseMatrix<T>::SparseMatrix(std::size_t nrows, std::size_t ncols,
                              std::vector<std::size_t> colptr,
                              std::vector<std::size_t> rowind,
                              std::vector<T> values)
    : nrows_(nrows),
      ncols_(ncols),
      colptr_(std::move(colptr)),
      rowind_(std::move(rowind)),
      values_(std::move(values)) {
  if (colptr_.size() != ncols_ + 1 || colptr_.front() != 0 ||
      colptr_.back() != rowind_.size() || rowind_.size() != values_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "compressed column arrays have inconsistent lengths");
  }
  for (std::size_t j = 0; j < ncols_; ++j) {
    if (colptr_[j] > colptr_[j + 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "column pointer decreases at column " + std::to_string(j));
    }
    for (std::size_t k = colptr_[j]; k < colptr_[j + 1]; ++k) {
      if (rowind_[k] >= nrows_) {
        throw Error(ErrorCode::kIndexOutOfRange,
                    "row index " + std::to_string(rowind_[k]) +
                        " out of range in column " + std::to_string(j));
      }
      if (k > colptr_[j] && rowind_[k] <= rowind_[k - 1]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "row indices not strictly increasing in column " +
                        std::to_string(j));
      }
    }
  }
}

template <Scalar T>
SparseMatrix<T> SparseMatrix<T>::identity(std::size_t n) {
  std::vector<T> ones(n, T{1});
  return diagonal(ones);
}

template <Scalar T>
SparseMatrix<T> SparseMatrix<T>::diagonal(std::span<const T> d) {
  const std::size_t n = d.size();
  std::vector<std::size_t> colptr(n + 1);
  std::iota(colptr.begin(), colptr.end(), std::size_t{0});
  std::vector<std::size_t> rowind(n);
  std::iota(rowind.begin(), rowind.end(), std::size_t{0});
  return SparseMatrix(n, n, std::move(colptr), std::move(rowind),
                      std::vector<T>(d.begin(), d.end()));
}

template <Scalar T>
SparseMatrix<T> SparseMatrix<T>::from_triplets(const TripletBuffer<T>& t) {
  const std::size_t n = t.size();
  if (t.rows.size() != n || t.cols.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "triplet lists differ in length");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (t.rows[k] >= t.nrows || t.cols[k] >= t.ncols) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "triplet (" + std::to_string(t.rows[k]) + ", " +
                      std::to_string(t.cols[k]) + ") outside " +
                      dims(t.nrows, t.ncols));
    }
  }
  // Counting sort by column, then sort rows inside each column and merge
  // duplicates. Duplicates are summed in input order.
  std::vector<std::size_t> count(t.ncols + 1, 0);
  for (std::size_t k = 0; k < n; ++k) ++count[t.cols[k] + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<std::size_t> order(n);
  {
    std::vector<std::size_t> next(count.begin(), count.end() - 1);
    for (std::size_t k = 0; k < n; ++k) order[next[t.cols[k]]++] = k;
  }
  std::vector<std::size_t> colptr(t.ncols + 1, 0);
  std::vector<std::size_t> rowind;
  std::vector<T> values;
  rowind.reserve(n);
  values.reserve(n);
  for (std::size_t j = 0; j < t.ncols; ++j) {
    auto first = order.begin() + static_cast<std::ptrdiff_t>(count[j]);
    auto last = order.begin() + static_cast<std::ptrdiff_t>(count[j + 1]);
    std::stable_sort(first, last, [&](std::size_t a, std::size_t b) {
      return t.rows[a] < t.rows[b];
    });
    for (auto it = first; it != last; ++it) {
      const std::size_t i = t.rows[*it];
      if (rowind.size() > colptr[j] && rowind.back() == i) {
        values.back() += t.values[*it];
      } else {
        rowind.push_back(i);
        values.push_back(t.values[*it]);
      }
    }
    colptr[j + 1] = rowind.size();
  }
  return SparseMatrix(t.nrows, t.ncols, std::move(colptr), std::move(rowind),
                      std::move(values));
}

template <Scalar T>
T SparseMatrix<T>::coeff(std::size_t i, std::size_t j) const {
  auto r = column_rows(j);
  auto it = std::lower_bound(r.begin(), r.end(), i);
  if (it == r.end() || *it != i) return T{};
  return values_[colptr_[j] + static_cast<std::size_t>(it - r.begin())];
}

template <Scalar T>
TripletBuffer<T> SparseMatrix<T>::to_triplets() const {
  TripletBuffer<T> t(nrows_, ncols_);
  t.reserve(nnz());
  for (std::size_t j = 0; j < ncols_; ++j) {
    for (std::size_t k = colptr_[j]; k < colptr_[j + 1]; ++k) {
      t.add(rowind_[k], j, values_[k]);
    }
  }
  return t;
}

template <Scalar T>
SparseMatrix<T> SparseMatrix<T>::transpose() const {
  std::vector<std::size_t> colptr(nrows_ + 1, 0);
  for (std::size_t i : rowind_) ++colptr[i + 1];
  std::partial_sum(colptr.begin(), colptr.end(), colptr.begin());
  std::vector<std::size_t> next(colptr.begin(), colptr.end() - 1);
  std::vector<std::size_t> rowind(nnz());
  std::vector<T> values(nnz());
  for (std::size_t j = 0; j < ncols_; ++j) {
    for (std::size_t k = colptr_[j]; k < colptr_[j + 1]; ++k) {
      const std::size_t dst = next[rowind_[k]]++;
      rowind[dst] = j;
      values[dst] = values_[k];
    }
  }
  return SparseMatrix(ncols_, nrows_, std::move(colptr), std::move(rowind),
                      std::move(values));
}

template <Scalar T>
bool SparseMatrix<T>::same_structure(const SparseMatrix& other) const {
  return nrows_ == other.nrows_ && ncols_ == other.ncols_ &&
         colptr_ == other.colptr_ && rowind_ == other.rowind_;
}

SparseMatrix<Complex> promote(const SparseMatrix<double>& a) {
  std::vector<Complex> values(a.values().begin(), a.values().end());
  return SparseMatrix<Complex>(
      a.nrows(), a.ncols(),
      std::vector<std::size_t>(a.colptr().begin(), a.colptr().end()),
      std::vector<std::size_t>(a.rowind().begin(), a.rowind().end()),
      std::move(values));
}

template <Scalar T>
void matvec_into(const SparseMatrix<T>& a, std::span<const T> x,
                 std::span<T> y) {
  if (x.size() != a.ncols() || y.size() != a.nrows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matvec: matrix " + dims(a.nrows(), a.ncols()) +
                    " with vector of length " + std::to_string(x.size()));
  }
  std::fill(y.begin(), y.end(), T{});
  const auto colptr = a.colptr();
  const auto rowind = a.rowind();
  const auto values = a.values();
  for (std::size_t j = 0; j < a.ncols(); ++j) {
    const T xj = x[j];
    for (std::size_t k = colptr[j]; k < colptr[j + 1]; ++k) {
      y[rowind[k]] += values[k] * xj;
    }
  }
}

template <Scalar T>
std::vector<T> matvec(const SparseMatrix<T>& a, std::span<const T> x) {
  std::vector<T> y(a.nrows());
  matvec_into<T>(a, x, y);
  return y;
}

template <Scalar T>
SparseMatrix<T> spmm(const SparseMatrix<T>& a, const SparseMatrix<T>& b) {
  if (a.ncols() != b.nrows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "spmm: " + dims(a.nrows(), a.ncols()) + " times " +
                    dims(b.nrows(), b.ncols()));
  }
  const std::size_t m = a.nrows();
  std::vector<std::size_t> colptr(b.ncols() + 1, 0);
  std::vector<std::size_t> rowind;
  std::vector<T> values;
  std::vector<T> acc(m, T{});
  std::vector<std::size_t> mark(m, static_cast<std::size_t>(-1));
  std::vector<std::size_t> touched;
  for (std::size_t j = 0; j < b.ncols(); ++j) {
    touched.clear();
    auto brows = b.column_rows(j);
    auto bvals = b.column_values(j);
    for (std::size_t kb = 0; kb < brows.size(); ++kb) {
      const std::size_t p = brows[kb];
      const T bv = bvals[kb];
      auto arows = a.column_rows(p);
      auto avals = a.column_values(p);
      for (std::size_t ka = 0; ka < arows.size(); ++ka) {
        const std::size_t i = arows[ka];
        if (mark[i] != j) {
          mark[i] = j;
          acc[i] = T{};
          touched.push_back(i);
        }
        acc[i] += avals[ka] * bv;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (std::size_t i : touched) {
      rowind.push_back(i);
      values.push_back(acc[i]);
    }
    colptr[j + 1] = rowind.size();
  }
  return SparseMatrix<T>(m, b.ncols(), std::move(colptr), std::move(rowind),
                         std::move(values));
}

template <Scalar T>
DenseBlock<T> extract_dense_submatrix(const SparseMatrix<T>& a,
                                      std::span<const std::size_t> rows,
                                      std::span<const std::size_t> cols) {
  for (std::size_t i : rows) {
    if (i >= a.nrows()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "submatrix row " + std::to_string(i) + " out of range");
    }
  }
  DenseBlock<T> block(rows.size(), cols.size());
  for (std::size_t jj = 0; jj < cols.size(); ++jj) {
    const std::size_t j = cols[jj];
    if (j >= a.ncols()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "submatrix column " + std::to_string(j) + " out of range");
    }
    // Both the stored rows and the requested rows are sorted: merge.
    auto crow = a.column_rows(j);
    auto cval = a.column_values(j);
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < crow.size() && q < rows.size()) {
      if (crow[p] < rows[q]) {
        ++p;
      } else if (rows[q] < crow[p]) {
        ++q;
      } else {
        block(q, jj) = cval[p];
        ++p;
        ++q;
      }
    }
  }
  return block;
}

template <Scalar T>
SparseMatrix<T> shifted_combine(T alpha, const SparseMatrix<T>& e,
                                const SparseMatrix<T>& a) {
  if (e.nrows() != a.nrows() || e.ncols() != a.ncols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "shifted_combine: " + dims(e.nrows(), e.ncols()) + " vs " +
                    dims(a.nrows(), a.ncols()));
  }
  std::vector<std::size_t> colptr(a.ncols() + 1, 0);
  std::vector<std::size_t> rowind;
  std::vector<T> values;
  rowind.reserve(a.nnz() + e.nnz());
  values.reserve(a.nnz() + e.nnz());
  for (std::size_t j = 0; j < a.ncols(); ++j) {
    auto er = e.column_rows(j);
    auto ev = e.column_values(j);
    auto ar = a.column_rows(j);
    auto av = a.column_values(j);
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < er.size() || q < ar.size()) {
      if (q == ar.size() || (p < er.size() && er[p] < ar[q])) {
        rowind.push_back(er[p]);
        values.push_back(alpha * ev[p]);
        ++p;
      } else if (p == er.size() || ar[q] < er[p]) {
        rowind.push_back(ar[q]);
        values.push_back(av[q]);
        ++q;
      } else {
        rowind.push_back(ar[q]);
        values.push_back(alpha * ev[p] + av[q]);
        ++p;
        ++q;
      }
    }
    colptr[j + 1] = rowind.size();
  }
  return SparseMatrix<T>(a.nrows(), a.ncols(), std::move(colptr),
                         std::move(rowind), std::move(values));
}

template <Scalar T>
double frobenius_norm(const SparseMatrix<T>& a) {
  double s = 0.0;
  for (const T& v : a.values()) s += squared_magnitude(v);
  return std::sqrt(s);
}

template <Scalar T>
double frobenius_norm_diff(const SparseMatrix<T>& a, const SparseMatrix<T>& b) {
  if (a.nrows() != b.nrows() || a.ncols() != b.ncols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "frobenius_norm_diff: " + dims(a.nrows(), a.ncols()) + " vs " +
                    dims(b.nrows(), b.ncols()));
  }
  return frobenius_norm(shifted_combine(T{-1}, b, a));
}

template <Scalar T>
double norm2(std::span<const T> x) {
  double s = 0.0;
  for (const T& v : x) s += squared_magnitude(v);
  return std::sqrt(s);
}

#define SAMKIT_INSTANTIATE(T)                                                  \
  template class SparseMatrix<T>;                                              \
  template std::vector<T> matvec<T>(const SparseMatrix<T>&, std::span<const T>); \
  template void matvec_into<T>(const SparseMatrix<T>&, std::span<const T>,     \
                               std::span<T>);                                  \
  template SparseMatrix<T> spmm<T>(const SparseMatrix<T>&,                     \
                                   const SparseMatrix<T>&);                    \
  template DenseBlock<T> extract_dense_submatrix<T>(                           \
      const SparseMatrix<T>&, std::span<const std::size_t>,                    \
      std::span<const std::size_t>);                                           \
  template SparseMatrix<T> shifted_combine<T>(T, const SparseMatrix<T>&,       \
                                              const SparseMatrix<T>&);         \
  template double frobenius_norm<T>(const SparseMatrix<T>&);                   \
  template double frobenius_norm_diff<T>(const SparseMatrix<T>&,               \
                                         const SparseMatrix<T>&);              \
  template double norm2<T>(std::span<const T>);

SAMKIT_INSTANTIATE(double)
SAMKIT_INSTANTIATE(Complex)

#undef SAMKIT_INSTANTIATE

}  // namespace samkit
