// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "samkit/pattern.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "samkit/error.hpp"

namespace samkit {

namespace {

void require_same_shape(const SparsityPattern& p, const SparsityPattern& q,
                        const char* what) {
  if (p.nrows() != q.nrows() || p.ncols() != q.ncols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": pattern dimensions differ");
  }
}

template <class Merge>
SparsityPattern merge_columns(const SparsityPattern& p,
                              const SparsityPattern& q, Merge merge) {
  std::vector<std::size_t> colptr(p.ncols() + 1, 0);
  std::vector<std::size_t> rowind;
  for (std::size_t j = 0; j < p.ncols(); ++j) {
    auto a = p.column(j);
    auto b = q.column(j);
    merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(rowind));
    colptr[j + 1] = rowind.size();
  }
  return SparsityPattern(p.nrows(), p.ncols(), std::move(colptr),
                         std::move(rowind));
}

}  // namespace

SparsityPattern::SparsityPattern(std::size_t nrows, std::size_t ncols)
    : nrows_(nrows), ncols_(ncols), colptr_(ncols + 1, 0) {}

SparsityPattern::SparsityPattern(std::size_t nrows, std::size_t ncols,
                                 std::vector<std::size_t> colptr,
                                 std::vector<std::size_t> rowind)
    : nrows_(nrows),
      ncols_(ncols),
      colptr_(std::move(colptr)),
      rowind_(std::move(rowind)) {
  if (colptr_.size() != ncols_ + 1 || colptr_.front() != 0 ||
      colptr_.back() != rowind_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "malformed pattern arrays");
  }
  for (std::size_t j = 0; j < ncols_; ++j) {
    if (colptr_[j] > colptr_[j + 1]) {
      throw Error(ErrorCode::kInvalidArgument, "pattern column pointer decreases");
    }
    for (std::size_t k = colptr_[j]; k < colptr_[j + 1]; ++k) {
      if (rowind_[k] >= nrows_) {
        throw Error(ErrorCode::kIndexOutOfRange,
                    "pattern row " + std::to_string(rowind_[k]) +
                        " out of range");
      }
      if (k > colptr_[j] && rowind_[k] <= rowind_[k - 1]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "pattern column " + std::to_string(j) + " not sorted");
      }
    }
  }
}

SparsityPattern SparsityPattern::from_entries(
    std::size_t nrows, std::size_t ncols,
    std::span<const std::pair<std::size_t, std::size_t>> entries) {
  std::vector<std::pair<std::size_t, std::size_t>> sorted;
  sorted.reserve(entries.size());
  for (auto [i, j] : entries) {
    if (i >= nrows || j >= ncols) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "pattern entry (" + std::to_string(i) + ", " +
                      std::to_string(j) + ") out of range");
    }
    sorted.emplace_back(j, i);
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> colptr(ncols + 1, 0);
  std::vector<std::size_t> rowind;
  rowind.reserve(sorted.size());
  for (auto [j, i] : sorted) {
    ++colptr[j + 1];
    rowind.push_back(i);
  }
  std::partial_sum(colptr.begin(), colptr.end(), colptr.begin());
  return SparsityPattern(nrows, ncols, std::move(colptr), std::move(rowind));
}

bool SparsityPattern::contains(std::size_t i, std::size_t j) const {
  if (j >= ncols_) return false;
  auto c = column(j);
  return std::binary_search(c.begin(), c.end(), i);
}

template <Scalar T>
SparsityPattern pattern_of(const SparseMatrix<T>& a) {
  return SparsityPattern(
      a.nrows(), a.ncols(),
      std::vector<std::size_t>(a.colptr().begin(), a.colptr().end()),
      std::vector<std::size_t>(a.rowind().begin(), a.rowind().end()));
}

SparsityPattern offset_pattern(std::size_t n, std::span<const long> offsets) {
  if (n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "offset_pattern needs n > 0");
  }
  std::vector<long> sorted(offsets.begin(), offsets.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> colptr(n + 1, 0);
  std::vector<std::size_t> rowind;
  const long ln = static_cast<long>(n);
  for (long s = 0; s < ln; ++s) {
    for (long o : sorted) {
      const long i = s + o;
      if (i >= 0 && i < ln) rowind.push_back(static_cast<std::size_t>(i));
    }
    colptr[static_cast<std::size_t>(s) + 1] = rowind.size();
  }
  return SparsityPattern(n, n, std::move(colptr), std::move(rowind));
}

SparsityPattern diagonal_pattern(std::size_t n) {
  const long offsets[] = {0};
  return offset_pattern(n, offsets);
}

SparsityPattern tridiagonal_pattern(std::size_t n) {
  const long offsets[] = {-1, 0, 1};
  return offset_pattern(n, offsets);
}

SparsityPattern boolean_product(const SparsityPattern& p,
                                const SparsityPattern& q) {
  if (p.ncols() != q.nrows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "boolean_product: inner dimensions differ");
  }
  std::vector<std::size_t> colptr(q.ncols() + 1, 0);
  std::vector<std::size_t> rowind;
  std::vector<std::size_t> mark(p.nrows(), static_cast<std::size_t>(-1));
  std::vector<std::size_t> touched;
  for (std::size_t j = 0; j < q.ncols(); ++j) {
    touched.clear();
    for (std::size_t k : q.column(j)) {
      for (std::size_t i : p.column(k)) {
        if (mark[i] != j) {
          mark[i] = j;
          touched.push_back(i);
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    rowind.insert(rowind.end(), touched.begin(), touched.end());
    colptr[j + 1] = rowind.size();
  }
  return SparsityPattern(p.nrows(), q.ncols(), std::move(colptr),
                         std::move(rowind));
}

SparsityPattern symbolic_power(const SparsityPattern& pattern, int power) {
  if (pattern.nrows() != pattern.ncols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "symbolic_power needs a square pattern");
  }
  if (power < 1 || power > 5) {
    throw Error(ErrorCode::kInvalidArgument,
                "symbolic_power supports powers 1..5, got " +
                    std::to_string(power));
  }
  SparsityPattern result = pattern;
  for (int k = 1; k < power; ++k) result = boolean_product(result, pattern);
  return result;
}

template <Scalar T>
SparsityPattern sparsified_power(const SparseMatrix<T>& a, int power,
                                 double tau, ThresholdMode mode) {
  if (a.nrows() != a.ncols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "sparsified_power needs a square matrix");
  }
  if (power < 1 || power > 5) {
    throw Error(ErrorCode::kInvalidArgument,
                "sparsified_power supports powers 1..5");
  }
  if (!(tau >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be nonnegative");
  }
  SparseMatrix<T> ap = a;
  for (int k = 1; k < power; ++k) ap = spmm(ap, a);
  double cutoff = tau;
  if (mode == ThresholdMode::kRelative) {
    double maxabs = 0.0;
    for (const T& v : ap.values()) maxabs = std::max(maxabs, magnitude(v));
    // An all-zero power has no unit scaling; only tau = 0 keeps entries.
    if (maxabs == 0.0 && tau > 0.0) {
      return SparsityPattern(ap.nrows(), ap.ncols());
    }
    cutoff = tau * maxabs;
  }
  std::vector<std::size_t> colptr(ap.ncols() + 1, 0);
  std::vector<std::size_t> rowind;
  for (std::size_t j = 0; j < ap.ncols(); ++j) {
    auto rows = ap.column_rows(j);
    auto vals = ap.column_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (magnitude(vals[k]) >= cutoff) rowind.push_back(rows[k]);
    }
    colptr[j + 1] = rowind.size();
  }
  return SparsityPattern(ap.nrows(), ap.ncols(), std::move(colptr),
                         std::move(rowind));
}

SparsityPattern pattern_union(const SparsityPattern& p,
                              const SparsityPattern& q) {
  require_same_shape(p, q, "pattern_union");
  return merge_columns(p, q, [](auto... args) {
    return std::set_union(args...);
  });
}

SparsityPattern pattern_intersection(const SparsityPattern& p,
                                     const SparsityPattern& q) {
  require_same_shape(p, q, "pattern_intersection");
  return merge_columns(p, q, [](auto... args) {
    return std::set_intersection(args...);
  });
}

bool is_subset(const SparsityPattern& p, const SparsityPattern& q) {
  require_same_shape(p, q, "is_subset");
  for (std::size_t j = 0; j < p.ncols(); ++j) {
    auto a = p.column(j);
    auto b = q.column(j);
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) return false;
  }
  return true;
}

SparsityPattern read_pattern(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open pattern file " + path.string());
  }
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#' || line[pos] == '%') {
        continue;
      }
      return true;
    }
    return false;
  };
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorCode::kParse, path.string() + ":" +
                                        std::to_string(lineno) + ": " + why);
  };
  if (!next_line()) throw fail("missing header line");
  std::size_t nrows = 0;
  std::size_t ncols = 0;
  std::size_t nnz = 0;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> nrows >> ncols >> nnz) || (hs >> extra)) {
      throw fail("expected header 'nrows ncols nnz'");
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> entries;
  entries.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!next_line()) {
      throw fail("header declares " + std::to_string(nnz) +
                 " entries, file has " + std::to_string(k));
    }
    std::istringstream es(line);
    long i = -1;
    long j = -1;
    std::string extra;
    if (!(es >> i >> j) || (es >> extra)) throw fail("expected 'row col'");
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= nrows ||
        static_cast<std::size_t>(j) >= ncols) {
      throw fail("entry outside the declared " + std::to_string(nrows) + "x" +
                 std::to_string(ncols) + " dimensions");
    }
    entries.emplace_back(static_cast<std::size_t>(i),
                         static_cast<std::size_t>(j));
  }
  if (next_line()) throw fail("more entries than the header declares");
  return SparsityPattern::from_entries(nrows, ncols, entries);
}

void write_pattern(const SparsityPattern& pattern,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write pattern file " + path.string());
  }
  out << pattern.nrows() << ' ' << pattern.ncols() << ' ' << pattern.nnz()
      << '\n';
  for (std::size_t j = 0; j < pattern.ncols(); ++j) {
    for (std::size_t i : pattern.column(j)) out << i << ' ' << j << '\n';
  }
  if (!out) {
    throw Error(ErrorCode::kIo, "failed writing pattern file " + path.string());
  }
}

template SparsityPattern pattern_of<double>(const SparseMatrix<double>&);
template SparsityPattern pattern_of<Complex>(const SparseMatrix<Complex>&);
template SparsityPattern sparsified_power<double>(const SparseMatrix<double>&,
                                                  int, double, ThresholdMode);
template SparsityPattern sparsified_power<Complex>(
    const SparseMatrix<Complex>&, int, double, ThresholdMode);

}  // namespace samkit
