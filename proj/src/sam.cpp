// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "samkit/sam.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iterator>
#include <mutex>
#include <string>
#include <thread>

#include "samkit/error.hpp"

namespace samkit {

namespace {

std::size_t first_structure_difference(const SparsityPattern& expected,
                                       std::span<const std::size_t> colptr,
                                       std::span<const std::size_t> rowind) {
  for (std::size_t j = 0; j < expected.ncols(); ++j) {
    auto want = expected.column(j);
    auto got = rowind.subspan(colptr[j], colptr[j + 1] - colptr[j]);
    if (!std::equal(want.begin(), want.end(), got.begin(), got.end())) {
      return j;
    }
  }
  return expected.ncols();
}

// A_ref(rows, l) for sorted rows, plus the squared norm of the stored
// entries of column l that fall outside rows.
template <Scalar T>
double gather_rhs(const SparseMatrix<T>& a_ref, std::size_t l,
                  std::span<const std::size_t> rows, std::vector<T>& rhs) {
  rhs.assign(rows.size(), T{});
  auto cr = a_ref.column_rows(l);
  auto cv = a_ref.column_values(l);
  double outside = 0.0;
  std::size_t q = 0;
  for (std::size_t p = 0; p < cr.size(); ++p) {
    while (q < rows.size() && rows[q] < cr[p]) ++q;
    if (q < rows.size() && rows[q] == cr[p]) {
      rhs[q] = cv[p];
    } else {
      outside += squared_magnitude(cv[p]);
    }
  }
  return outside;
}

}  // namespace

SamPlan make_plan(const SparsityPattern& pattern,
                  const SparsityPattern& matrix_structure,
                  const SparsityPattern* reference_structure) {
  const std::size_t n = matrix_structure.ncols();
  if (matrix_structure.nrows() != n || pattern.nrows() != n ||
      pattern.ncols() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "SAM plan needs a square matrix and a pattern of equal size");
  }
  if (reference_structure != nullptr &&
      (reference_structure->nrows() != n || reference_structure->ncols() != n)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "SAM plan reference has different dimensions");
  }
  SamPlan out;
  out.n = n;
  out.include_rhs_rows = reference_structure != nullptr;
  out.matrix_structure = matrix_structure;
  out.s_ptr.assign(n + 1, 0);
  out.r_ptr.assign(n + 1, 0);
  out.s_ind.reserve(pattern.nnz());

  std::vector<std::size_t> mark(n, static_cast<std::size_t>(-1));
  std::vector<std::size_t> rows;
  for (std::size_t l = 0; l < n; ++l) {
    auto sl = pattern.column(l);
    out.s_ind.insert(out.s_ind.end(), sl.begin(), sl.end());
    out.s_ptr[l + 1] = out.s_ind.size();

    rows.clear();
    auto take = [&](std::span<const std::size_t> src) {
      for (std::size_t i : src) {
        if (mark[i] != l) {
          mark[i] = l;
          rows.push_back(i);
        }
      }
    };
    for (std::size_t j : sl) take(matrix_structure.column(j));
    if (sl.empty()) {
      out.degenerate_columns.push_back(l);
    } else if (reference_structure != nullptr) {
      take(reference_structure->column(l));
    }
    std::sort(rows.begin(), rows.end());
    out.r_ind.insert(out.r_ind.end(), rows.begin(), rows.end());
    out.r_ptr[l + 1] = out.r_ind.size();

    out.max_s = std::max(out.max_s, sl.size());
    out.max_r = std::max(out.max_r, rows.size());
  }
  return out;
}

template <Scalar T>
SamPlan plan(const SparsityPattern& pattern, const SparseMatrix<T>& a,
             bool include_rhs_rows) {
  const SparsityPattern structure = pattern_of(a);
  return make_plan(pattern, structure, include_rhs_rows ? &structure : nullptr);
}

template <Scalar T>
SamPlan plan(const SparsityPattern& pattern, const SparseMatrix<T>& a_k,
             const SparseMatrix<T>& a_ref, bool include_rhs_rows) {
  const SparsityPattern reference = pattern_of(a_ref);
  return make_plan(pattern, pattern_of(a_k),
                   include_rhs_rows ? &reference : nullptr);
}

template <Scalar T>
LeastSquaresSolution<T> compute_map_column(const SparseMatrix<T>& a_k,
                                           const SparseMatrix<T>& a_ref,
                                           const SamPlan& plan, std::size_t l,
                                           double rank_tol) {
  auto sl = plan.s(l);
  auto rl = plan.r(l);
  std::vector<T> rhs;
  const double outside = gather_rhs(a_ref, l, rl, rhs);
  LeastSquaresSolution<T> sol;
  if (sl.empty()) {
    sol.residual_norm = std::sqrt(squared_magnitude(norm2<T>(rhs)) + outside);
    return sol;
  }
  const DenseBlock<T> block = extract_dense_submatrix(a_k, rl, sl);
  sol = solve_least_squares<T>(block, rhs, rank_tol);
  sol.residual_norm =
      std::sqrt(sol.residual_norm * sol.residual_norm + outside);
  return sol;
}

template <Scalar T>
SamMap<T> compute_map(const SparseMatrix<T>& a_k, const SparseMatrix<T>& a_ref,
                      const SamPlan& plan, const SamOptions& options) {
  const std::size_t n = plan.n;
  if (a_k.nrows() != n || a_k.ncols() != n || a_ref.nrows() != n ||
      a_ref.ncols() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "compute_map: matrices do not match the plan dimension " +
                    std::to_string(n));
  }
  const std::size_t bad = first_structure_difference(
      plan.matrix_structure, a_k.colptr(), a_k.rowind());
  if (bad < n) {
    throw StructureError(bad, "compute_map: column " + std::to_string(bad) +
                                  " of the system matrix differs from the "
                                  "planned structure");
  }

  const std::size_t total = plan.s_ind.size();
  std::vector<T> values(total, T{});
  std::vector<double> col_res(n, 0.0);

  auto run_column = [&](std::size_t l) {
    LeastSquaresSolution<T> sol =
        compute_map_column(a_k, a_ref, plan, l, options.rank_tol);
    std::copy(sol.x.begin(), sol.x.end(),
              values.begin() + static_cast<std::ptrdiff_t>(plan.s_ptr[l]));
    col_res[l] = sol.residual_norm;
  };

  unsigned workers = options.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));

  if (workers <= 1) {
    for (std::size_t l = 0; l < n; ++l) run_column(l);
  } else {
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t l = w; l < n; l += workers) run_column(l);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  TripletBuffer<T> triplets(n, n);
  triplets.reserve(total);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = plan.s_ptr[l]; k < plan.s_ptr[l + 1]; ++k) {
      triplets.add(plan.s_ind[k], l, values[k]);
    }
  }

  SamMap<T> out;
  out.map = SparseMatrix<T>::from_triplets(triplets);
  out.degenerate_columns = plan.degenerate_columns;
  if (options.compute_residuals) {
    double sum = 0.0;
    for (double r : col_res) sum += r * r;
    const double ref_norm = frobenius_norm(a_ref);
    if (ref_norm > 0.0) out.rel_residual = std::sqrt(sum) / ref_norm;
    out.column_residuals = std::move(col_res);
  }
  return out;
}

template <Scalar T>
double map_residual_norm(const SparseMatrix<T>& a_k, const SparseMatrix<T>& n,
                         const SparseMatrix<T>& a_ref) {
  const double ref_norm = frobenius_norm(a_ref);
  if (ref_norm == 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "map_residual_norm: reference matrix is zero");
  }
  return frobenius_norm_diff(spmm(a_k, n), a_ref) / ref_norm;
}

template <Scalar T>
PreconditionerChain<T>::PreconditionerChain(std::vector<OperatorPtr<T>> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty preconditioner chain");
  }
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (!factors_[k]) {
      throw Error(ErrorCode::kInvalidArgument, "null preconditioner stage");
    }
    if (k > 0 && factors_[k - 1]->cols() != factors_[k]->rows()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "preconditioner chain stages " + std::to_string(k - 1) +
                      " and " + std::to_string(k) + " are incompatible");
    }
  }
}

template <Scalar T>
void PreconditionerChain<T>::apply(std::span<const T> x, std::span<T> y) const {
  if (x.size() != cols() || y.size() != rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "preconditioner chain applied to vector of wrong length");
  }
  std::vector<T> in(x.begin(), x.end());
  std::vector<T> out;
  for (std::size_t k = factors_.size(); k-- > 0;) {
    out.assign(factors_[k]->rows(), T{});
    factors_[k]->apply(in, out);
    std::swap(in, out);
  }
  std::copy(in.begin(), in.end(), y.begin());
}

template <Scalar T>
PreconditionerChain<T> compose(SparseMatrix<T> n,
                               std::type_identity_t<OperatorPtr<T>> p) {
  if (!p) throw Error(ErrorCode::kInvalidArgument, "compose: null operator");
  if (n.ncols() != p->rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "compose: map has " + std::to_string(n.ncols()) +
                    " columns, preconditioner has " +
                    std::to_string(p->rows()) + " rows");
  }
  std::vector<OperatorPtr<T>> factors;
  factors.push_back(std::make_shared<MatrixOperator<T>>(std::move(n)));
  factors.push_back(std::move(p));
  return PreconditionerChain<T>(std::move(factors));
}

#define SAMKIT_INSTANTIATE(T)                                                  \
  template SamPlan plan<T>(const SparsityPattern&, const SparseMatrix<T>&,     \
                           bool);                                              \
  template SamPlan plan<T>(const SparsityPattern&, const SparseMatrix<T>&,     \
                           const SparseMatrix<T>&, bool);                      \
  template LeastSquaresSolution<T> compute_map_column<T>(                      \
      const SparseMatrix<T>&, const SparseMatrix<T>&, const SamPlan&,          \
      std::size_t, double);                                                    \
  template SamMap<T> compute_map<T>(const SparseMatrix<T>&,                    \
                                    const SparseMatrix<T>&, const SamPlan&,    \
                                    const SamOptions&);                        \
  template double map_residual_norm<T>(const SparseMatrix<T>&,                 \
                                       const SparseMatrix<T>&,                 \
                                       const SparseMatrix<T>&);                \
  template class PreconditionerChain<T>;                                       \
  template PreconditionerChain<T> compose<T>(                                  \
      SparseMatrix<T>, std::type_identity_t<OperatorPtr<T>>);

SAMKIT_INSTANTIATE(double)
SAMKIT_INSTANTIATE(Complex)

#undef SAMKIT_INSTANTIATE

}  // namespace samkit
