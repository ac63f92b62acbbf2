// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SAMKIT_SAM_HPP
#define SAMKIT_SAM_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "samkit/dense_ls.hpp"
#include "samkit/operator.hpp"
#include "samkit/pattern.hpp"
#include "samkit/sparse.hpp"

namespace samkit {

/// Index sets for the column-wise least-squares problems of a sparse
/// approximate map. For column l, s(l) lists the unknown positions of the
/// map column and r(l) the equation rows that can be nonzero. One plan
/// serves every matrix of a sequence whose structure does not change.
struct SamPlan {
  std::size_t n = 0;
  std::vector<std::size_t> s_ptr{0};
  std::vector<std::size_t> s_ind;
  std::vector<std::size_t> r_ptr{0};
  std::vector<std::size_t> r_ind;
  std::size_t max_s = 0;
  std::size_t max_r = 0;
  bool include_rhs_rows = true;
  /// Columns with an empty s(l); their map column is identically zero.
  std::vector<std::size_t> degenerate_columns;
  /// Structure of the matrix the plan was built against.
  SparsityPattern matrix_structure;

  std::span<const std::size_t> s(std::size_t l) const {
    return {s_ind.data() + s_ptr[l], s_ptr[l + 1] - s_ptr[l]};
  }
  std::span<const std::size_t> r(std::size_t l) const {
    return {r_ind.data() + r_ptr[l], r_ptr[l + 1] - r_ptr[l]};
  }
};

/// Builds the plan for pattern S against the structure of the system
/// matrix. When reference_structure is given, each r(l) also receives the
/// stored rows of that matrix's column l.
SamPlan make_plan(const SparsityPattern& pattern,
                  const SparsityPattern& matrix_structure,
                  const SparsityPattern* reference_structure);

/// Plan for mapping A onto a reference with A's own structure.
template <Scalar T>
SamPlan plan(const SparsityPattern& pattern, const SparseMatrix<T>& a,
             bool include_rhs_rows = true);

/// Plan for mapping A_k onto a reference of possibly different structure.
template <Scalar T>
SamPlan plan(const SparsityPattern& pattern, const SparseMatrix<T>& a_k,
             const SparseMatrix<T>& a_ref, bool include_rhs_rows = true);

struct SamOptions {
  /// Worker threads for the column loop; 0 picks the hardware count.
  unsigned workers = 1;
  bool compute_residuals = true;
  double rank_tol = 1e-12;
};

template <Scalar T>
struct SamMap {
  SparseMatrix<T> map;
  /// ||A_k N - A_ref||_F / ||A_ref||_F; absent when residuals were not
  /// requested or the reference is zero.
  std::optional<double> rel_residual;
  std::optional<std::vector<double>> column_residuals;
  std::vector<std::size_t> degenerate_columns;
};

/// Solves the least-squares problem of a single map column. Values come
/// back in the order of plan.s(l); residual_norm covers the whole column.
template <Scalar T>
LeastSquaresSolution<T> compute_map_column(const SparseMatrix<T>& a_k,
                                           const SparseMatrix<T>& a_ref,
                                           const SamPlan& plan, std::size_t l,
                                           double rank_tol = 1e-12);

/// N = argmin over the planned pattern of ||A_k N - A_ref||_F.
///
/// Columns are independent. Each one writes into the slice of the output
/// fixed by the plan, so the result does not depend on the worker count.
/// Throws StructureError when A_k does not have the planned structure.
template <Scalar T>
SamMap<T> compute_map(const SparseMatrix<T>& a_k, const SparseMatrix<T>& a_ref,
                      const SamPlan& plan, const SamOptions& options = {});

/// ||A_k N - A_ref||_F / ||A_ref||_F through an explicit sparse product.
template <Scalar T>
double map_residual_norm(const SparseMatrix<T>& a_k, const SparseMatrix<T>& n,
                         const SparseMatrix<T>& a_ref);

/// Product of operators applied right to left: factors {N, P} acts as N*P.
template <Scalar T>
class PreconditionerChain final : public LinearOperator<T> {
 public:
  explicit PreconditionerChain(std::vector<OperatorPtr<T>> factors);

  std::size_t rows() const override { return factors_.front()->rows(); }
  std::size_t cols() const override { return factors_.back()->cols(); }
  void apply(std::span<const T> x, std::span<T> y) const override;

  const std::vector<OperatorPtr<T>>& factors() const { return factors_; }

 private:
  std::vector<OperatorPtr<T>> factors_;
};

/// The updated preconditioner N * P: P first, then multiplication by N.
template <Scalar T>
PreconditionerChain<T> compose(SparseMatrix<T> n,
                               std::type_identity_t<OperatorPtr<T>> p);

}  // namespace samkit

#endif  // SAMKIT_SAM_HPP
