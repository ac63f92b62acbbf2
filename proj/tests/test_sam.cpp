// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <set>
#include <vector>

#include "samkit/error.hpp"
#include "samkit/ilutp.hpp"
#include "samkit/problems.hpp"
#include "samkit/sam.hpp"
#include "support.hpp"

using namespace samkit;
using namespace samkit::testing;

namespace {

template <class T>
SparseMatrix<T> dense2(T a00, T a01, T a10, T a11) {
  DenseMat<T> d(2, 2);
  d << a00, a01, a10, a11;
  return from_dense(d);
}

template <class T>
SamMap<T> map_for(const SparsityPattern& s, const SparseMatrix<T>& a_k,
                  const SparseMatrix<T>& a_ref, unsigned workers = 1) {
  SamOptions opts;
  opts.workers = workers;
  return compute_map(a_k, a_ref, plan(s, a_k, a_ref), opts);
}

/// Column-by-column minimum-norm solution over the pattern, computed on the
/// full dense columns with an SVD.
template <class T>
DenseMat<T> oracle_map(const SparsityPattern& s, const SparseMatrix<T>& a_k,
                       const SparseMatrix<T>& a_ref) {
  const DenseMat<T> ak = to_dense(a_k);
  const DenseMat<T> ar = to_dense(a_ref);
  DenseMat<T> n = DenseMat<T>::Zero(a_k.ncols(), a_ref.ncols());
  for (std::size_t l = 0; l < s.ncols(); ++l) {
    auto cols = s.column(l);
    DenseMat<T> block(ak.rows(), cols.size());
    for (std::size_t q = 0; q < cols.size(); ++q) block.col(q) = ak.col(cols[q]);
    DenseVec<T> x = min_norm_lstsq<T>(block, ar.col(l));
    for (std::size_t q = 0; q < cols.size(); ++q) n(cols[q], l) = x(q);
  }
  return n;
}

}  // namespace

TEST_CASE("plan index sets") {
  Rng rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_sparse<double>(rng, 25, 25, 3);
    auto ref = random_sparse<double>(rng, 25, 25, 2);
    auto s = random_pattern(rng, 25, 4);
    for (bool rhs : {true, false}) {
      auto p = plan(s, a, ref, rhs);
      std::size_t max_s = 0, max_r = 0;
      for (std::size_t l = 0; l < 25; ++l) {
        auto sl = p.s(l);
        CHECK(std::vector<std::size_t>(sl.begin(), sl.end()) ==
              std::vector<std::size_t>(s.column(l).begin(), s.column(l).end()));
        std::set<std::size_t> expect;
        for (auto j : sl) {
          for (auto i : a.column_rows(j)) expect.insert(i);
        }
        if (rhs) {
          for (auto i : ref.column_rows(l)) expect.insert(i);
        }
        auto rl = p.r(l);
        CHECK(std::vector<std::size_t>(rl.begin(), rl.end()) ==
              std::vector<std::size_t>(expect.begin(), expect.end()));
        max_s = std::max(max_s, sl.size());
        max_r = std::max(max_r, rl.size());
      }
      CHECK(p.max_s == max_s);
      CHECK(p.max_r == max_r);
    }
  }
}

TEST_CASE_TEMPLATE("identity map when the system equals the reference", T,
                   double, Complex) {
  Rng rng(103);
  auto a = random_well_conditioned<T>(rng, 30, 4);
  auto m = map_for(pattern_of(a), a, a);
  CHECK(frobenius_norm_diff(m.map, SparseMatrix<T>::identity(30)) <= 1e-12);
  REQUIRE(m.rel_residual.has_value());
  CHECK(*m.rel_residual <= 1e-12);
}

TEST_CASE("diagonal scaling map") {
  std::vector<double> dk = {2.0, 4.0};
  std::vector<double> dr = {1.0, 2.0};
  auto m = map_for(diagonal_pattern(2), SparseMatrix<double>::diagonal(dk),
                   SparseMatrix<double>::diagonal(dr));
  CHECK(m.map.coeff(0, 0) == doctest::Approx(0.5));
  CHECK(m.map.coeff(1, 1) == doctest::Approx(0.5));
  CHECK(*m.rel_residual == doctest::Approx(0.0));
}

TEST_CASE("upper-triangular system against the identity") {
  // Column 2: min |(1, 1) n - (0, 1)| gives n = 1/2 and residual (1/2, -1/2).
  auto a = dense2(2.0, 1.0, 0.0, 1.0);
  auto id = SparseMatrix<double>::identity(2);
  auto m = map_for(diagonal_pattern(2), a, id);
  CHECK(m.map.coeff(0, 0) == doctest::Approx(0.5));
  CHECK(m.map.coeff(1, 1) == doctest::Approx(0.5));
  CHECK(m.map.nnz() == 2);
  REQUIRE(m.column_residuals.has_value());
  CHECK((*m.column_residuals)[0] == doctest::Approx(0.0));
  CHECK((*m.column_residuals)[1] == doctest::Approx(std::sqrt(0.5)));
  CHECK(*m.rel_residual == doctest::Approx(0.5));
  CHECK(map_residual_norm(a, m.map, id) == doctest::Approx(0.5));
}

TEST_CASE("map_residual_norm") {
  std::vector<double> d = {2.0, 4.0};
  auto a = SparseMatrix<double>::diagonal(d);
  std::vector<double> inv = {0.5, 0.25};
  auto id = SparseMatrix<double>::identity(2);
  CHECK(map_residual_norm(a, SparseMatrix<double>::diagonal(inv), id) == 0.0);
  CHECK(map_residual_norm(a, SparseMatrix<double>(2, 2), id) == 1.0);
  CHECK_THROWS_AS(map_residual_norm(a, id, SparseMatrix<double>(2, 2)), Error);
  CHECK_THROWS_AS(map_residual_norm(a, SparseMatrix<double>(3, 3), id), Error);
}

TEST_CASE("zero reference leaves the relative residual undefined") {
  auto a = SparseMatrix<double>::identity(3);
  auto m = map_for(diagonal_pattern(3), a, SparseMatrix<double>(3, 3));
  CHECK_FALSE(m.rel_residual.has_value());
  CHECK(frobenius_norm(m.map) == 0.0);
}

TEST_CASE("empty pattern columns give zero map columns and are recorded") {
  std::vector<std::pair<std::size_t, std::size_t>> e = {{0, 0}, {2, 2}};
  auto s = SparsityPattern::from_entries(3, 3, e);
  auto small = SparseMatrix<double>::identity(3);
  auto m = map_for(s, small, small);
  CHECK(m.degenerate_columns == std::vector<std::size_t>{1});
  CHECK(m.map.column_rows(1).empty());
  CHECK(m.map.coeff(0, 0) == doctest::Approx(1.0));
  // Column 1 of the reference is entirely unexplained.
  CHECK(*m.rel_residual == doctest::Approx(std::sqrt(1.0 / 3.0)));
}

TEST_CASE("structure mismatch names the first offending column") {
  auto a = laplace2d_dirichlet(3, 3).matrix;
  auto p = plan(pattern_of(a), a);
  TripletBuffer<double> t = a.to_triplets();
  t.add(7, 3, 1.0);  // new position in column 3
  t.add(8, 5, 1.0);  // and in column 5
  auto changed = SparseMatrix<double>::from_triplets(t);
  try {
    compute_map(changed, a, p);
    FAIL("expected StructureError");
  } catch (const StructureError& e) {
    CHECK(e.column() == 3);
    CHECK(std::string(e.what()).find("column 3") != std::string::npos);
  }
  CHECK_THROWS_AS(compute_map(SparseMatrix<double>::identity(4), a, p), Error);
}

TEST_CASE_TEMPLATE("maps match the dense minimum-norm oracle", T, double,
                   Complex) {
  Rng rng(107);
  for (int trial = 0; trial < 5; ++trial) {
    auto a_k = random_sparse<T>(rng, 40, 40, 5);
    auto a_ref = random_sparse<T>(rng, 40, 40, 5);
    auto s = random_pattern(rng, 40, 5);
    auto m = map_for(s, a_k, a_ref);
    DenseMat<T> oracle = oracle_map(s, a_k, a_ref);
    DenseMat<T> got = to_dense(m.map);
    for (Eigen::Index l = 0; l < 40; ++l) {
      const double scale = std::max(1.0, double(oracle.col(l).norm()));
      CHECK((got.col(l) - oracle.col(l)).norm() <= 1e-10 * scale);
    }
    CHECK(is_subset(pattern_of(m.map), s));
    const double exact = map_residual_norm(a_k, m.map, a_ref);
    CHECK(*m.rel_residual == doctest::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE_TEMPLATE("LS residuals satisfy the normal equations", T, double,
                   Complex) {
  Rng rng(109);
  for (int trial = 0; trial < 5; ++trial) {
    auto a_k = random_sparse<T>(rng, 30, 30, 4);
    auto a_ref = random_sparse<T>(rng, 30, 30, 4);
    auto s = random_pattern(rng, 30, 4);
    auto p = plan(s, a_k, a_ref);
    auto m = compute_map(a_k, a_ref, p);
    for (std::size_t l = 0; l < 30; ++l) {
      auto rl = p.r(l);
      auto sl = p.s(l);
      if (sl.empty()) continue;
      auto block = extract_dense_submatrix(a_k, rl, sl);
      std::vector<std::size_t> col = {l};
      auto rhs = extract_dense_submatrix(a_ref, rl, col);
      DenseMat<T> b(rl.size(), sl.size());
      DenseVec<T> f(rl.size()), n(sl.size());
      for (std::size_t j = 0; j < sl.size(); ++j) {
        for (std::size_t i = 0; i < rl.size(); ++i) b(i, j) = block(i, j);
        n(j) = m.map.coeff(sl[j], l);
      }
      for (std::size_t i = 0; i < rl.size(); ++i) f(i) = rhs(i, 0);
      DenseVec<T> r = b * n - f;
      CHECK((b.adjoint() * r).norm() <= 1e-10 * b.norm() * std::max(f.norm(), 1e-300));
    }
  }
}

TEST_CASE_TEMPLATE("larger patterns never raise the residual", T, double,
                   Complex) {
  Rng rng(113);
  for (int trial = 0; trial < 10; ++trial) {
    auto a_k = random_sparse<T>(rng, 30, 30, 4);
    auto a_ref = random_sparse<T>(rng, 30, 30, 4);
    auto s1 = random_pattern(rng, 30, 2);
    auto s2 = pattern_union(s1, random_pattern(rng, 30, 3));
    const double r1 = map_residual_norm(a_k, map_for(s1, a_k, a_ref).map, a_ref);
    const double r2 = map_residual_norm(a_k, map_for(s2, a_k, a_ref).map, a_ref);
    CHECK(r2 <= r1 + 1e-12);
  }
}

TEST_CASE_TEMPLATE("single columns are bit-identical to the full computation",
                   T, double, Complex) {
  Rng rng(127);
  auto a_k = random_sparse<T>(rng, 35, 35, 4);
  auto a_ref = random_sparse<T>(rng, 35, 35, 4);
  auto s = random_pattern(rng, 35, 5);
  auto p = plan(s, a_k, a_ref);
  auto m = compute_map(a_k, a_ref, p);
  for (std::size_t l = 0; l < 35; ++l) {
    auto col = compute_map_column(a_k, a_ref, p, l);
    auto sl = p.s(l);
    REQUIRE(col.x.size() == sl.size());
    for (std::size_t q = 0; q < sl.size(); ++q) {
      CHECK(col.x[q] == m.map.coeff(sl[q], l));
    }
    CHECK(col.residual_norm == (*m.column_residuals)[l]);
  }
}

TEST_CASE_TEMPLATE("worker count does not change the map", T, double, Complex) {
  Rng rng(131);
  auto a_k = random_sparse<T>(rng, 60, 60, 5);
  auto a_ref = random_sparse<T>(rng, 60, 60, 5);
  auto s = random_pattern(rng, 60, 6);
  auto one = map_for(s, a_k, a_ref, 1);
  for (unsigned w : {2u, 3u, 7u, 0u}) {
    auto many = map_for(s, a_k, a_ref, w);
    CHECK(one.map.same_structure(many.map));
    CHECK(std::equal(one.map.values().begin(), one.map.values().end(),
                     many.map.values().begin()));
    CHECK(*one.rel_residual == *many.rel_residual);
  }
}

TEST_CASE("residual stays exact without reference rows in the plan") {
  Rng rng(137);
  auto a_k = random_sparse<double>(rng, 30, 30, 3);
  auto a_ref = random_sparse<double>(rng, 30, 30, 4);
  auto s = random_pattern(rng, 30, 2);
  auto with = compute_map(a_k, a_ref, plan(s, a_k, a_ref, true));
  auto without = compute_map(a_k, a_ref, plan(s, a_k, a_ref, false));
  CHECK(frobenius_norm_diff(with.map, without.map) <= 1e-13);
  const double exact = map_residual_norm(a_k, with.map, a_ref);
  CHECK(*with.rel_residual == doctest::Approx(exact).epsilon(1e-12));
  CHECK(*without.rel_residual == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("one plan serves a shifted sequence") {
  auto k0 = laplace2d_dirichlet(6, 6).matrix;
  auto seq = helmholtz_sequence(k0, 0.1, 5);
  auto p = plan(pattern_of(k0), seq[0], k0);
  for (const auto& k : seq) {
    auto m = compute_map(k, k0, p);
    CHECK(*m.rel_residual == doctest::Approx(map_residual_norm(k, m.map, k0))
                                  .epsilon(1e-12));
  }
}

TEST_CASE_TEMPLATE("compose", T, double, Complex) {
  Rng rng(139);
  const std::size_t n = 12;
  auto pm = random_well_conditioned<T>(rng, n, 3);
  auto nm = random_sparse<T>(rng, n, n, 3);
  auto v = random_vector<T>(rng, n);
  auto p_op = std::make_shared<MatrixOperator<T>>(pm);

  auto chain_id = compose(SparseMatrix<T>::identity(n), p_op);
  std::vector<T> y(n), z(n);
  chain_id.apply(v, y);
  p_op->apply(v, z);
  CHECK(y == z);

  auto chain_n = compose(nm, std::make_shared<IdentityOperator<T>>(n));
  chain_n.apply(v, y);
  CHECK(y == matvec<T>(nm, v));

  auto chain = compose(nm, p_op);
  chain.apply(v, y);
  DenseVec<T> expect = (to_dense(nm) * to_dense(pm)) * to_eigen(v);
  CHECK((to_eigen(y) - expect).norm() <= 1e-13 * std::max(1.0, double(expect.norm())));

  // Chains are operators themselves.
  auto inner = std::make_shared<PreconditionerChain<T>>(compose(nm, p_op));
  auto outer = compose(nm, inner);
  outer.apply(v, y);
  DenseVec<T> expect2 =
      (to_dense(nm) * to_dense(nm) * to_dense(pm)) * to_eigen(v);
  CHECK((to_eigen(y) - expect2).norm() <=
        1e-12 * std::max(1.0, double(expect2.norm())));

  CHECK_THROWS_AS(compose(SparseMatrix<T>::identity(n + 1), p_op), Error);
}

TEST_CASE("composition with ILUTP factors") {
  auto k0 = laplace2d_dirichlet(5, 5).matrix;
  auto f = std::make_shared<IlutpOperator<double>>(
      ilutp_factor(k0, IlutpParams{25, 0.0, 1.0}));
  auto chain = compose(SparseMatrix<double>::identity(25), f);
  auto b = laplace2d_dirichlet(5, 5).rhs;
  std::vector<double> x(25);
  chain.apply(b, x);
  auto back = matvec<double>(k0, x);
  for (int i = 0; i < 25; ++i) CHECK(back[i] == doctest::Approx(b[i]));
}
