// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "samkit/ilutp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

#include "samkit/error.hpp"

namespace samkit {

namespace {

constexpr double kTinyPivot = 1e-300;

template <Scalar T>
using Entry = std::pair<std::size_t, T>;

// Keeps the `keep` largest magnitudes; ties go to the smaller index.
template <Scalar T>
void keep_largest(std::vector<Entry<T>>& entries, std::size_t keep) {
  auto larger = [](const Entry<T>& a, const Entry<T>& b) {
    const double ma = magnitude(a.second);
    const double mb = magnitude(b.second);
    return ma > mb || (ma == mb && a.first < b.first);
  };
  if (entries.size() > keep) {
    std::nth_element(entries.begin(),
                     entries.begin() + static_cast<std::ptrdiff_t>(keep),
                     entries.end(), larger);
    entries.resize(keep);
  }
}

}  // namespace

void IlutpParams::validate() const {
  if (!(droptol >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "ILUTP droptol must be >= 0");
  }
  if (!(pivtol >= 0.0 && pivtol <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "ILUTP pivtol must lie in [0, 1]");
  }
}

template <Scalar T>
IlutpFactors<T> ilutp_factor(const SparseMatrix<T>& a,
                             const IlutpParams& params) {
  params.validate();
  if (a.nrows() != a.ncols()) {
    throw Error(ErrorCode::kDimensionMismatch, "ILUTP needs a square matrix");
  }
  const std::size_t n = a.nrows();
  // Row access through one transposition; column i of at is row i of a.
  const SparseMatrix<T> at = a.transpose();

  std::vector<std::size_t> perm(n);   // position -> original column
  std::vector<std::size_t> iperm(n);  // original column -> position
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::iota(iperm.begin(), iperm.end(), std::size_t{0});

  std::vector<std::vector<Entry<T>>> lrows(n);  // (position, value)
  std::vector<std::vector<Entry<T>>> urows(n);  // (original column, value)
  std::vector<T> udiag(n, T{});

  std::vector<T> w(n, T{});
  std::vector<std::size_t> stamp(n, static_cast<std::size_t>(-1));
  std::vector<std::size_t> touched;
  std::priority_queue<std::size_t, std::vector<std::size_t>,
                      std::greater<std::size_t>>
      pending;
  std::vector<Entry<T>> lpart;
  std::vector<Entry<T>> upart;

  for (std::size_t i = 0; i < n; ++i) {
    touched.clear();
    lpart.clear();
    upart.clear();
    auto cols = at.column_rows(i);
    auto vals = at.column_values(i);
    double rownorm2 = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const std::size_t p = iperm[cols[k]];
      stamp[p] = i;
      w[p] = vals[k];
      touched.push_back(p);
      if (p < i) pending.push(p);
      rownorm2 += squared_magnitude(vals[k]);
    }
    const double droplimit = params.droptol * std::sqrt(rownorm2);

    while (!pending.empty()) {
      const std::size_t k = pending.top();
      pending.pop();
      const T mult = w[k] / udiag[k];
      if (magnitude(mult) < droplimit) {
        w[k] = T{};
        continue;
      }
      lpart.emplace_back(k, mult);
      for (const auto& [col, u] : urows[k]) {
        const std::size_t p = iperm[col];
        if (stamp[p] != i) {
          stamp[p] = i;
          w[p] = T{};
          touched.push_back(p);
          if (p < i) pending.push(p);
        }
        w[p] -= mult * u;
      }
    }

    bool diag_present = false;
    for (std::size_t p : touched) {
      if (p == i) {
        diag_present = true;
      } else if (p > i && magnitude(w[p]) >= droplimit) {
        upart.emplace_back(p, w[p]);
      }
    }
    keep_largest<T>(lpart, params.lfil);
    keep_largest<T>(upart, params.lfil);
    T diag = diag_present ? w[i] : T{};

    if (params.pivtol > 0.0 && !upart.empty()) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < upart.size(); ++k) {
        const double mk = magnitude(upart[k].second);
        const double mb = magnitude(upart[best].second);
        if (mk > mb || (mk == mb && upart[k].first < upart[best].first)) best = k;
      }
      if (params.pivtol * magnitude(upart[best].second) > magnitude(diag)) {
        const std::size_t jpos = upart[best].first;
        const T new_diag = upart[best].second;
        if (diag_present) {
          upart[best].second = diag;  // old diagonal moves to position jpos
        } else {
          upart.erase(upart.begin() + static_cast<std::ptrdiff_t>(best));
        }
        diag = new_diag;
        std::swap(perm[i], perm[jpos]);
        iperm[perm[i]] = i;
        iperm[perm[jpos]] = jpos;
      }
    }
    if (!(magnitude(diag) >= kTinyPivot)) {
      throw FactorizationError(
          i, "ILUTP: zero pivot in row " + std::to_string(i));
    }
    udiag[i] = diag;
    urows[i].reserve(upart.size());
    for (const auto& [p, v] : upart) urows[i].emplace_back(perm[p], v);
    std::sort(lpart.begin(), lpart.end(),
              [](const Entry<T>& x, const Entry<T>& y) { return x.first < y.first; });
    lrows[i] = lpart;
    for (std::size_t p : touched) w[p] = T{};
  }

  TripletBuffer<T> lt(n, n);
  TripletBuffer<T> ut(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [p, v] : lrows[i]) lt.add(i, p, v);
    ut.add(i, i, udiag[i]);
    for (const auto& [col, v] : urows[i]) ut.add(i, iperm[col], v);
  }
  IlutpFactors<T> out;
  out.lower = SparseMatrix<T>::from_triplets(lt);
  out.upper = SparseMatrix<T>::from_triplets(ut);
  out.colperm = std::move(perm);
  out.params = params;
  return out;
}

template <Scalar T>
void ilutp_apply_solve(const IlutpFactors<T>& f, std::span<const T> v,
                       std::span<T> out) {
  const std::size_t n = f.size();
  if (v.size() != n || out.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "ILUTP solve with vector of wrong length");
  }
  std::vector<T> y(v.begin(), v.end());
  for (std::size_t j = 0; j < n; ++j) {
    const T yj = y[j];
    if (yj == T{}) continue;
    auto rows = f.lower.column_rows(j);
    auto vals = f.lower.column_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) y[rows[k]] -= vals[k] * yj;
  }
  for (std::size_t j = n; j-- > 0;) {
    auto rows = f.upper.column_rows(j);
    auto vals = f.upper.column_values(j);
    const std::size_t last = rows.size() - 1;  // diagonal
    const T zj = y[j] / vals[last];
    y[j] = zj;
    for (std::size_t k = 0; k < last; ++k) y[rows[k]] -= vals[k] * zj;
  }
  for (std::size_t k = 0; k < n; ++k) out[f.colperm[k]] = y[k];
}

template <Scalar T>
std::vector<T> ilutp_apply_solve(const IlutpFactors<T>& f,
                                 std::span<const T> v) {
  std::vector<T> out(f.size());
  ilutp_apply_solve<T>(f, v, out);
  return out;
}

#define SAMKIT_INSTANTIATE(T)                                                  \
  template IlutpFactors<T> ilutp_factor<T>(const SparseMatrix<T>&,             \
                                           const IlutpParams&);                \
  template void ilutp_apply_solve<T>(const IlutpFactors<T>&,                   \
                                     std::span<const T>, std::span<T>);        \
  template std::vector<T> ilutp_apply_solve<T>(const IlutpFactors<T>&,         \
                                               std::span<const T>);

SAMKIT_INSTANTIATE(double)
SAMKIT_INSTANTIATE(Complex)

#undef SAMKIT_INSTANTIATE

}  // namespace samkit
