// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SAMKIT_SCALAR_HPP
#define SAMKIT_SCALAR_HPP

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>

namespace samkit {

using Complex = std::complex<double>;

/// Matrix entries are either real or complex double precision. One
/// computation never mixes the two; real data is promoted explicitly.
template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Complex>;

template <class T>
inline constexpr bool is_complex_v = std::same_as<T, Complex>;

inline double conj(double v) { return v; }
inline Complex conj(const Complex& v) { return std::conj(v); }

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Complex& v) { return std::abs(v); }

inline double squared_magnitude(double v) { return v * v; }
inline double squared_magnitude(const Complex& v) { return std::norm(v); }

}  // namespace samkit

#endif  // SAMKIT_SCALAR_HPP
