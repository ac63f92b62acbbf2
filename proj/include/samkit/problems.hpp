// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SAMKIT_PROBLEMS_HPP
#define SAMKIT_PROBLEMS_HPP

#include <cstddef>
#include <filesystem>
#include <functional>
#include <variant>
#include <vector>

#include "samkit/sparse.hpp"

namespace samkit {

struct LaplaceProblem {
  SparseMatrix<double> matrix;
  std::vector<double> rhs;
};

/// Vertex-centered 5-point Laplacian on the nx-by-ny interior grid of the
/// unit square, unscaled (4 on the diagonal, -1 off it). Unknown (ix, iy)
/// has index iy * nx + ix. The right-hand side carries u = 1 on the south
/// (y = 0) and west (x = 0) edges and u = 0 on the north and east edges.
LaplaceProblem laplace2d_dirichlet(std::size_t nx, std::size_t ny);

/// K_i = K0 - s_i I for i = 1..count with s_i = i * delta_s.
std::vector<SparseMatrix<double>> helmholtz_sequence(
    const SparseMatrix<double>& k0, double delta_s, std::size_t count);

/// Shifted identity K0 - s I with the diagonal always present.
SparseMatrix<double> shift_diagonal(const SparseMatrix<double>& k0, double s);

using ConductivityField = std::function<double(double x, double y)>;

struct FemPairOptions {
  double length_x = 1.0;
  double length_y = 1.0;
  /// Multiplier of the lumped mass (a storage coefficient).
  double storage = 1.0;
};

struct FemPair {
  SparseMatrix<double> stiffness;
  SparseMatrix<double> mass;
};

/// Stiffness and lumped mass for -div(kappa grad u) on a rectangle with
/// homogeneous Dirichlet boundary. Interior nodes are ordered as in
/// laplace2d_dirichlet; edge conductivities are harmonic means of the
/// sampled node values. With kappa = 1 on a square grid the stiffness is
/// the unscaled 5-point Laplacian and the mass is h^2 I.
FemPair fem_pair_2d(std::size_t nx, std::size_t ny,
                    const ConductivityField& kappa,
                    const FemPairOptions& options = {});

/// Unit-norm point source at the grid center.
std::vector<double> point_source_rhs(std::size_t nx, std::size_t ny);

/// Constants of the modified Talbot contour
/// z(theta) = (N/t) (-sigma + mu theta cot(alpha theta) + nu i theta).
/// Defaults are the optimized values published by Weideman and Trefethen
/// for parabolic problems; they are inputs, not derived here.
struct TalbotConstants {
  double sigma = 0.6122;
  double mu = 0.5017;
  double alpha = 0.6407;
  double nu = 0.2645;
};

/// The n_z / 2 upper-half contour nodes at midpoint angles
/// theta_k = (k + 1/2) 2 pi / n_z. The lower half are their conjugates.
std::vector<Complex> talbot_shifts(std::size_t n_z, double t,
                                   const TalbotConstants& constants = {});

using AnyMatrix = std::variant<SparseMatrix<double>, SparseMatrix<Complex>>;

/// Reads a coordinate Matrix Market file (real, integer or complex;
/// general or symmetric, the latter expanded on read).
AnyMatrix read_matrix_market_any(const std::filesystem::path& path);

/// As above, promoting real data when T is complex. Reading a complex file
/// as real is an error.
template <Scalar T>
SparseMatrix<T> read_matrix_market(const std::filesystem::path& path);

/// Writes a general coordinate file with 17 significant digits.
template <Scalar T>
void write_matrix_market(const SparseMatrix<T>& a,
                         const std::filesystem::path& path);

/// A vector stored as an n x 1 coordinate matrix.
template <Scalar T>
std::vector<T> read_vector_market(const std::filesystem::path& path);
template <Scalar T>
void write_vector_market(std::span<const T> v,
                         const std::filesystem::path& path);

}  // namespace samkit

#endif  // SAMKIT_PROBLEMS_HPP
