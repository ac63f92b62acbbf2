// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "samkit/problems.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "samkit/error.hpp"

namespace samkit {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

void require_grid(std::size_t nx, std::size_t ny) {
  if (nx < 2 || ny < 2) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs nx, ny >= 2");
  }
}

struct MarketHeader {
  bool complex = false;
  bool symmetric = false;
};

}  // namespace

LaplaceProblem laplace2d_dirichlet(std::size_t nx, std::size_t ny) {
  require_grid(nx, ny);
  const std::size_t n = nx * ny;
  TripletBuffer<double> t(n, n);
  t.reserve(5 * n);
  std::vector<double> rhs(n, 0.0);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t k = iy * nx + ix;
      t.add(k, k, 4.0);
      if (ix > 0) {
        t.add(k, k - 1, -1.0);
      } else {
        rhs[k] += 1.0;  // west boundary, u = 1
      }
      if (ix + 1 < nx) t.add(k, k + 1, -1.0);  // east boundary contributes 0
      if (iy > 0) {
        t.add(k, k - nx, -1.0);
      } else {
        rhs[k] += 1.0;  // south boundary, u = 1
      }
      if (iy + 1 < ny) t.add(k, k + nx, -1.0);  // north boundary contributes 0
    }
  }
  return {SparseMatrix<double>::from_triplets(t), std::move(rhs)};
}

SparseMatrix<double> shift_diagonal(const SparseMatrix<double>& k0, double s) {
  const auto eye = SparseMatrix<double>::identity(k0.nrows());
  return shifted_combine(-s, eye, k0);
}

std::vector<SparseMatrix<double>> helmholtz_sequence(
    const SparseMatrix<double>& k0, double delta_s, std::size_t count) {
  if (k0.nrows() != k0.ncols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "helmholtz_sequence needs a square matrix");
  }
  std::vector<SparseMatrix<double>> out;
  out.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    out.push_back(shift_diagonal(k0, static_cast<double>(i) * delta_s));
  }
  return out;
}

FemPair fem_pair_2d(std::size_t nx, std::size_t ny,
                    const ConductivityField& kappa,
                    const FemPairOptions& options) {
  require_grid(nx, ny);
  if (!(options.length_x > 0.0 && options.length_y > 0.0 &&
        options.storage > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "fem_pair_2d needs positive lengths and storage");
  }
  const double hx = options.length_x / static_cast<double>(nx + 1);
  const double hy = options.length_y / static_cast<double>(ny + 1);
  auto sample = [&](long ix, long iy) {
    // Grid index -1 and nx (ny) are the boundary lines.
    const double v = kappa(static_cast<double>(ix + 1) * hx,
                           static_cast<double>(iy + 1) * hy);
    if (!(v > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "conductivity must be positive, got " + std::to_string(v));
    }
    return v;
  };
  const std::size_t n = nx * ny;
  std::vector<double> node(n);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      node[iy * nx + ix] = sample(static_cast<long>(ix), static_cast<long>(iy));
    }
  }
  auto harmonic = [](double a, double b) { return 2.0 * a * b / (a + b); };

  TripletBuffer<double> t(n, n);
  t.reserve(5 * n);
  const double wx = hy / hx;
  const double wy = hx / hy;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t k = iy * nx + ix;
      const long lx = static_cast<long>(ix);
      const long ly = static_cast<long>(iy);
      double diag = 0.0;
      auto edge = [&](bool interior, std::size_t nb, long bx, long by,
                      double weight) {
        const double other = interior ? node[nb] : sample(bx, by);
        const double c = weight * harmonic(node[k], other);
        diag += c;
        if (interior) t.add(k, nb, -c);
      };
      edge(ix > 0, k - 1, lx - 1, ly, wx);
      edge(ix + 1 < nx, k + 1, lx + 1, ly, wx);
      edge(iy > 0, k - nx, lx, ly - 1, wy);
      edge(iy + 1 < ny, k + nx, lx, ly + 1, wy);
      t.add(k, k, diag);
    }
  }
  std::vector<double> mass(n, options.storage * hx * hy);
  return {SparseMatrix<double>::from_triplets(t),
          SparseMatrix<double>::diagonal(mass)};
}

std::vector<double> point_source_rhs(std::size_t nx, std::size_t ny) {
  require_grid(nx, ny);
  std::vector<double> b(nx * ny, 0.0);
  b[(ny / 2) * nx + nx / 2] = 1.0;
  return b;
}

std::vector<Complex> talbot_shifts(std::size_t n_z, double t,
                                   const TalbotConstants& c) {
  if (n_z == 0 || n_z % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "talbot_shifts needs a positive even node count");
  }
  if (!(t > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "talbot_shifts needs t > 0");
  }
  const double scale = static_cast<double>(n_z) / t;
  const std::size_t half = n_z / 2;
  std::vector<Complex> out;
  out.reserve(half);
  for (std::size_t k = 0; k < half; ++k) {
    const double theta = (static_cast<double>(k) + 0.5) * 2.0 *
                         std::numbers::pi / static_cast<double>(n_z);
    const double re =
        -c.sigma + c.mu * theta * std::cos(c.alpha * theta) /
                       std::sin(c.alpha * theta);
    out.emplace_back(scale * re, scale * c.nu * theta);
  }
  return out;
}

AnyMatrix read_matrix_market_any(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open Matrix Market file " + path.string());
  }
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::kParse,
                 path.string() + ":" + std::to_string(lineno) + ": " + why);
  };
  std::string line;
  if (!std::getline(in, line)) throw fail("empty file");
  ++lineno;
  MarketHeader header;
  {
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") throw fail("missing %%MatrixMarket banner");
    object = lower(object);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (object != "matrix") throw fail("unsupported object '" + object + "'");
    if (format != "coordinate") {
      throw fail("unsupported format '" + format + "', only coordinate");
    }
    if (field == "complex") {
      header.complex = true;
    } else if (field != "real" && field != "integer") {
      throw fail("unsupported field '" + field + "'");
    }
    if (symmetry == "symmetric") {
      header.symmetric = true;
    } else if (symmetry != "general") {
      throw fail("unsupported symmetry '" + symmetry + "'");
    }
  }
  auto next_data_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '%') continue;
      return true;
    }
    return false;
  };
  if (!next_data_line()) throw fail("missing size line");
  std::size_t nrows = 0;
  std::size_t ncols = 0;
  std::size_t nnz = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> nrows >> ncols >> nnz)) throw fail("malformed size line");
  }
  if (header.symmetric && nrows != ncols) {
    throw fail("symmetric matrix must be square");
  }
  TripletBuffer<Complex> t(nrows, ncols);
  t.reserve(header.symmetric ? 2 * nnz : nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!next_data_line()) {
      throw fail("expected " + std::to_string(nnz) + " entries, found " +
                 std::to_string(k));
    }
    std::istringstream es(line);
    long i = 0;
    long j = 0;
    double re = 0.0;
    double im = 0.0;
    if (!(es >> i >> j >> re)) throw fail("malformed entry");
    if (header.complex && !(es >> im)) throw fail("missing imaginary part");
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > nrows ||
        static_cast<std::size_t>(j) > ncols) {
      throw fail("index (" + std::to_string(i) + ", " + std::to_string(j) +
                 ") outside declared bounds");
    }
    const auto r = static_cast<std::size_t>(i - 1);
    const auto c = static_cast<std::size_t>(j - 1);
    t.add(r, c, Complex(re, im));
    if (header.symmetric && r != c) t.add(c, r, Complex(re, im));
  }
  if (header.complex) return SparseMatrix<Complex>::from_triplets(t);
  TripletBuffer<double> rt(nrows, ncols);
  rt.rows = std::move(t.rows);
  rt.cols = std::move(t.cols);
  rt.values.reserve(t.values.size());
  for (const Complex& v : t.values) rt.values.push_back(v.real());
  return SparseMatrix<double>::from_triplets(rt);
}

template <Scalar T>
SparseMatrix<T> read_matrix_market(const std::filesystem::path& path) {
  AnyMatrix any = read_matrix_market_any(path);
  if (auto* real = std::get_if<SparseMatrix<double>>(&any)) {
    if constexpr (is_complex_v<T>) {
      return promote(*real);
    } else {
      return std::move(*real);
    }
  }
  if constexpr (is_complex_v<T>) {
    return std::move(std::get<SparseMatrix<Complex>>(any));
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                path.string() + " holds a complex matrix, real was requested");
  }
}

template <Scalar T>
void write_matrix_market(const SparseMatrix<T>& a,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write Matrix Market file " + path.string());
  }
  out << "%%MatrixMarket matrix coordinate "
      << (is_complex_v<T> ? "complex" : "real") << " general\n";
  out << a.nrows() << ' ' << a.ncols() << ' ' << a.nnz() << '\n';
  out.precision(17);
  for (std::size_t j = 0; j < a.ncols(); ++j) {
    auto rows = a.column_rows(j);
    auto vals = a.column_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      out << rows[k] + 1 << ' ' << j + 1 << ' ';
      if constexpr (is_complex_v<T>) {
        out << vals[k].real() << ' ' << vals[k].imag() << '\n';
      } else {
        out << vals[k] << '\n';
      }
    }
  }
  if (!out) {
    throw Error(ErrorCode::kIo, "failed writing " + path.string());
  }
}

template <Scalar T>
std::vector<T> read_vector_market(const std::filesystem::path& path) {
  const SparseMatrix<T> m = read_matrix_market<T>(path);
  if (m.ncols() != 1) {
    throw Error(ErrorCode::kParse, path.string() + " is not a single column");
  }
  std::vector<T> v(m.nrows(), T{});
  auto rows = m.column_rows(0);
  auto vals = m.column_values(0);
  for (std::size_t k = 0; k < rows.size(); ++k) v[rows[k]] = vals[k];
  return v;
}

template <Scalar T>
void write_vector_market(std::span<const T> v,
                         const std::filesystem::path& path) {
  TripletBuffer<T> t(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) t.add(i, 0, v[i]);
  write_matrix_market(SparseMatrix<T>::from_triplets(t), path);
}

#define SAMKIT_INSTANTIATE(T)                                                  \
  template SparseMatrix<T> read_matrix_market<T>(const std::filesystem::path&); \
  template void write_matrix_market<T>(const SparseMatrix<T>&,                 \
                                       const std::filesystem::path&);          \
  template std::vector<T> read_vector_market<T>(const std::filesystem::path&); \
  template void write_vector_market<T>(std::span<const T>,                     \
                                       const std::filesystem::path&);

SAMKIT_INSTANTIATE(double)
SAMKIT_INSTANTIATE(Complex)

#undef SAMKIT_INSTANTIATE

}  // namespace samkit
