// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "samkit/samkit.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <new>
#include <string>
#include <variant>
#include <vector>

#include "samkit/error.hpp"
#include "samkit/harness.hpp"
#include "samkit/ilutp.hpp"
#include "samkit/krylov.hpp"
#include "samkit/pattern.hpp"
#include "samkit/problems.hpp"
#include "samkit/sam.hpp"
#include "samkit/sparse.hpp"

struct samkit_matrix {
  samkit::AnyMatrix value;
};

struct samkit_pattern {
  samkit::SparsityPattern value;
};

struct samkit_map {
  std::variant<samkit::SamMap<double>, samkit::SamMap<samkit::Complex>> value;
};

struct samkit_ilutp {
  std::variant<std::shared_ptr<const samkit::IlutpFactors<double>>,
               std::shared_ptr<const samkit::IlutpFactors<samkit::Complex>>>
      value;
};

namespace {

using samkit::Complex;
using samkit::SparseMatrix;

thread_local std::string g_last_error;

samkit_status to_status(samkit::ErrorCode code) {
  switch (code) {
    case samkit::ErrorCode::kInvalidArgument:
      return SAMKIT_ERR_INVALID_ARGUMENT;
    case samkit::ErrorCode::kDimensionMismatch:
      return SAMKIT_ERR_DIMENSION;
    case samkit::ErrorCode::kIndexOutOfRange:
      return SAMKIT_ERR_INDEX;
    case samkit::ErrorCode::kStructureMismatch:
      return SAMKIT_ERR_STRUCTURE;
    case samkit::ErrorCode::kFactorizationFailure:
      return SAMKIT_ERR_FACTORIZATION;
    case samkit::ErrorCode::kIo:
      return SAMKIT_ERR_IO;
    case samkit::ErrorCode::kParse:
      return SAMKIT_ERR_PARSE;
    case samkit::ErrorCode::kConfig:
      return SAMKIT_ERR_CONFIG;
  }
  return SAMKIT_ERR_INTERNAL;
}

samkit_status fail(samkit_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs body and converts any exception into a status. No exception crosses
// the C boundary.
template <class F>
samkit_status guarded(F&& body) noexcept {
  try {
    body();
    return SAMKIT_OK;
  } catch (const samkit::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SAMKIT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SAMKIT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SAMKIT_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw samkit::Error(samkit::ErrorCode::kInvalidArgument, what);
}

bool is_complex(const samkit_matrix* a) {
  return std::holds_alternative<SparseMatrix<Complex>>(a->value);
}

SparseMatrix<Complex> as_complex(const samkit_matrix* a) {
  if (is_complex(a)) return std::get<SparseMatrix<Complex>>(a->value);
  return samkit::promote(std::get<SparseMatrix<double>>(a->value));
}

template <class T>
std::span<const T> in_span(const double* p, std::size_t n) {
  if constexpr (std::is_same_v<T, double>) {
    return {p, n};
  } else {
    return {reinterpret_cast<const Complex*>(p), n};
  }
}

template <class T>
std::span<T> out_span(double* p, std::size_t n) {
  if constexpr (std::is_same_v<T, double>) {
    return {p, n};
  } else {
    return {reinterpret_cast<Complex*>(p), n};
  }
}

// Real factors applied to a complex vector, one part at a time. Exact,
// since the factor solve is real-linear.
class RealFactorsOnComplex final : public samkit::LinearOperator<Complex> {
 public:
  explicit RealFactorsOnComplex(
      std::shared_ptr<const samkit::IlutpFactors<double>> f)
      : op_(std::move(f)) {}
  std::size_t rows() const override { return op_.rows(); }
  std::size_t cols() const override { return op_.cols(); }
  void apply(std::span<const Complex> x, std::span<Complex> y) const override {
    const std::size_t n = x.size();
    std::vector<double> re(n), im(n), out_re(n), out_im(n);
    for (std::size_t i = 0; i < n; ++i) {
      re[i] = x[i].real();
      im[i] = x[i].imag();
    }
    op_.apply(re, out_re);
    op_.apply(im, out_im);
    for (std::size_t i = 0; i < n; ++i) y[i] = Complex(out_re[i], out_im[i]);
  }

 private:
  samkit::IlutpOperator<double> op_;
};

}  // namespace

extern "C" {

const char* samkit_version(void) { return "0.1.0"; }

const char* samkit_last_error(void) { return g_last_error.c_str(); }

const char* samkit_status_name(samkit_status status) {
  switch (status) {
    case SAMKIT_OK: return "ok";
    case SAMKIT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SAMKIT_ERR_DIMENSION: return "dimension mismatch";
    case SAMKIT_ERR_INDEX: return "index out of range";
    case SAMKIT_ERR_STRUCTURE: return "structure mismatch";
    case SAMKIT_ERR_FACTORIZATION: return "factorization failure";
    case SAMKIT_ERR_IO: return "i/o error";
    case SAMKIT_ERR_PARSE: return "parse error";
    case SAMKIT_ERR_CONFIG: return "config error";
    case SAMKIT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

samkit_status samkit_matrix_from_triplets(size_t nrows, size_t ncols,
                                          size_t nnz, const size_t* rows,
                                          const size_t* cols,
                                          const double* values,
                                          samkit_field field,
                                          samkit_matrix** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(nnz == 0 || (rows && cols && values), "triplet arrays are null");
    auto build = [&]<class T>(std::type_identity<T>) {
      samkit::TripletBuffer<T> t(nrows, ncols);
      t.reserve(nnz);
      auto v = in_span<T>(values, nnz);
      for (std::size_t k = 0; k < nnz; ++k) t.add(rows[k], cols[k], v[k]);
      return SparseMatrix<T>::from_triplets(t);
    };
    auto m = std::make_unique<samkit_matrix>();
    if (field == SAMKIT_COMPLEX) {
      m->value = build(std::type_identity<Complex>{});
    } else {
      require(field == SAMKIT_REAL, "unknown scalar field");
      m->value = build(std::type_identity<double>{});
    }
    *out = m.release();
  });
}

samkit_status samkit_matrix_read_mm(const char* path, samkit_matrix** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new samkit_matrix{samkit::read_matrix_market_any(path)};
  });
}

samkit_status samkit_matrix_write_mm(const samkit_matrix* a, const char* path) {
  return guarded([&] {
    require(a && path, "null argument");
    std::visit([&](const auto& m) { samkit::write_matrix_market(m, path); },
               a->value);
  });
}

samkit_status samkit_matrix_info(const samkit_matrix* a, size_t* nrows,
                                 size_t* ncols, size_t* nnz,
                                 samkit_field* field) {
  return guarded([&] {
    require(a != nullptr, "matrix is null");
    std::visit(
        [&](const auto& m) {
          if (nrows) *nrows = m.nrows();
          if (ncols) *ncols = m.ncols();
          if (nnz) *nnz = m.nnz();
        },
        a->value);
    if (field) *field = is_complex(a) ? SAMKIT_COMPLEX : SAMKIT_REAL;
  });
}

samkit_status samkit_matrix_triplets(const samkit_matrix* a, size_t* rows,
                                     size_t* cols, double* values) {
  return guarded([&] {
    require(a != nullptr, "matrix is null");
    std::visit(
        [&]<class T>(const SparseMatrix<T>& m) {
          auto colptr = m.colptr();
          auto rowind = m.rowind();
          auto vals = out_span<T>(values, m.nnz());
          for (std::size_t j = 0; j < m.ncols(); ++j) {
            for (std::size_t p = colptr[j]; p < colptr[j + 1]; ++p) {
              if (rows) rows[p] = rowind[p];
              if (cols) cols[p] = j;
              if (values) vals[p] = m.values()[p];
            }
          }
        },
        a->value);
  });
}

samkit_status samkit_matrix_matvec(const samkit_matrix* a, const double* x,
                                   double* y) {
  return guarded([&] {
    require(a && x && y, "null argument");
    std::visit(
        [&]<class T>(const SparseMatrix<T>& m) {
          samkit::matvec_into(m, in_span<T>(x, m.ncols()),
                              out_span<T>(y, m.nrows()));
        },
        a->value);
  });
}

samkit_status samkit_matrix_shifted(double alpha_re, double alpha_im,
                                    const samkit_matrix* e,
                                    const samkit_matrix* a,
                                    samkit_matrix** out) {
  return guarded([&] {
    require(e && a && out, "null argument");
    auto m = std::make_unique<samkit_matrix>();
    if (alpha_im == 0.0 && !is_complex(e) && !is_complex(a)) {
      m->value = samkit::shifted_combine(
          alpha_re, std::get<SparseMatrix<double>>(e->value),
          std::get<SparseMatrix<double>>(a->value));
    } else {
      m->value = samkit::shifted_combine(Complex(alpha_re, alpha_im),
                                         as_complex(e), as_complex(a));
    }
    *out = m.release();
  });
}

void samkit_matrix_destroy(samkit_matrix* a) { delete a; }

samkit_status samkit_pattern_of(const samkit_matrix* a, samkit_pattern** out) {
  return guarded([&] {
    require(a && out, "null argument");
    *out = new samkit_pattern{
        std::visit([](const auto& m) { return samkit::pattern_of(m); },
                   a->value)};
  });
}

samkit_status samkit_pattern_offsets(size_t n, const long* offsets,
                                     size_t count, samkit_pattern** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(count == 0 || offsets != nullptr, "offsets is null");
    *out = new samkit_pattern{samkit::offset_pattern(
        n, std::span<const long>(offsets, count))};
  });
}

samkit_status samkit_pattern_power(const samkit_pattern* p, int power,
                                   samkit_pattern** out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = new samkit_pattern{samkit::symbolic_power(p->value, power)};
  });
}

samkit_status samkit_pattern_sparsified(const samkit_matrix* a, int power,
                                        double tau, int absolute,
                                        samkit_pattern** out) {
  return guarded([&] {
    require(a && out, "null argument");
    const auto mode = absolute ? samkit::ThresholdMode::kAbsolute
                               : samkit::ThresholdMode::kRelative;
    *out = new samkit_pattern{std::visit(
        [&](const auto& m) {
          return samkit::sparsified_power(m, power, tau, mode);
        },
        a->value)};
  });
}

samkit_status samkit_pattern_read(const char* path, samkit_pattern** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new samkit_pattern{samkit::read_pattern(path)};
  });
}

samkit_status samkit_pattern_write(const samkit_pattern* p, const char* path) {
  return guarded([&] {
    require(p && path, "null argument");
    samkit::write_pattern(p->value, path);
  });
}

samkit_status samkit_pattern_info(const samkit_pattern* p, size_t* nrows,
                                  size_t* ncols, size_t* nnz) {
  return guarded([&] {
    require(p != nullptr, "pattern is null");
    if (nrows) *nrows = p->value.nrows();
    if (ncols) *ncols = p->value.ncols();
    if (nnz) *nnz = p->value.nnz();
  });
}

void samkit_pattern_destroy(samkit_pattern* p) { delete p; }

samkit_status samkit_sam_compute(const samkit_pattern* pattern,
                                 const samkit_matrix* a_k,
                                 const samkit_matrix* a_ref, unsigned workers,
                                 samkit_map** out) {
  return guarded([&] {
    require(pattern && a_k && a_ref && out, "null argument");
    samkit::SamOptions opts;
    opts.workers = workers;
    auto run = [&]<class T>(const SparseMatrix<T>& k, const SparseMatrix<T>& r) {
      const auto p = samkit::plan(pattern->value, k, r);
      return std::make_unique<samkit_map>(
          samkit_map{samkit::compute_map(k, r, p, opts)});
    };
    std::unique_ptr<samkit_map> m;
    if (!is_complex(a_k) && !is_complex(a_ref)) {
      m = run(std::get<SparseMatrix<double>>(a_k->value),
              std::get<SparseMatrix<double>>(a_ref->value));
    } else {
      m = run(as_complex(a_k), as_complex(a_ref));
    }
    *out = m.release();
  });
}

samkit_status samkit_map_rel_residual(const samkit_map* m, double* value,
                                      int* present) {
  return guarded([&] {
    require(m != nullptr, "map is null");
    const auto r =
        std::visit([](const auto& s) { return s.rel_residual; }, m->value);
    if (present) *present = r.has_value() ? 1 : 0;
    if (value) *value = r.value_or(0.0);
  });
}

samkit_status samkit_map_matrix(const samkit_map* m, samkit_matrix** out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = new samkit_matrix{std::visit(
        [](const auto& s) { return samkit::AnyMatrix(s.map); }, m->value)};
  });
}

void samkit_map_destroy(samkit_map* m) { delete m; }

samkit_ilutp_params samkit_ilutp_default_params(void) {
  const samkit::IlutpParams d;
  return {d.lfil, d.droptol, d.pivtol};
}

samkit_status samkit_ilutp_factor(const samkit_matrix* a,
                                  const samkit_ilutp_params* params,
                                  samkit_ilutp** out) {
  return guarded([&] {
    require(a && out, "null argument");
    samkit::IlutpParams p;
    if (params) {
      p.lfil = params->lfil;
      p.droptol = params->droptol;
      p.pivtol = params->pivtol;
    }
    auto f = std::make_unique<samkit_ilutp>();
    std::visit(
        [&]<class T>(const SparseMatrix<T>& m) {
          f->value = std::make_shared<const samkit::IlutpFactors<T>>(
              samkit::ilutp_factor(m, p));
        },
        a->value);
    *out = f.release();
  });
}

samkit_status samkit_ilutp_apply(const samkit_ilutp* f, const double* v,
                                 double* out) {
  return guarded([&] {
    require(f && v && out, "null argument");
    std::visit(
        [&]<class T>(const std::shared_ptr<const samkit::IlutpFactors<T>>& ff) {
          const std::size_t n = ff->size();
          samkit::ilutp_apply_solve(*ff, in_span<T>(v, n), out_span<T>(out, n));
        },
        f->value);
  });
}

void samkit_ilutp_destroy(samkit_ilutp* f) { delete f; }

samkit_gmres_config samkit_gmres_default_config(void) {
  const samkit::GmresConfig d;
  return {d.restart, d.rel_tol, d.max_total_iters, d.reorthogonalize ? 1 : 0};
}

samkit_status samkit_gmres_solve(const samkit_matrix* a, const double* b,
                                 const samkit_ilutp* factors,
                                 const samkit_matrix* map,
                                 const samkit_gmres_config* config,
                                 double* x, samkit_solve_info* info) {
  return guarded([&] {
    require(a && b && x, "null argument");
    samkit::GmresConfig cfg;
    if (config) {
      cfg.restart = config->restart;
      cfg.rel_tol = config->rel_tol;
      cfg.max_total_iters = config->max_total_iters;
      cfg.reorthogonalize = config->reorthogonalize != 0;
    }
    // Complex factors force a complex solve; real factors serve either.
    const bool complex = is_complex(a) || (map && is_complex(map)) ||
                         (factors && std::holds_alternative<std::shared_ptr<
                                         const samkit::IlutpFactors<Complex>>>(
                                         factors->value));
    auto solve = [&]<class T>(std::type_identity<T>) {
      SparseMatrix<T> mat;
      if constexpr (std::is_same_v<T, double>) {
        mat = std::get<SparseMatrix<double>>(a->value);
      } else {
        mat = as_complex(a);
      }
      const std::size_t n = mat.nrows();
      samkit::MatrixOperator<T> op(std::move(mat));

      std::vector<samkit::OperatorPtr<T>> stages;
      if (map) {
        if constexpr (std::is_same_v<T, double>) {
          stages.push_back(std::make_shared<samkit::MatrixOperator<double>>(
              std::get<SparseMatrix<double>>(map->value)));
        } else {
          stages.push_back(
              std::make_shared<samkit::MatrixOperator<Complex>>(as_complex(map)));
        }
      }
      if (factors) {
        using Ptr = std::shared_ptr<const samkit::IlutpFactors<T>>;
        using RealPtr = std::shared_ptr<const samkit::IlutpFactors<double>>;
        if (std::holds_alternative<Ptr>(factors->value)) {
          stages.push_back(std::make_shared<samkit::IlutpOperator<T>>(
              std::get<Ptr>(factors->value)));
        } else if constexpr (!std::is_same_v<T, double>) {
          stages.push_back(std::make_shared<RealFactorsOnComplex>(
              std::get<RealPtr>(factors->value)));
        }
      }
      std::unique_ptr<samkit::PreconditionerChain<T>> chain;
      if (!stages.empty()) {
        chain = std::make_unique<samkit::PreconditionerChain<T>>(std::move(stages));
      }
      auto result = samkit::gmres<T>(op, in_span<T>(b, n), chain.get(), {}, cfg);
      std::copy(result.x.begin(), result.x.end(), out_span<T>(x, n).begin());
      if (info) {
        const auto& r = result.report;
        *info = {r.iterations,         r.restarts,
                 r.converged ? 1 : 0,  r.breakdown ? 1 : 0,
                 r.final_rel_residual, r.wall_seconds};
      }
    };
    if (complex) {
      solve(std::type_identity<Complex>{});
    } else {
      solve(std::type_identity<double>{});
    }
  });
}

samkit_status samkit_run_config(const char* path, samkit_report_format format,
                                char** report) {
  return guarded([&] {
    require(path && report, "null argument");
    const auto cfg = samkit::parse_config(path);
    const auto rep = samkit::run_sequence(cfg);
    const std::string text = samkit::render_report(
        rep, format == SAMKIT_REPORT_MARKDOWN ? samkit::ReportFormat::kMarkdown
                                              : samkit::ReportFormat::kCsv);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *report = buf;
  });
}

void samkit_string_free(char* s) { delete[] s; }

samkit_status samkit_generate_helmholtz(size_t nx, size_t ny,
                                        const char* out_dir) {
  return guarded([&] {
    require(out_dir != nullptr, "out_dir is null");
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    const auto prob = samkit::laplace2d_dirichlet(nx, ny);
    samkit::write_matrix_market(prob.matrix, dir / "K0.mtx");
    samkit::write_vector_market<double>(prob.rhs, dir / "b.mtx");
  });
}

samkit_fem_options samkit_fem_default_options(void) {
  const samkit::FemPairOptions fem;
  const samkit::ConductivitySpec k;
  return {32,
          32,
          fem.length_x,
          fem.length_y,
          fem.storage,
          k.value,
          0,
          k.log_std,
          k.correlation_length,
          k.seed,
          40,
          60.0};
}

samkit_status samkit_generate_fem_pair(const samkit_fem_options* options,
                                       const char* out_dir) {
  return guarded([&] {
    require(out_dir != nullptr, "out_dir is null");
    const samkit_fem_options o =
        options ? *options : samkit_fem_default_options();
    samkit::ConductivitySpec spec;
    spec.kind = o.lognormal ? samkit::ConductivitySpec::Kind::kLogNormal
                            : samkit::ConductivitySpec::Kind::kConstant;
    spec.value = o.kappa;
    spec.log_std = o.log_std;
    spec.correlation_length = o.correlation_length;
    spec.seed = o.seed;
    samkit::FemPairOptions fem;
    fem.length_x = o.length_x;
    fem.length_y = o.length_y;
    fem.storage = o.storage;
    const auto pair = samkit::fem_pair_2d(
        o.nx, o.ny, samkit::make_conductivity(spec),
        fem);
    std::vector<Complex> shifts;
    if (o.talbot_nz > 0) shifts = samkit::talbot_shifts(o.talbot_nz, o.talbot_t);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    samkit::write_matrix_market(pair.stiffness, dir / "K.mtx");
    samkit::write_matrix_market(pair.mass, dir / "M.mtx");
    samkit::write_vector_market<double>(samkit::point_source_rhs(o.nx, o.ny),
                                        dir / "b.mtx");
    std::ofstream s(dir / "shifts.txt");
    if (!s) {
      throw samkit::Error(samkit::ErrorCode::kIo,
                          "cannot write " + (dir / "shifts.txt").string());
    }
    s << std::setprecision(17);
    for (const auto& z : shifts) s << z.real() << ' ' << z.imag() << '\n';
  });
}

}  // extern "C"
