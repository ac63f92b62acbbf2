/* Copyright 2026 The samkit Authors
 * SPDX-License-Identifier: Apache-2.0
 */

/* C interface to samkit.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_destroy function (null is accepted). Every fallible call
 * returns a samkit_status; on failure the message is available from
 * samkit_last_error() on the same thread until the next failing call.
 *
 * Complex data crosses the boundary as interleaved (re, im) doubles, so a
 * complex vector of length n occupies 2n doubles.
 */

#ifndef SAMKIT_SAMKIT_H
#define SAMKIT_SAMKIT_H

#include <stddef.h>

#if defined(_WIN32)
#define SAMKIT_API __declspec(dllexport)
#else
#define SAMKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum samkit_status {
  SAMKIT_OK = 0,
  SAMKIT_ERR_INVALID_ARGUMENT = 1,
  SAMKIT_ERR_DIMENSION = 2,
  SAMKIT_ERR_INDEX = 3,
  SAMKIT_ERR_STRUCTURE = 4,
  SAMKIT_ERR_FACTORIZATION = 5,
  SAMKIT_ERR_IO = 6,
  SAMKIT_ERR_PARSE = 7,
  SAMKIT_ERR_CONFIG = 8,
  SAMKIT_ERR_INTERNAL = 9
} samkit_status;

typedef enum samkit_field { SAMKIT_REAL = 0, SAMKIT_COMPLEX = 1 } samkit_field;

typedef enum samkit_report_format {
  SAMKIT_REPORT_CSV = 0,
  SAMKIT_REPORT_MARKDOWN = 1
} samkit_report_format;

typedef struct samkit_matrix samkit_matrix;
typedef struct samkit_pattern samkit_pattern;
typedef struct samkit_map samkit_map;
typedef struct samkit_ilutp samkit_ilutp;

SAMKIT_API const char* samkit_version(void);
SAMKIT_API const char* samkit_last_error(void);
SAMKIT_API const char* samkit_status_name(samkit_status status);

/* ---- matrices ---------------------------------------------------------- */

/* Duplicates are summed. values holds nnz doubles for SAMKIT_REAL and 2*nnz
 * interleaved doubles for SAMKIT_COMPLEX. */
SAMKIT_API samkit_status samkit_matrix_from_triplets(
    size_t nrows, size_t ncols, size_t nnz, const size_t* rows,
    const size_t* cols, const double* values, samkit_field field,
    samkit_matrix** out);
SAMKIT_API samkit_status samkit_matrix_read_mm(const char* path,
                                               samkit_matrix** out);
SAMKIT_API samkit_status samkit_matrix_write_mm(const samkit_matrix* a,
                                                const char* path);
SAMKIT_API samkit_status samkit_matrix_info(const samkit_matrix* a,
                                            size_t* nrows, size_t* ncols,
                                            size_t* nnz, samkit_field* field);
/* Copies the stored entries in column-major order. Any output may be null. */
SAMKIT_API samkit_status samkit_matrix_triplets(const samkit_matrix* a,
                                                size_t* rows, size_t* cols,
                                                double* values);
SAMKIT_API samkit_status samkit_matrix_matvec(const samkit_matrix* a,
                                              const double* x, double* y);
/* out = alpha * e + a. A complex alpha or operand gives a complex result. */
SAMKIT_API samkit_status samkit_matrix_shifted(double alpha_re,
                                               double alpha_im,
                                               const samkit_matrix* e,
                                               const samkit_matrix* a,
                                               samkit_matrix** out);
SAMKIT_API void samkit_matrix_destroy(samkit_matrix* a);

/* ---- sparsity patterns ------------------------------------------------- */

SAMKIT_API samkit_status samkit_pattern_of(const samkit_matrix* a,
                                           samkit_pattern** out);
SAMKIT_API samkit_status samkit_pattern_offsets(size_t n, const long* offsets,
                                                size_t count,
                                                samkit_pattern** out);
SAMKIT_API samkit_status samkit_pattern_power(const samkit_pattern* p,
                                              int power, samkit_pattern** out);
/* Positions of A^power with |entry| >= tau * max|entry|, or >= tau when
 * absolute is nonzero. */
SAMKIT_API samkit_status samkit_pattern_sparsified(const samkit_matrix* a,
                                                   int power, double tau,
                                                   int absolute,
                                                   samkit_pattern** out);
SAMKIT_API samkit_status samkit_pattern_read(const char* path,
                                             samkit_pattern** out);
SAMKIT_API samkit_status samkit_pattern_write(const samkit_pattern* p,
                                              const char* path);
SAMKIT_API samkit_status samkit_pattern_info(const samkit_pattern* p,
                                             size_t* nrows, size_t* ncols,
                                             size_t* nnz);
SAMKIT_API void samkit_pattern_destroy(samkit_pattern* p);

/* ---- sparse approximate maps ------------------------------------------- */

/* N = argmin over the pattern of ||a_k N - a_ref||_F. workers = 0 uses the
 * hardware thread count; the result does not depend on it. */
SAMKIT_API samkit_status samkit_sam_compute(const samkit_pattern* pattern,
                                            const samkit_matrix* a_k,
                                            const samkit_matrix* a_ref,
                                            unsigned workers,
                                            samkit_map** out);
/* *present is 0 when the reference matrix is zero. */
SAMKIT_API samkit_status samkit_map_rel_residual(const samkit_map* m,
                                                 double* value, int* present);
SAMKIT_API samkit_status samkit_map_matrix(const samkit_map* m,
                                           samkit_matrix** out);
SAMKIT_API void samkit_map_destroy(samkit_map* m);

/* ---- ILUTP ------------------------------------------------------------- */

typedef struct samkit_ilutp_params {
  size_t lfil;
  double droptol;
  double pivtol;
} samkit_ilutp_params;

SAMKIT_API samkit_ilutp_params samkit_ilutp_default_params(void);
/* SAMKIT_ERR_FACTORIZATION names the failing row in samkit_last_error(). */
SAMKIT_API samkit_status samkit_ilutp_factor(const samkit_matrix* a,
                                             const samkit_ilutp_params* params,
                                             samkit_ilutp** out);
/* out approximates A^{-1} v, in the factor's scalar field. */
SAMKIT_API samkit_status samkit_ilutp_apply(const samkit_ilutp* f,
                                            const double* v, double* out);
SAMKIT_API void samkit_ilutp_destroy(samkit_ilutp* f);

/* ---- GMRES ------------------------------------------------------------- */

typedef struct samkit_gmres_config {
  size_t restart;
  double rel_tol;
  size_t max_total_iters;
  int reorthogonalize;
} samkit_gmres_config;

typedef struct samkit_solve_info {
  size_t iterations;
  size_t restarts;
  int converged;
  int breakdown;
  double final_rel_residual;
  double wall_seconds;
} samkit_solve_info;

SAMKIT_API samkit_gmres_config samkit_gmres_default_config(void);
/* Right-preconditioned GMRES from a zero initial guess. The preconditioner
 * is map * factors; either part may be null. */
SAMKIT_API samkit_status samkit_gmres_solve(const samkit_matrix* a,
                                            const double* b,
                                            const samkit_ilutp* factors,
                                            const samkit_matrix* map,
                                            const samkit_gmres_config* config,
                                            double* x, samkit_solve_info* info);

/* ---- harness ----------------------------------------------------------- */

/* Runs the sequence described by a config file and renders its report into
 * a new string released with samkit_string_free. */
SAMKIT_API samkit_status samkit_run_config(const char* path,
                                           samkit_report_format format,
                                           char** report);
SAMKIT_API void samkit_string_free(char* s);

/* Writes K0.mtx and b.mtx. */
SAMKIT_API samkit_status samkit_generate_helmholtz(size_t nx, size_t ny,
                                                   const char* out_dir);

typedef struct samkit_fem_options {
  size_t nx;
  size_t ny;
  double length_x;
  double length_y;
  double storage;
  /* Constant conductivity, or the geometric mean when lognormal != 0. */
  double kappa;
  int lognormal;
  double log_std;
  /* In the same units as length_x and length_y. */
  double correlation_length;
  unsigned long long seed;
  /* Contour shifts written to shifts.txt; n_z = 0 writes none. */
  size_t talbot_nz;
  double talbot_t;
} samkit_fem_options;

SAMKIT_API samkit_fem_options samkit_fem_default_options(void);
/* Writes K.mtx, M.mtx, b.mtx and shifts.txt ("re im" per line). */
SAMKIT_API samkit_status samkit_generate_fem_pair(
    const samkit_fem_options* options, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* SAMKIT_SAMKIT_H */
