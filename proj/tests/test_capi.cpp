// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "samkit/samkit.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "samkit_test_capi" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

samkit_matrix* make(size_t n, const std::vector<size_t>& r, const std::vector<size_t>& c,
                    const std::vector<double>& v, samkit_field field = SAMKIT_REAL) {
  samkit_matrix* m = nullptr;
  REQUIRE(samkit_matrix_from_triplets(n, n, r.size(), r.data(), c.data(), v.data(),
                                      field, &m) == SAMKIT_OK);
  return m;
}

samkit_matrix* identity(size_t n, double scale = 1.0) {
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  return make(n, idx, idx, std::vector<double>(n, scale));
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SAMKIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(samkit_version()).size() > 0);
  CHECK(std::string(samkit_status_name(SAMKIT_OK)) == "ok");
  CHECK(std::string(samkit_status_name(SAMKIT_ERR_CONFIG)) == "config error");
}

TEST_CASE("matrix construction, inspection and products") {
  // [[4, 1], [1, 3]] plus a duplicate that sums into (0, 0).
  samkit_matrix* a = make(2, {0, 0, 1, 1, 0}, {0, 1, 0, 1, 0}, {3, 1, 1, 3, 1});
  size_t nr = 0, nc = 0, nnz = 0;
  samkit_field field = SAMKIT_COMPLEX;
  REQUIRE(samkit_matrix_info(a, &nr, &nc, &nnz, &field) == SAMKIT_OK);
  CHECK(nr == 2);
  CHECK(nc == 2);
  CHECK(nnz == 4);
  CHECK(field == SAMKIT_REAL);

  std::vector<size_t> rows(4), cols(4);
  std::vector<double> vals(4);
  REQUIRE(samkit_matrix_triplets(a, rows.data(), cols.data(), vals.data()) == SAMKIT_OK);
  CHECK(rows == std::vector<size_t>{0, 1, 0, 1});
  CHECK(cols == std::vector<size_t>{0, 0, 1, 1});
  CHECK(vals == std::vector<double>{4, 1, 1, 3});

  double x[2] = {1.0, -1.0};
  double y[2];
  REQUIRE(samkit_matrix_matvec(a, x, y) == SAMKIT_OK);
  CHECK(y[0] == 3.0);
  CHECK(y[1] == -2.0);

  // a + (0.5 + 2i) I is complex.
  samkit_matrix* eye = identity(2);
  samkit_matrix* s = nullptr;
  REQUIRE(samkit_matrix_shifted(0.5, 2.0, eye, a, &s) == SAMKIT_OK);
  REQUIRE(samkit_matrix_info(s, nullptr, nullptr, nullptr, &field) == SAMKIT_OK);
  CHECK(field == SAMKIT_COMPLEX);
  double xc[4] = {1.0, 0.0, 0.0, 0.0};
  double yc[4];
  REQUIRE(samkit_matrix_matvec(s, xc, yc) == SAMKIT_OK);
  CHECK(yc[0] == 4.5);
  CHECK(yc[1] == 2.0);
  CHECK(yc[2] == 1.0);
  CHECK(yc[3] == 0.0);

  samkit_matrix_destroy(s);
  samkit_matrix_destroy(eye);
  samkit_matrix_destroy(a);
  samkit_matrix_destroy(nullptr);
}

TEST_CASE("errors come back as status codes") {
  samkit_matrix* m = nullptr;
  size_t r = 5, c = 0;
  double v = 1.0;
  CHECK(samkit_matrix_from_triplets(2, 2, 1, &r, &c, &v, SAMKIT_REAL, &m) ==
        SAMKIT_ERR_INDEX);
  CHECK(m == nullptr);
  CHECK(std::string(samkit_last_error()).size() > 0);
  CHECK(samkit_matrix_from_triplets(2, 2, 1, &r, &c, &v, SAMKIT_REAL, nullptr) ==
        SAMKIT_ERR_INVALID_ARGUMENT);
  CHECK(samkit_matrix_read_mm("/nonexistent/file.mtx", &m) == SAMKIT_ERR_IO);

  samkit_matrix* a = identity(3);
  samkit_matrix* b = identity(2);
  samkit_matrix* out = nullptr;
  CHECK(samkit_matrix_shifted(1.0, 0.0, a, b, &out) == SAMKIT_ERR_DIMENSION);

  // Anti-diagonal without pivoting: zero pivot in row 0.
  samkit_matrix* anti = make(2, {0, 1}, {1, 0}, {1.0, 1.0});
  samkit_ilutp_params p = samkit_ilutp_default_params();
  p.pivtol = 0.0;
  samkit_ilutp* f = nullptr;
  CHECK(samkit_ilutp_factor(anti, &p, &f) == SAMKIT_ERR_FACTORIZATION);
  CHECK(contains(samkit_last_error(), "row 0"));
  p.pivtol = 1.5;
  CHECK(samkit_ilutp_factor(anti, &p, &f) == SAMKIT_ERR_INVALID_ARGUMENT);

  samkit_matrix_destroy(anti);
  samkit_matrix_destroy(a);
  samkit_matrix_destroy(b);
}

TEST_CASE("patterns") {
  long offs[3] = {-1, 0, 1};
  samkit_pattern* tri = nullptr;
  REQUIRE(samkit_pattern_offsets(6, offs, 3, &tri) == SAMKIT_OK);
  size_t nnz = 0;
  REQUIRE(samkit_pattern_info(tri, nullptr, nullptr, &nnz) == SAMKIT_OK);
  CHECK(nnz == 16);
  samkit_pattern* sq = nullptr;
  REQUIRE(samkit_pattern_power(tri, 2, &sq) == SAMKIT_OK);
  REQUIRE(samkit_pattern_info(sq, nullptr, nullptr, &nnz) == SAMKIT_OK);
  CHECK(nnz == 6 + 2 * 5 + 2 * 4);
  samkit_pattern* bad = nullptr;
  CHECK(samkit_pattern_power(tri, 9, &bad) == SAMKIT_ERR_INVALID_ARGUMENT);

  auto dir = scratch("patterns");
  const std::string path = (dir / "sq.pat").string();
  REQUIRE(samkit_pattern_write(sq, path.c_str()) == SAMKIT_OK);
  samkit_pattern* back = nullptr;
  REQUIRE(samkit_pattern_read(path.c_str(), &back) == SAMKIT_OK);
  REQUIRE(samkit_pattern_info(back, nullptr, nullptr, &nnz) == SAMKIT_OK);
  CHECK(nnz == 24);

  samkit_matrix* diag = identity(4, 2.0);
  samkit_pattern* of = nullptr;
  REQUIRE(samkit_pattern_of(diag, &of) == SAMKIT_OK);
  samkit_pattern* sp = nullptr;
  REQUIRE(samkit_pattern_sparsified(diag, 2, 5.0, 1, &sp) == SAMKIT_OK);
  REQUIRE(samkit_pattern_info(sp, nullptr, nullptr, &nnz) == SAMKIT_OK);
  CHECK(nnz == 0);  // entries of the square are 4 < 5

  for (auto* p : {tri, sq, back, of, sp}) samkit_pattern_destroy(p);
  samkit_matrix_destroy(diag);
}

TEST_CASE("sparse approximate map through the C API") {
  // a_k = 2 I, a_ref = I on the diagonal pattern: the map is I / 2.
  samkit_matrix* ak = identity(5, 2.0);
  samkit_matrix* ref = identity(5);
  samkit_pattern* pat = nullptr;
  REQUIRE(samkit_pattern_of(ref, &pat) == SAMKIT_OK);
  samkit_map* m = nullptr;
  REQUIRE(samkit_sam_compute(pat, ak, ref, 0, &m) == SAMKIT_OK);
  double res = -1.0;
  int present = 0;
  REQUIRE(samkit_map_rel_residual(m, &res, &present) == SAMKIT_OK);
  CHECK(present == 1);
  CHECK(res <= 1e-15);
  samkit_matrix* n = nullptr;
  REQUIRE(samkit_map_matrix(m, &n) == SAMKIT_OK);
  std::vector<double> vals(5);
  REQUIRE(samkit_matrix_triplets(n, nullptr, nullptr, vals.data()) == SAMKIT_OK);
  for (double v : vals) CHECK(v == doctest::Approx(0.5));

  samkit_matrix* zero = make(5, {}, {}, {});
  samkit_map* mz = nullptr;
  REQUIRE(samkit_sam_compute(pat, ak, zero, 1, &mz) == SAMKIT_OK);
  REQUIRE(samkit_map_rel_residual(mz, &res, &present) == SAMKIT_OK);
  CHECK(present == 0);

  samkit_matrix* small = identity(3);
  samkit_map* bad = nullptr;
  CHECK(samkit_sam_compute(pat, small, ref, 1, &bad) != SAMKIT_OK);

  samkit_map_destroy(m);
  samkit_map_destroy(mz);
  samkit_matrix_destroy(n);
  samkit_matrix_destroy(zero);
  samkit_matrix_destroy(small);
  samkit_pattern_destroy(pat);
  samkit_matrix_destroy(ak);
  samkit_matrix_destroy(ref);
}

TEST_CASE("ILUTP and GMRES through the C API") {
  samkit_matrix* a = make(2, {0, 0, 1, 1}, {0, 1, 0, 1}, {4, 1, 1, 3});
  double b[2] = {1.0, 2.0};
  double x[2] = {0.0, 0.0};
  samkit_gmres_config cfg = samkit_gmres_default_config();
  cfg.rel_tol = 1e-12;
  samkit_solve_info info;
  REQUIRE(samkit_gmres_solve(a, b, nullptr, nullptr, &cfg, x, &info) == SAMKIT_OK);
  CHECK(info.converged == 1);
  CHECK(info.iterations <= 2);
  CHECK(x[0] == doctest::Approx(1.0 / 11.0));
  CHECK(x[1] == doctest::Approx(7.0 / 11.0));

  samkit_ilutp_params p = samkit_ilutp_default_params();
  samkit_ilutp* f = nullptr;
  REQUIRE(samkit_ilutp_factor(a, &p, &f) == SAMKIT_OK);
  double y[2];
  REQUIRE(samkit_ilutp_apply(f, b, y) == SAMKIT_OK);
  CHECK(y[0] == doctest::Approx(1.0 / 11.0));
  REQUIRE(samkit_gmres_solve(a, b, f, nullptr, &cfg, x, &info) == SAMKIT_OK);
  CHECK(info.iterations == 1);

  // An identity map in front of the factors changes nothing.
  samkit_matrix* eye = identity(2);
  REQUIRE(samkit_gmres_solve(a, b, f, eye, nullptr, x, &info) == SAMKIT_OK);
  CHECK(info.iterations == 1);
  CHECK(x[1] == doctest::Approx(7.0 / 11.0));

  // A complex system with a real preconditioner is promoted.
  samkit_matrix* ac = nullptr;
  REQUIRE(samkit_matrix_shifted(0.0, 0.25, eye, a, &ac) == SAMKIT_OK);
  double bc[4] = {1.0, 0.0, 2.0, 0.0};
  double xc[4];
  REQUIRE(samkit_gmres_solve(ac, bc, f, nullptr, &cfg, xc, &info) == SAMKIT_OK);
  CHECK(info.converged == 1);
  double back[4];
  REQUIRE(samkit_matrix_matvec(ac, xc, back) == SAMKIT_OK);
  for (int i = 0; i < 4; ++i) CHECK(back[i] == doctest::Approx(bc[i]).scale(1.0));

  samkit_matrix_destroy(ac);
  samkit_matrix_destroy(eye);
  samkit_ilutp_destroy(f);
  samkit_matrix_destroy(a);
}

TEST_CASE("generators and config runs") {
  auto dir = scratch("run");
  REQUIRE(samkit_generate_helmholtz(6, 6, dir.string().c_str()) == SAMKIT_OK);
  samkit_matrix* k0 = nullptr;
  REQUIRE(samkit_matrix_read_mm((dir / "K0.mtx").string().c_str(), &k0) == SAMKIT_OK);
  size_t n = 0, nnz = 0;
  REQUIRE(samkit_matrix_info(k0, &n, nullptr, &nnz, nullptr) == SAMKIT_OK);
  CHECK(n == 36);
  CHECK(nnz == 5 * 36 - 4 * 6);
  samkit_matrix_destroy(k0);
  CHECK(fs::exists(dir / "b.mtx"));

  std::ofstream(dir / "run.ini")
      << "[sequence]\nkind = helmholtz_sweep\nk0_file = K0.mtx\nrhs = file:b.mtx\n"
         "count = 4\ndelta_s = 0.05\n[strategy]\nkind = sam_every\n";
  char* report = nullptr;
  REQUIRE(samkit_run_config((dir / "run.ini").string().c_str(), SAMKIT_REPORT_CSV,
                            &report) == SAMKIT_OK);
  const std::string csv = report;
  samkit_string_free(report);
  CHECK(contains(csv, "\n0,0,0,prec,"));
  CHECK(contains(csv, "\n4,0.20000000000000001,0,sam,"));
  CHECK(contains(csv, "\ntotal,"));

  std::ofstream(dir / "bad.ini") << "[sequence]\nkind = nope\n";
  CHECK(samkit_run_config((dir / "bad.ini").string().c_str(), SAMKIT_REPORT_CSV,
                          &report) == SAMKIT_ERR_CONFIG);
  CHECK(contains(samkit_last_error(), "sequence.kind"));

  samkit_fem_options opt = samkit_fem_default_options();
  opt.nx = 5;
  opt.ny = 4;
  opt.talbot_nz = 8;
  opt.talbot_t = 2.0;
  REQUIRE(samkit_generate_fem_pair(&opt, dir.string().c_str()) == SAMKIT_OK);
  for (const char* name : {"K.mtx", "M.mtx", "b.mtx", "shifts.txt"}) {
    CHECK(fs::exists(dir / name));
  }
  std::istringstream shifts(slurp(dir / "shifts.txt"));
  int lines = 0;
  for (std::string line; std::getline(shifts, line);) lines += !line.empty() && line[0] != '#';
  CHECK(lines == 4);
  opt.talbot_nz = 7;
  CHECK(samkit_generate_fem_pair(&opt, dir.string().c_str()) != SAMKIT_OK);
}

TEST_CASE("command-line front end") {
  auto dir = scratch("cli");
  REQUIRE(run_cli("gen --problem helmholtz --nx 5 --ny 5 --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "K0.mtx"));
  REQUIRE(run_cli("gen --problem fem-pair --nx 6 --ny 6 --kappa lognormal "
                  "--talbot-nz 4 --talbot-t 1 --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "shifts.txt"));

  std::ofstream(dir / "pair.ini")
      << "[sequence]\nkind = shifted_pair\nstiffness_file = K.mtx\nmass_file = M.mtx\n"
         "shifts_file = shifts.txt\nrhs = file:b.mtx\n[strategy]\nkind = reuse_first\n";
  const auto out = dir / "report.md";
  REQUIRE(run_cli("run --config " + (dir / "pair.ini").string() +
                  " --format markdown --out " + out.string()) == 0);
  const std::string md = slurp(out);
  CHECK(contains(md, "| **Totals** |"));
  CHECK(contains(md, "reuse"));

  std::ofstream(dir / "broken.ini") << "[sequence]\nkind = helmholtz_sweep\n";
  CHECK(run_cli("run --config " + (dir / "broken.ini").string()) != 0);
  CHECK(run_cli("gen --problem nothing --out " + dir.string()) != 0);
  CHECK(run_cli("gen --problem fem-pair --kappa soft --out " + dir.string()) != 0);
}
