// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the library only through samkit.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "samkit/samkit.h"

namespace {

int report_failure(samkit_status s) {
  std::cerr << "samkit: " << samkit_status_name(s) << ": "
            << samkit_last_error() << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preconditioner recycling with sparse approximate maps"};
  app.set_version_flag("--version", std::string(samkit_version()));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a system sequence from a config file");
  std::string config;
  std::string format = "csv";
  std::string out;
  run->add_option("--config", config, "INI run description")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"csv", "markdown"}));
  run->add_option("--out", out, "Write the report here instead of stdout");

  auto* gen = app.add_subcommand("gen", "Write test problems as Matrix Market");
  std::string problem;
  std::string out_dir;
  samkit_fem_options fem = samkit_fem_default_options();
  // Unset grid sizes fall back to the per-problem defaults.
  std::optional<std::size_t> nx;
  std::optional<std::size_t> ny;
  std::string kappa = "1";
  gen->add_option("--problem", problem, "Problem family")
      ->required()
      ->check(CLI::IsMember({"helmholtz", "fem-pair"}));
  gen->add_option("--out", out_dir, "Output directory")->required();
  gen->add_option("--nx", nx, "Interior nodes in x")->check(CLI::Range(2, 100000));
  gen->add_option("--ny", ny, "Interior nodes in y")->check(CLI::Range(2, 100000));
  gen->add_option("--kappa", kappa,
                  "fem-pair: constant conductivity, or 'lognormal'");
  gen->add_option("--kappa-mean", fem.kappa, "fem-pair: log-normal geometric mean");
  gen->add_option("--kappa-log-std", fem.log_std, "fem-pair: std of ln(kappa)");
  gen->add_option("--kappa-correlation", fem.correlation_length,
                  "fem-pair: correlation length");
  gen->add_option("--kappa-seed", fem.seed, "fem-pair: field seed");
  gen->add_option("--length-x", fem.length_x, "fem-pair: domain width");
  gen->add_option("--length-y", fem.length_y, "fem-pair: domain height");
  gen->add_option("--storage", fem.storage, "fem-pair: mass multiplier");
  gen->add_option("--talbot-nz", fem.talbot_nz, "fem-pair: contour points (even)");
  gen->add_option("--talbot-t", fem.talbot_t, "fem-pair: contour time");

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    char* text = nullptr;
    const auto fmt =
        format == "markdown" ? SAMKIT_REPORT_MARKDOWN : SAMKIT_REPORT_CSV;
    const samkit_status s = samkit_run_config(config.c_str(), fmt, &text);
    if (s != SAMKIT_OK) return report_failure(s);
    int rc = 0;
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out);
      f << text;
      if (!f) {
        std::cerr << "samkit: cannot write " << out << '\n';
        rc = 1;
      }
    }
    samkit_string_free(text);
    return rc;
  }

  samkit_status s = SAMKIT_OK;
  if (problem == "helmholtz") {
    s = samkit_generate_helmholtz(nx.value_or(10), ny.value_or(10), out_dir.c_str());
  } else {
    fem.nx = nx.value_or(fem.nx);
    fem.ny = ny.value_or(fem.ny);
    if (kappa == "lognormal") {
      fem.lognormal = 1;
    } else {
      try {
        fem.kappa = std::stod(kappa);
      } catch (const std::exception&) {
        std::cerr << "samkit: --kappa expects a number or 'lognormal'\n";
        return 2;
      }
    }
    s = samkit_generate_fem_pair(&fem, out_dir.c_str());
  }
  return s == SAMKIT_OK ? 0 : report_failure(s);
}
