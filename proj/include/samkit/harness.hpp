// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SAMKIT_HARNESS_HPP
#define SAMKIT_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "samkit/ilutp.hpp"
#include "samkit/krylov.hpp"
#include "samkit/pattern.hpp"
#include "samkit/problems.hpp"
#include "samkit/sparse.hpp"

namespace samkit {

enum class PrecAction { kRecomputePrec, kComputeSam, kReuse };

/// Which preconditioner work happens at each system of a sequence.
/// Events lists (index, action) pairs; unlisted systems reuse the current
/// preconditioner. Index 0 always recomputes.
struct Strategy {
  enum class Kind { kRecomputeEvery, kReuseFirst, kSamEvery, kEvents };
  Kind kind = Kind::kSamEvery;
  std::vector<std::pair<std::size_t, PrecAction>> events;

  static Strategy recompute_every() { return {Kind::kRecomputeEvery, {}}; }
  static Strategy reuse_first() { return {Kind::kReuseFirst, {}}; }
  static Strategy sam_every() { return {Kind::kSamEvery, {}}; }
  static Strategy schedule(std::vector<std::pair<std::size_t, PrecAction>> ev);

  void validate() const;
  PrecAction action_at(std::size_t index) const;
};

/// Where the SAM sparsity pattern comes from. Matrix-derived kinds use the
/// current reference matrix.
struct PatternChoice {
  enum class Kind {
    kReference,
    kDiagonal,
    kTridiagonal,
    kOffsets,
    kPower,
    kSparsifiedPower,
    kFile,
  };
  Kind kind = Kind::kReference;
  int power = 2;
  double tau = 1e-4;
  ThresholdMode threshold = ThresholdMode::kRelative;
  std::vector<long> offsets;
  std::filesystem::path file;
  unsigned workers = 1;
  bool include_rhs_rows = true;
};

template <Scalar T>
SparsityPattern resolve_pattern(const PatternChoice& choice,
                                const SparseMatrix<T>& reference);

struct ConductivitySpec {
  enum class Kind { kConstant, kLogNormal };
  Kind kind = Kind::kConstant;
  double value = 1.0;  // constant value, or geometric mean for kLogNormal
  double log_std = 1.0;
  /// In the units of the domain coordinates.
  double correlation_length = 0.2;
  std::uint64_t seed = 1;
};

/// Smooth log-normal conductivity built from random Fourier modes; the
/// same seed always gives the same field.
ConductivityField make_conductivity(const ConductivitySpec& spec);

struct SequenceSpec {
  enum class Kind { kHelmholtzSweep, kShiftedPair, kMatrixFiles };
  enum class RhsKind { kDefault, kOnes, kUnit, kFile };

  Kind kind = Kind::kHelmholtzSweep;
  std::size_t nx = 10;
  std::size_t ny = 10;

  // Helmholtz sweep: system 0 is K0, system i is K0 - i * delta_s * I.
  double delta_s = 0.01;
  std::size_t count = 200;
  std::filesystem::path k0_file;

  // Shifted pair: system k is K + z_k M.
  std::filesystem::path stiffness_file;
  std::filesystem::path mass_file;
  ConductivitySpec conductivity;
  FemPairOptions fem;
  std::vector<Complex> shifts;

  std::vector<std::filesystem::path> matrix_files;

  RhsKind rhs = RhsKind::kDefault;
  std::size_t rhs_unit_index = 0;
  std::filesystem::path rhs_file;

  bool is_complex() const;
};

template <Scalar T>
struct SystemSequence {
  std::vector<SparseMatrix<T>> matrices;
  std::vector<Complex> shifts;
  std::vector<T> rhs;
};

template <Scalar T>
SystemSequence<T> materialize(const SequenceSpec& spec);

enum class FailurePolicy { kFallback, kAbort };

struct RunConfig {
  SequenceSpec sequence;
  Strategy strategy;
  IlutpParams ilutp;
  PatternChoice pattern;
  GmresConfig gmres = GmresConfig::full(500, 1e-10);
  FailurePolicy on_failure = FailurePolicy::kFallback;
};

enum class PrecEvent { kRecomputePrec, kComputeSam, kReuse, kFactorFailed };

const char* to_string(PrecEvent e);

struct SystemRow {
  std::size_t index = 0;
  Complex shift{};
  PrecEvent event = PrecEvent::kReuse;
  double prec_seconds = 0.0;
  std::optional<double> sam_rel_residual;
  double gmres_seconds = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double final_rel_residual = 0.0;
  std::string note;
};

struct SequenceReport {
  std::vector<SystemRow> rows;
  double total_prec_seconds = 0.0;
  double total_gmres_seconds = 0.0;
  std::size_t total_iterations = 0;
  double total_wall_seconds = 0.0;

  /// Recomputes the column totals from the rows.
  void sum_totals();
};

/// Solves every system in order, maintaining the reference pair the maps
/// target. A recompute resets the reference; a SAM step maps the current
/// system onto it and keeps the composed preconditioner for later reuse.
template <Scalar T>
SequenceReport run_sequence(const SystemSequence<T>& sequence,
                            const RunConfig& config);

/// Materializes config.sequence in the right scalar field and runs it.
SequenceReport run_sequence(const RunConfig& config);

enum class ReportFormat { kCsv, kMarkdown };

std::string render_report(const SequenceReport& report, ReportFormat format);

/// Inverse of the CSV rendering (timings and residuals as printed).
SequenceReport parse_report_csv(const std::string& text);

/// Reads an INI-style run description. Relative paths resolve against the
/// directory of the file.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text,
                            const std::filesystem::path& base_dir = {});

}  // namespace samkit

#endif  // SAMKIT_HARNESS_HPP
