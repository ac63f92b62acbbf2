// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "samkit/harness.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "samkit/error.hpp"
#include "samkit/operator.hpp"
#include "samkit/sam.hpp"

namespace samkit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <Scalar T>
SparseMatrix<T> as_field(const SparseMatrix<double>& a) {
  if constexpr (is_complex_v<T>) {
    return promote(a);
  } else {
    return a;
  }
}

template <Scalar T>
std::vector<T> as_field(const std::vector<double>& v) {
  return std::vector<T>(v.begin(), v.end());
}

template <Scalar T>
SparseMatrix<T> load_matrix(const std::filesystem::path& p) {
  return read_matrix_market<T>(p);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt_short(double v, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

Strategy Strategy::schedule(
    std::vector<std::pair<std::size_t, PrecAction>> ev) {
  Strategy s{Kind::kEvents, std::move(ev)};
  s.validate();
  return s;
}

void Strategy::validate() const {
  if (kind != Kind::kEvents) {
    if (!events.empty()) {
      throw Error(ErrorCode::kConfig,
                  "event list given for a fixed (non-event) strategy");
    }
    return;
  }
  if (events.empty() || events.front().first != 0 ||
      events.front().second != PrecAction::kRecomputePrec) {
    throw Error(ErrorCode::kConfig,
                "event schedule must start with a preconditioner at index 0");
  }
  for (std::size_t k = 1; k < events.size(); ++k) {
    if (events[k].first <= events[k - 1].first) {
      throw Error(ErrorCode::kConfig,
                  "event indices must be strictly increasing");
    }
  }
}

PrecAction Strategy::action_at(std::size_t index) const {
  if (index == 0) return PrecAction::kRecomputePrec;
  switch (kind) {
    case Kind::kRecomputeEvery:
      return PrecAction::kRecomputePrec;
    case Kind::kReuseFirst:
      return PrecAction::kReuse;
    case Kind::kSamEvery:
      return PrecAction::kComputeSam;
    case Kind::kEvents:
      for (const auto& [i, a] : events) {
        if (i == index) return a;
        if (i > index) break;
      }
      return PrecAction::kReuse;
  }
  return PrecAction::kReuse;
}

template <Scalar T>
SparsityPattern resolve_pattern(const PatternChoice& choice,
                                const SparseMatrix<T>& reference) {
  const std::size_t n = reference.nrows();
  switch (choice.kind) {
    case PatternChoice::Kind::kReference:
      return pattern_of(reference);
    case PatternChoice::Kind::kDiagonal:
      return diagonal_pattern(n);
    case PatternChoice::Kind::kTridiagonal:
      return tridiagonal_pattern(n);
    case PatternChoice::Kind::kOffsets:
      return offset_pattern(n, choice.offsets);
    case PatternChoice::Kind::kPower:
      return symbolic_power(pattern_of(reference), choice.power);
    case PatternChoice::Kind::kSparsifiedPower:
      return sparsified_power(reference, choice.power, choice.tau,
                              choice.threshold);
    case PatternChoice::Kind::kFile: {
      SparsityPattern p = read_pattern(choice.file);
      if (p.nrows() != n || p.ncols() != n) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "pattern file " + choice.file.string() +
                        " does not match the system dimension");
      }
      return p;
    }
  }
  throw Error(ErrorCode::kConfig, "unknown pattern kind");
}

ConductivityField make_conductivity(const ConductivitySpec& spec) {
  if (!(spec.value > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "conductivity must be positive");
  }
  if (spec.kind == ConductivitySpec::Kind::kConstant) {
    const double v = spec.value;
    return [v](double, double) { return v; };
  }
  if (!(spec.correlation_length > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "correlation length must be positive");
  }
  constexpr int kModes = 64;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  struct Mode {
    double kx, ky, phi;
  };
  std::vector<Mode> modes(kModes);
  const double scale = spec.correlation_length;
  for (auto& m : modes) {
    m.kx = normal(rng) / scale;
    m.ky = normal(rng) / scale;
    m.phi = phase(rng);
  }
  const double amp = spec.log_std * std::sqrt(2.0 / kModes);
  const double mean = spec.value;
  return [modes, amp, mean](double x, double y) {
    double g = 0.0;
    for (const auto& m : modes) g += std::cos(m.kx * x + m.ky * y + m.phi);
    return mean * std::exp(amp * g);
  };
}

bool SequenceSpec::is_complex() const {
  switch (kind) {
    case Kind::kHelmholtzSweep:
      return !k0_file.empty() &&
             std::holds_alternative<SparseMatrix<Complex>>(
                 read_matrix_market_any(k0_file));
    case Kind::kShiftedPair: {
      for (const Complex& z : shifts) {
        if (z.imag() != 0.0) return true;
      }
      for (const auto* p : {&stiffness_file, &mass_file}) {
        if (!p->empty() && std::holds_alternative<SparseMatrix<Complex>>(
                               read_matrix_market_any(*p))) {
          return true;
        }
      }
      return false;
    }
    case Kind::kMatrixFiles:
      for (const auto& p : matrix_files) {
        if (std::holds_alternative<SparseMatrix<Complex>>(
                read_matrix_market_any(p))) {
          return true;
        }
      }
      return false;
  }
  return false;
}

template <Scalar T>
SystemSequence<T> materialize(const SequenceSpec& spec) {
  SystemSequence<T> seq;
  std::vector<T> default_rhs;
  switch (spec.kind) {
    case SequenceSpec::Kind::kHelmholtzSweep: {
      SparseMatrix<T> k0;
      if (spec.k0_file.empty()) {
        LaplaceProblem lp = laplace2d_dirichlet(spec.nx, spec.ny);
        k0 = as_field<T>(lp.matrix);
        default_rhs = as_field<T>(lp.rhs);
      } else {
        k0 = load_matrix<T>(spec.k0_file);
        default_rhs.assign(k0.nrows(), T{1});
      }
      if (spec.count == 0) {
        throw Error(ErrorCode::kConfig, "helmholtz sweep needs count >= 1");
      }
      const auto eye = SparseMatrix<T>::identity(k0.nrows());
      seq.matrices.push_back(shifted_combine(T{0}, eye, k0));
      seq.shifts.emplace_back(0.0, 0.0);
      for (std::size_t i = 1; i <= spec.count; ++i) {
        const double s = static_cast<double>(i) * spec.delta_s;
        seq.matrices.push_back(shifted_combine(T{-s}, eye, k0));
        seq.shifts.emplace_back(s, 0.0);
      }
      break;
    }
    case SequenceSpec::Kind::kShiftedPair: {
      if (spec.shifts.empty()) {
        throw Error(ErrorCode::kConfig, "shifted pair needs a nonempty shift list");
      }
      SparseMatrix<T> k;
      SparseMatrix<T> m;
      if (spec.stiffness_file.empty() != spec.mass_file.empty()) {
        throw Error(ErrorCode::kConfig,
                    "stiffness_file and mass_file must be given together");
      }
      if (spec.stiffness_file.empty()) {
        const FemPair pair = fem_pair_2d(
            spec.nx, spec.ny,
            make_conductivity(spec.conductivity),
            spec.fem);
        k = as_field<T>(pair.stiffness);
        m = as_field<T>(pair.mass);
        default_rhs = as_field<T>(point_source_rhs(spec.nx, spec.ny));
      } else {
        k = load_matrix<T>(spec.stiffness_file);
        m = load_matrix<T>(spec.mass_file);
        default_rhs.assign(k.nrows(), T{});
        if (!default_rhs.empty()) default_rhs[k.nrows() / 2] = T{1};
      }
      for (const Complex& z : spec.shifts) {
        T alpha;
        if constexpr (is_complex_v<T>) {
          alpha = z;
        } else {
          if (z.imag() != 0.0) {
            throw Error(ErrorCode::kConfig, "complex shift in a real sequence");
          }
          alpha = z.real();
        }
        seq.matrices.push_back(shifted_combine(alpha, m, k));
        seq.shifts.push_back(z);
      }
      break;
    }
    case SequenceSpec::Kind::kMatrixFiles: {
      if (spec.matrix_files.empty()) {
        throw Error(ErrorCode::kConfig, "matrix_files sequence lists no files");
      }
      for (const auto& p : spec.matrix_files) {
        seq.matrices.push_back(load_matrix<T>(p));
        seq.shifts.emplace_back(0.0, 0.0);
      }
      default_rhs.assign(seq.matrices.front().nrows(), T{1});
      break;
    }
  }
  const std::size_t n = seq.matrices.front().nrows();
  for (const auto& a : seq.matrices) {
    if (a.nrows() != n || a.ncols() != n) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "sequence matrices must be square and of equal size");
    }
  }
  switch (spec.rhs) {
    case SequenceSpec::RhsKind::kDefault:
      seq.rhs = std::move(default_rhs);
      break;
    case SequenceSpec::RhsKind::kOnes:
      seq.rhs.assign(n, T{1});
      break;
    case SequenceSpec::RhsKind::kUnit:
      if (spec.rhs_unit_index >= n) {
        throw Error(ErrorCode::kConfig, "rhs unit index out of range");
      }
      seq.rhs.assign(n, T{});
      seq.rhs[spec.rhs_unit_index] = T{1};
      break;
    case SequenceSpec::RhsKind::kFile:
      seq.rhs = read_vector_market<T>(spec.rhs_file);
      break;
  }
  if (seq.rhs.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "right-hand side length does not match the system size");
  }
  return seq;
}

const char* to_string(PrecEvent e) {
  switch (e) {
    case PrecEvent::kRecomputePrec:
      return "prec";
    case PrecEvent::kComputeSam:
      return "sam";
    case PrecEvent::kReuse:
      return "reuse";
    case PrecEvent::kFactorFailed:
      return "prec_failed";
  }
  return "?";
}

void SequenceReport::sum_totals() {
  total_prec_seconds = 0.0;
  total_gmres_seconds = 0.0;
  total_iterations = 0;
  for (const auto& r : rows) {
    total_prec_seconds += r.prec_seconds;
    total_gmres_seconds += r.gmres_seconds;
    total_iterations += r.iterations;
  }
}

template <Scalar T>
SequenceReport run_sequence(const SystemSequence<T>& sequence,
                            const RunConfig& config) {
  config.strategy.validate();
  config.ilutp.validate();
  config.gmres.validate();
  const auto run_start = Clock::now();

  SequenceReport report;
  std::shared_ptr<const SparseMatrix<T>> reference;
  OperatorPtr<T> reference_prec;
  OperatorPtr<T> current;
  std::optional<SparsityPattern> pattern;
  std::optional<SamPlan> cached_plan;

  SamOptions sam_options;
  sam_options.workers = config.pattern.workers;

  for (std::size_t k = 0; k < sequence.matrices.size(); ++k) {
    const SparseMatrix<T>& a = sequence.matrices[k];
    SystemRow row;
    row.index = k;
    row.shift = sequence.shifts[k];

    const auto t0 = Clock::now();
    switch (config.strategy.action_at(k)) {
      case PrecAction::kRecomputePrec:
        try {
          auto factors = std::make_shared<const IlutpFactors<T>>(
              ilutp_factor(a, config.ilutp));
          reference = std::make_shared<const SparseMatrix<T>>(a);
          reference_prec = std::make_shared<IlutpOperator<T>>(factors);
          current = reference_prec;
          pattern.reset();
          cached_plan.reset();
          row.event = PrecEvent::kRecomputePrec;
        } catch (const FactorizationError& e) {
          if (config.on_failure == FailurePolicy::kAbort) throw;
          row.event = PrecEvent::kFactorFailed;
          row.note = e.what();
        }
        break;
      case PrecAction::kComputeSam: {
        if (!reference) {
          row.event = PrecEvent::kReuse;
          row.note = "no reference preconditioner; map skipped";
          break;
        }
        if (!pattern) pattern = resolve_pattern(config.pattern, *reference);
        // One plan serves every system with the planned structure.
        if (!cached_plan || !(pattern_of(a) == cached_plan->matrix_structure)) {
          cached_plan = plan(*pattern, a, *reference,
                             config.pattern.include_rhs_rows);
        }
        SamMap<T> m = compute_map(a, *reference, *cached_plan, sam_options);
        row.sam_rel_residual = m.rel_residual;
        current = std::make_shared<PreconditionerChain<T>>(
            compose(std::move(m.map), reference_prec));
        row.event = PrecEvent::kComputeSam;
        break;
      }
      case PrecAction::kReuse:
        row.event = PrecEvent::kReuse;
        break;
    }
    row.prec_seconds = seconds_since(t0);

    const MatrixOperator<T> op(std::make_shared<const SparseMatrix<T>>(a));
    GmresResult<T> res =
        gmres<T>(op, sequence.rhs, current.get(), {}, config.gmres);
    row.gmres_seconds = res.report.wall_seconds;
    row.iterations = res.report.iterations;
    row.converged = res.report.converged;
    row.final_rel_residual = res.report.final_rel_residual;
    report.rows.push_back(std::move(row));
  }
  report.sum_totals();
  report.total_wall_seconds = seconds_since(run_start);
  return report;
}

SequenceReport run_sequence(const RunConfig& config) {
  if (config.sequence.is_complex()) {
    return run_sequence(materialize<Complex>(config.sequence), config);
  }
  return run_sequence(materialize<double>(config.sequence), config);
}

std::string render_report(const SequenceReport& report, ReportFormat format) {
  std::ostringstream os;
  if (format == ReportFormat::kCsv) {
    os << "index,shift_re,shift_im,prec_event,prec_seconds,sam_rel_residual,"
          "gmres_seconds,iterations,converged,final_rel_residual\n";
    for (const auto& r : report.rows) {
      os << r.index << ',' << fmt(r.shift.real()) << ',' << fmt(r.shift.imag())
         << ',' << to_string(r.event) << ',' << fmt(r.prec_seconds) << ','
         << (r.sam_rel_residual ? fmt(*r.sam_rel_residual) : std::string())
         << ',' << fmt(r.gmres_seconds) << ',' << r.iterations << ','
         << (r.converged ? "true" : "false") << ','
         << fmt(r.final_rel_residual) << '\n';
    }
    os << "total,,,," << fmt(report.total_prec_seconds) << ",,"
       << fmt(report.total_gmres_seconds) << ',' << report.total_iterations
       << ",,\n";
    return os.str();
  }
  os << "| Index | Shift | Event | Prec (s) | SAM rel. res. | GMRES (s) | Iter "
        "| Converged | Rel. res. |\n";
  os << "|---:|---|---|---:|---:|---:|---:|:---:|---:|\n";
  for (const auto& r : report.rows) {
    std::ostringstream shift;
    shift << fmt_short(r.shift.real(), 6);
    if (r.shift.imag() != 0.0) {
      shift << (r.shift.imag() < 0 ? " - " : " + ")
            << fmt_short(std::abs(r.shift.imag()), 6) << "i";
    }
    os << "| " << r.index << " | " << shift.str() << " | "
       << to_string(r.event) << " | " << fmt_short(r.prec_seconds, 4) << " | "
       << (r.sam_rel_residual ? fmt_short(*r.sam_rel_residual, 4) : "-")
       << " | " << fmt_short(r.gmres_seconds, 4) << " | " << r.iterations
       << " | " << (r.converged ? "yes" : "no") << " | "
       << fmt_short(r.final_rel_residual, 3) << " |\n";
  }
  os << "| **Totals** | | | " << fmt_short(report.total_prec_seconds, 4)
     << " | | " << fmt_short(report.total_gmres_seconds, 4) << " | "
     << report.total_iterations << " | | |\n";
  return os.str();
}

SequenceReport parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto fail = [](const std::string& why) {
    return Error(ErrorCode::kParse, "report CSV: " + why);
  };
  if (!std::getline(in, line)) throw fail("missing header");
  SequenceReport report;
  bool saw_totals = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 10) throw fail("expected 10 fields in '" + line + "'");
    try {
      if (f[0] == "total") {
        report.total_prec_seconds = std::stod(f[4]);
        report.total_gmres_seconds = std::stod(f[6]);
        report.total_iterations = std::stoull(f[7]);
        saw_totals = true;
        continue;
      }
      SystemRow r;
      r.index = std::stoull(f[0]);
      r.shift = Complex(std::stod(f[1]), std::stod(f[2]));
      if (f[3] == "prec") {
        r.event = PrecEvent::kRecomputePrec;
      } else if (f[3] == "sam") {
        r.event = PrecEvent::kComputeSam;
      } else if (f[3] == "reuse") {
        r.event = PrecEvent::kReuse;
      } else if (f[3] == "prec_failed") {
        r.event = PrecEvent::kFactorFailed;
      } else {
        throw fail("unknown event '" + f[3] + "'");
      }
      r.prec_seconds = std::stod(f[4]);
      if (!f[5].empty()) r.sam_rel_residual = std::stod(f[5]);
      r.gmres_seconds = std::stod(f[6]);
      r.iterations = std::stoull(f[7]);
      r.converged = f[8] == "true";
      r.final_rel_residual = std::stod(f[9]);
      report.rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw fail("bad number in '" + line + "'");
    }
  }
  if (!saw_totals) throw fail("missing totals row");
  return report;
}

#define SAMKIT_INSTANTIATE(T)                                                  \
  template SparsityPattern resolve_pattern<T>(const PatternChoice&,            \
                                              const SparseMatrix<T>&);         \
  template SystemSequence<T> materialize<T>(const SequenceSpec&);              \
  template SequenceReport run_sequence<T>(const SystemSequence<T>&,            \
                                          const RunConfig&);

SAMKIT_INSTANTIATE(double)
SAMKIT_INSTANTIATE(Complex)

#undef SAMKIT_INSTANTIATE

}  // namespace samkit
