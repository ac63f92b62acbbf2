// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "samkit/error.hpp"
#include "samkit/harness.hpp"

namespace samkit {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"sequence",
       {"kind", "nx", "ny", "delta_s", "count", "k0_file", "stiffness_file",
        "mass_file", "kappa", "kappa_mean", "kappa_log_std", "kappa_correlation",
        "kappa_seed", "length_x", "length_y", "storage", "shifts",
        "shifts_file", "talbot_nz", "talbot_t", "talbot_sigma", "talbot_mu",
        "talbot_alpha", "talbot_nu", "files", "rhs"}},
      {"strategy", {"kind", "events", "on_factor_failure"}},
      {"ilutp", {"lfil", "droptol", "pivtol"}},
      {"pattern",
       {"kind", "power", "tau", "threshold", "offsets", "file", "workers",
        "include_rhs_rows"}},
      {"gmres", {"restart", "rel_tol", "max_total_iters", "reorthogonalize"}},
  };
  return keys;
}

std::string trim(std::string s) {
  auto notspace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(s);
  while (std::getline(in, cell, sep)) {
    cell = trim(cell);
    if (!cell.empty()) out.push_back(cell);
  }
  return out;
}

Error config_error(const std::string& key, const std::string& why) {
  return Error(ErrorCode::kConfig, key + ": " + why);
}

class Section {
 public:
  Section(const pt::ptree* tree, std::string name)
      : tree_(tree), name_(std::move(name)) {}

  bool has(const std::string& key) const {
    return tree_ != nullptr && tree_->find(key) != tree_->not_found();
  }
  std::string path(const std::string& key) const { return name_ + "." + key; }

  std::string text(const std::string& key) const {
    if (!has(key)) throw config_error(path(key), "missing required key");
    return trim(tree_->get<std::string>(key));
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
  }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return parse_real(path(key), text(key));
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    if (!has(key)) return fallback;
    const std::string v = text(key);
    std::size_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
      throw config_error(path(key), "expected a nonnegative integer, got '" +
                                        v + "'");
    }
    return out;
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = text(key);
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw config_error(path(key), "expected a boolean, got '" + v + "'");
  }

  template <class E>
  E choice(const std::string& key, const std::map<std::string, E>& options,
           std::optional<E> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw config_error(path(key), "missing required key");
    }
    const std::string v = text(key);
    auto it = options.find(v);
    if (it == options.end()) {
      std::string allowed;
      for (const auto& [name, _] : options) {
        allowed += (allowed.empty() ? "" : ", ") + name;
      }
      throw config_error(path(key),
                         "unknown value '" + v + "' (allowed: " + allowed + ")");
    }
    return it->second;
  }

  static double parse_real(const std::string& where, const std::string& v) {
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::logic_error&) {
      throw config_error(where, "expected a number, got '" + v + "'");
    }
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
};

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

Complex parse_shift(const std::string& where, const std::string& entry) {
  std::istringstream in(entry);
  std::string re;
  std::string im;
  std::string extra;
  in >> re >> im >> extra;
  if (!extra.empty() || re.empty()) {
    throw config_error(where, "shift '" + entry + "' is not 're [im]'");
  }
  return {Section::parse_real(where, re),
          im.empty() ? 0.0 : Section::parse_real(where, im)};
}

std::vector<Complex> read_shift_file(const std::string& where,
                                     const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw config_error(where, "cannot open shift file " + p.string());
  std::vector<Complex> out;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == '%') continue;
    out.push_back(parse_shift(where, line));
  }
  return out;
}

void parse_sequence(const Section& s, const std::filesystem::path& base,
                    SequenceSpec& spec) {
  using K = SequenceSpec::Kind;
  spec.kind = s.choice<K>("kind", {{"helmholtz_sweep", K::kHelmholtzSweep},
                                   {"shifted_pair", K::kShiftedPair},
                                   {"matrix_files", K::kMatrixFiles}});
  spec.nx = s.count("nx", spec.nx);
  spec.ny = s.count("ny", spec.ny);
  spec.delta_s = s.real("delta_s", spec.delta_s);
  spec.count = s.count("count", spec.count);
  if (s.has("k0_file")) spec.k0_file = resolve(base, s.text("k0_file"));
  if (s.has("stiffness_file")) {
    spec.stiffness_file = resolve(base, s.text("stiffness_file"));
  }
  if (s.has("mass_file")) spec.mass_file = resolve(base, s.text("mass_file"));

  if (s.has("kappa")) {
    const std::string v = s.text("kappa");
    if (v == "lognormal") {
      spec.conductivity.kind = ConductivitySpec::Kind::kLogNormal;
    } else {
      spec.conductivity.kind = ConductivitySpec::Kind::kConstant;
      spec.conductivity.value = Section::parse_real(s.path("kappa"), v);
    }
  }
  spec.conductivity.value = s.real("kappa_mean", spec.conductivity.value);
  spec.conductivity.log_std = s.real("kappa_log_std", spec.conductivity.log_std);
  spec.conductivity.correlation_length =
      s.real("kappa_correlation", spec.conductivity.correlation_length);
  spec.conductivity.seed = s.count("kappa_seed", spec.conductivity.seed);
  spec.fem.length_x = s.real("length_x", spec.fem.length_x);
  spec.fem.length_y = s.real("length_y", spec.fem.length_y);
  spec.fem.storage = s.real("storage", spec.fem.storage);

  const int shift_sources = int(s.has("shifts")) + int(s.has("shifts_file")) +
                            int(s.has("talbot_nz"));
  if (shift_sources > 1) {
    throw config_error(s.path("shifts"),
                       "give only one of shifts, shifts_file, talbot_nz");
  }
  if (s.has("shifts")) {
    for (const auto& e : split(s.text("shifts"), ',')) {
      spec.shifts.push_back(parse_shift(s.path("shifts"), e));
    }
  } else if (s.has("shifts_file")) {
    spec.shifts = read_shift_file(s.path("shifts_file"),
                                  resolve(base, s.text("shifts_file")));
  } else if (s.has("talbot_nz")) {
    TalbotConstants c;
    c.sigma = s.real("talbot_sigma", c.sigma);
    c.mu = s.real("talbot_mu", c.mu);
    c.alpha = s.real("talbot_alpha", c.alpha);
    c.nu = s.real("talbot_nu", c.nu);
    try {
      spec.shifts = talbot_shifts(s.count("talbot_nz", 0),
                                  s.real("talbot_t", 1.0), c);
    } catch (const Error& e) {
      throw config_error(s.path("talbot_nz"), e.what());
    }
  }
  if (s.has("files")) {
    for (const auto& f : split(s.text("files"), ',')) {
      spec.matrix_files.push_back(resolve(base, f));
    }
  }
  if (s.has("rhs")) {
    const std::string v = s.text("rhs");
    if (v == "default") {
      spec.rhs = SequenceSpec::RhsKind::kDefault;
    } else if (v == "ones") {
      spec.rhs = SequenceSpec::RhsKind::kOnes;
    } else if (v.rfind("unit:", 0) == 0) {
      spec.rhs = SequenceSpec::RhsKind::kUnit;
      try {
        spec.rhs_unit_index = std::stoull(v.substr(5));
      } catch (const std::logic_error&) {
        throw config_error(s.path("rhs"), "bad unit index in '" + v + "'");
      }
    } else if (v.rfind("file:", 0) == 0) {
      spec.rhs = SequenceSpec::RhsKind::kFile;
      spec.rhs_file = resolve(base, trim(v.substr(5)));
    } else {
      throw config_error(s.path("rhs"),
                         "expected default, ones, unit:<i> or file:<path>");
    }
  }

  switch (spec.kind) {
    case K::kShiftedPair:
      if (spec.shifts.empty()) {
        throw config_error(s.path("shifts"),
                           "shifted_pair needs shifts, shifts_file or talbot_nz");
      }
      break;
    case K::kMatrixFiles:
      if (spec.matrix_files.empty()) {
        throw config_error(s.path("files"), "matrix_files needs files");
      }
      break;
    case K::kHelmholtzSweep:
      if (spec.count == 0) throw config_error(s.path("count"), "must be >= 1");
      break;
  }
}

std::vector<std::pair<std::size_t, PrecAction>> parse_events(
    const std::string& where, std::string text) {
  text.erase(std::remove(text.begin(), text.end(), '['), text.end());
  text.erase(std::remove(text.begin(), text.end(), ']'), text.end());
  std::vector<std::pair<std::size_t, PrecAction>> out;
  for (const auto& item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw config_error(where, "event '" + item + "' is not 'index:action'");
    }
    const std::string idx = trim(item.substr(0, colon));
    const std::string act = trim(item.substr(colon + 1));
    std::size_t index = 0;
    auto [p, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), index);
    if (ec != std::errc() || p != idx.data() + idx.size()) {
      throw config_error(where, "bad event index '" + idx + "'");
    }
    PrecAction action;
    if (act == "prec") {
      action = PrecAction::kRecomputePrec;
    } else if (act == "sam") {
      action = PrecAction::kComputeSam;
    } else if (act == "reuse") {
      action = PrecAction::kReuse;
    } else {
      throw config_error(where, "unknown event action '" + act +
                                    "' (allowed: prec, sam, reuse)");
    }
    out.emplace_back(index, action);
  }
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text,
                            const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kConfig, std::string("config syntax: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      if (body.empty()) {
        throw Error(ErrorCode::kConfig,
                    section + ": key outside of any section");
      }
      throw Error(ErrorCode::kConfig, section + ": unknown section");
    }
    for (const auto& [key, _] : body) {
      if (!it->second.count(key)) {
        throw config_error(section + "." + key, "unknown key");
      }
    }
  }
  auto section = [&](const std::string& name) {
    auto it = tree.find(name);
    return Section(it == tree.not_found() ? nullptr : &it->second, name);
  };

  RunConfig cfg;
  const Section seq = section("sequence");
  parse_sequence(seq, base_dir, cfg.sequence);

  const Section st = section("strategy");
  using SK = Strategy::Kind;
  cfg.strategy.kind = st.choice<SK>("kind", {{"recompute_every", SK::kRecomputeEvery},
                                             {"reuse_first", SK::kReuseFirst},
                                             {"sam_every", SK::kSamEvery},
                                             {"events", SK::kEvents}});
  if (st.has("events")) {
    if (cfg.strategy.kind != SK::kEvents) {
      throw config_error(st.path("events"),
                         "event list conflicts with strategy kind '" +
                             st.text("kind") + "'");
    }
    cfg.strategy.events = parse_events(st.path("events"), st.text("events"));
  } else if (cfg.strategy.kind == SK::kEvents) {
    throw config_error(st.path("events"), "strategy kind 'events' needs events");
  }
  try {
    cfg.strategy.validate();
  } catch (const Error& e) {
    throw config_error(st.path("events"), e.what());
  }
  cfg.on_failure = st.choice<FailurePolicy>(
      "on_factor_failure",
      {{"fallback", FailurePolicy::kFallback}, {"abort", FailurePolicy::kAbort}},
      FailurePolicy::kFallback);

  const Section il = section("ilutp");
  cfg.ilutp.lfil = il.count("lfil", cfg.ilutp.lfil);
  cfg.ilutp.droptol = il.real("droptol", cfg.ilutp.droptol);
  cfg.ilutp.pivtol = il.real("pivtol", cfg.ilutp.pivtol);
  try {
    cfg.ilutp.validate();
  } catch (const Error& e) {
    throw config_error("ilutp", e.what());
  }

  const Section pa = section("pattern");
  using PK = PatternChoice::Kind;
  cfg.pattern.kind = pa.choice<PK>(
      "kind",
      {{"reference", PK::kReference},
       {"diagonal", PK::kDiagonal},
       {"tridiagonal", PK::kTridiagonal},
       {"offsets", PK::kOffsets},
       {"power", PK::kPower},
       {"sparsified_power", PK::kSparsifiedPower},
       {"file", PK::kFile}},
      PK::kReference);
  cfg.pattern.power = static_cast<int>(pa.count("power", 2));
  cfg.pattern.tau = pa.real("tau", cfg.pattern.tau);
  cfg.pattern.threshold = pa.choice<ThresholdMode>(
      "threshold",
      {{"relative", ThresholdMode::kRelative},
       {"absolute", ThresholdMode::kAbsolute}},
      ThresholdMode::kRelative);
  if (pa.has("offsets")) {
    for (const auto& o : split(pa.text("offsets"), ',')) {
      try {
        std::size_t used = 0;
        cfg.pattern.offsets.push_back(std::stol(o, &used));
        if (used != o.size()) throw std::invalid_argument(o);
      } catch (const std::logic_error&) {
        throw config_error(pa.path("offsets"), "bad offset '" + o + "'");
      }
    }
  }
  if (cfg.pattern.kind == PK::kOffsets && cfg.pattern.offsets.empty()) {
    throw config_error(pa.path("offsets"), "pattern kind 'offsets' needs offsets");
  }
  if ((cfg.pattern.kind == PK::kPower || cfg.pattern.kind == PK::kSparsifiedPower) &&
      (cfg.pattern.power < 1 || cfg.pattern.power > 5)) {
    throw config_error(pa.path("power"), "must lie in 1..5");
  }
  if (pa.has("file")) cfg.pattern.file = resolve(base_dir, pa.text("file"));
  if (cfg.pattern.kind == PK::kFile && cfg.pattern.file.empty()) {
    throw config_error(pa.path("file"), "pattern kind 'file' needs file");
  }
  cfg.pattern.workers = static_cast<unsigned>(pa.count("workers", 1));
  cfg.pattern.include_rhs_rows = pa.flag("include_rhs_rows", true);

  const Section gm = section("gmres");
  cfg.gmres.max_total_iters = gm.count("max_total_iters", 500);
  const std::string restart = gm.text("restart", "full");
  if (restart == "full") {
    cfg.gmres.restart = cfg.gmres.max_total_iters;
  } else {
    cfg.gmres.restart = gm.count("restart", 0);
  }
  cfg.gmres.rel_tol = gm.real("rel_tol", 1e-10);
  cfg.gmres.reorthogonalize = gm.flag("reorthogonalize", false);
  try {
    cfg.gmres.validate();
  } catch (const Error& e) {
    throw config_error("gmres", e.what());
  }
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path.parent_path());
}

}  // namespace samkit
