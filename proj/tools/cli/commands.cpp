// Copyright 2026 The mrsid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mrsid/mrsid.hpp"

namespace mrsid::cli {
namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options shared by the data-driven subcommands.
struct Common {
  std::string archive;
  int ell = 0;
  int order = 0;
  std::optional<int> m;
  std::optional<int> p;
  bool center = false;
  std::string rank_mode = "threshold";
  double rank_tol = 1e-8;
  double abs_tol = 0.0;
  double gap_ratio = 10.0;
  std::optional<int> known_lag;
  Index stride = 1;
  std::string select;
  bool greedy = false;
  bool json = false;

  RankConfig rank() const {
    RankConfig cfg;
    cfg.mode = rank_mode == "gap" ? RankMode::gap : RankMode::threshold;
    cfg.rel_tol = rank_tol;
    cfg.abs_tol = abs_tol;
    cfg.gap_ratio = gap_ratio;
    cfg.known_lag = known_lag;
    return cfg;
  }
};

void add_archive_options(CLI::App* sub, Common& c) {
  sub->add_option("--archive", c.archive, "Archive CSV (t,seg,u1..,y1..)")->required();
  sub->add_option("--inputs", c.m, "Input channel count (default: from header)");
  sub->add_option("--outputs", c.p, "Output channel count (default: from header)");
  sub->add_flag("--center", c.center, "Subtract per-channel means");
}

void add_rank_options(CLI::App* sub, Common& c, bool with_selection) {
  sub->add_option("--ell", c.ell, "Block depth")->required()->check(CLI::PositiveNumber);
  sub->add_option("--order", c.order, "State dimension n")->required()->check(CLI::PositiveNumber);
  sub->add_option("--rank-mode", c.rank_mode, "threshold | gap")
      ->check(CLI::IsMember({"threshold", "gap"}));
  sub->add_option("--rank-tol", c.rank_tol, "Relative singular-value tolerance");
  sub->add_option("--abs-tol", c.abs_tol, "Absolute singular-value floor");
  sub->add_option("--gap-ratio", c.gap_ratio, "Minimum ratio for gap mode");
  sub->add_option("--known-lag", c.known_lag, "Known maximal lag (replaces ell > n)");
  sub->add_option("--stride", c.stride, "Column stride for automatic windowing")
      ->check(CLI::PositiveNumber);
  if (with_selection) {
    auto* sel = sub->add_option("--select", c.select, "Column selection file");
    auto* gr = sub->add_flag("--greedy", c.greedy, "Choose records greedily");
    sel->excludes(gr);
    gr->excludes(sel);
  }
}

Archive load_archive(const Common& c) {
  int m = 0;
  int p = 0;
  if (c.m && c.p) {
    m = *c.m;
    p = *c.p;
  } else {
    const auto counts = csv_channel_counts(c.archive);
    m = c.m.value_or(counts.first);
    p = c.p.value_or(counts.second);
  }
  return load_archive_csv(c.archive, m, p, CsvOptions{c.center});
}

void check_lag(const Common& c) {
  const RankConfig cfg = c.rank();
  cfg.validate();
  require_lag_hypothesis(c.ell, c.order, cfg);
}

struct Chosen {
  ColumnSelection selection;
  std::optional<GreedyResult> greedy;
};

Chosen choose_columns(const Archive& archive, const Common& c) {
  if (!c.select.empty()) {
    return {load_selection(c.select), std::nullopt};
  }
  if (c.greedy) {
    GreedyResult g = greedy_select(archive, c.order, c.ell, c.rank(), c.stride);
    ColumnSelection sel = g.selection;
    return {std::move(sel), std::move(g)};
  }
  return {full_windowing(archive, c.ell, c.stride), std::nullopt};
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

void print_spectrum(std::ostream& out, const char* label, const Vector& sv, Index rank) {
  out << label << " (rank " << rank << "):";
  for (Index i = 0; i < sv.size(); ++i) {
    out << (i == rank ? " |" : "") << ' ' << fmt(sv(i), 4);
  }
  out << '\n';
}

void print_report(std::ostream& out, const IdentifiabilityReport& r) {
  out << "columns j = " << r.columns << ", ell = " << r.ell << ", n = " << r.n << '\n';
  print_spectrum(out, "sv(U)", r.sv_U, r.rank_U);
  print_spectrum(out, "sv([U;Y])", r.sv_W, r.rank_W);
  out << "rank U      = " << r.rank_U << " (need " << r.required_rank_U << ") "
      << (r.input_rank_ok ? "ok" : "FAIL") << '\n';
  out << "rank [U;Y]  = " << r.rank_W << " (need " << r.required_rank_W << ") "
      << (r.joint_rank_ok ? "ok" : "FAIL") << '\n';
  out << "columns     = " << r.columns << " (need >= " << r.required_rank_W << ") "
      << (r.column_feasible ? "ok" : "FAIL") << '\n';
  out << "verdict: " << (r.pass ? "identifiable" : "not identifiable") << '\n';
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw DataError("cannot write " + path.string());
  }
  f << text;
  if (!f) {
    throw DataError("write failed for " + path.string());
  }
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path stem = out;
  stem.replace_extension();
  return fs::path(stem.string() + suffix);
}

// --- subcommands -----------------------------------------------------------

int cmd_generate(const std::string& spec_path, const std::string& out_path,
                 std::optional<std::uint64_t> seed, std::ostream& out) {
  GeneratorSpec spec = load_generator_spec(spec_path);
  if (seed) {
    spec.seed = *seed;
  }
  const GeneratedArchive g = generate(spec);
  write_archive_csv(fs::path(out_path), g.archive);
  out << "wrote " << g.archive.size() << " records (m = " << g.archive.m()
      << ", p = " << g.archive.p() << ") to " << out_path << '\n';
  return kOk;
}

int cmd_scan(const Common& c, std::ostream& out) {
  check_lag(c);
  const Archive archive = load_archive(c);
  const RankConfig cfg = c.rank();
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  if (!c.json) {
    out << std::left << std::setw(10) << "record" << std::setw(10) << "length" << std::setw(10)
        << "windows" << std::setw(8) << "short" << std::setw(14) << "standalone"
        << "excitation\n";
  }
  for (const Record& rec : archive.records()) {
    const bool is_short = rec.length() < c.ell;
    const Index windows = is_short ? 0 : (rec.length() - c.ell) / c.stride + 1;
    bool standalone = false;
    std::optional<bool> exciting;
    if (!is_short) {
      ColumnSelection sel{{SelectionEntry{rec.id, 0, windows, c.stride}}};
      Archive single(archive.m(), archive.p());
      single.add(rec);
      standalone = check_identifiability(build_multirecord(single, sel, c.ell), c.order, cfg).pass;
    }
    const Index depth = c.ell + c.order;
    if (rec.length() >= archive.m() * depth + depth - 1) {
      exciting = is_persistently_exciting(rec, c.ell, c.order, cfg);
    }
    if (c.json) {
      nlohmann::ordered_json row;
      row["id"] = rec.id;
      row["start_time"] = rec.start_time;
      row["length"] = rec.length();
      row["windows"] = windows;
      row["short"] = is_short;
      row["standalone_identifiable"] = standalone;
      row["persistently_exciting"] = exciting ? nlohmann::ordered_json(*exciting) : nullptr;
      doc.push_back(std::move(row));
    } else {
      out << std::left << std::setw(10) << rec.id << std::setw(10) << rec.length()
          << std::setw(10) << windows << std::setw(8) << (is_short ? "yes" : "no")
          << std::setw(14) << (standalone ? "pass" : "fail")
          << (exciting ? (*exciting ? "yes" : "no") : "n/a") << '\n';
    }
  }
  if (c.json) {
    out << doc.dump(2) << '\n';
  }
  return kOk;
}

void print_greedy(std::ostream& out, const GreedyResult& g) {
  for (const GreedyStep& step : g.history) {
    out << "  record " << step.record_id << ": " << (step.accepted ? "accepted" : "rejected")
        << " (rank U " << step.report.rank_U << ", rank [U;Y] " << step.report.rank_W
        << ", columns " << step.report.columns << ")\n";
  }
}

int cmd_check(const Common& c, const std::string& report_path, std::ostream& out) {
  check_lag(c);
  const Archive archive = load_archive(c);
  const Chosen chosen = choose_columns(archive, c);
  if (chosen.greedy) {
    out << "greedy selection:\n";
    print_greedy(out, *chosen.greedy);
  }
  if (chosen.selection.empty()) {
    out << "verdict: not identifiable (no usable columns)\n";
    return kNotIdentifiable;
  }
  const MultiRecordMatrices data = build_multirecord(archive, chosen.selection, c.ell);
  const IdentifiabilityReport report = check_identifiability(data, c.order, c.rank());
  if (c.json) {
    out << report_to_json(report);
  } else {
    print_report(out, report);
  }
  if (!report_path.empty()) {
    write_file(report_path, report_to_json(report));
  }
  return report.pass ? kOk : kNotIdentifiable;
}

int cmd_select(const Common& c, const std::string& out_path, std::ostream& out) {
  check_lag(c);
  const Archive archive = load_archive(c);
  const GreedyResult g = greedy_select(archive, c.order, c.ell, c.rank(), c.stride);
  print_greedy(out, g);
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) {
      throw DataError("cannot write " + out_path);
    }
    write_selection(f, g.selection);
  } else {
    write_selection(out, g.selection);
  }
  out << "verdict: " << (g.pass ? "identifiable" : "not identifiable") << '\n';
  return g.pass ? kOk : kNotIdentifiable;
}

int cmd_fit(const Common& c, const std::string& out_path, bool force, std::ostream& out,
            std::ostream& err) {
  check_lag(c);
  const Archive archive = load_archive(c);
  const Chosen chosen = choose_columns(archive, c);
  if (chosen.selection.empty()) {
    err << "error: no usable columns in the archive for ell = " << c.ell << '\n';
    return kNotIdentifiable;
  }
  FitOptions opts;
  opts.rank = c.rank();
  opts.force = force;
  const EstimationResult result = fit(archive, chosen.selection, c.ell, c.order, opts);

  const std::string model_json = estimation_to_json(result);
  write_file(out_path, model_json);
  const auto parsed = nlohmann::ordered_json::parse(model_json);
  write_file(sibling(out_path, ".diagnostics.json"), parsed.at("diagnostics").dump(2) + "\n");

  std::ostringstream csv;
  csv << std::setprecision(17) << "matrix,index,value\n";
  const auto dump = [&csv](const char* name, const Vector& sv) {
    for (Index i = 0; i < sv.size(); ++i) {
      csv << name << ',' << i + 1 << ',' << sv(i) << '\n';
    }
  };
  dump("U", result.identifiability.sv_U);
  dump("W", result.identifiability.sv_W);
  dump("projected", result.sv_projected);
  dump("upsilon", result.upsilon_singular_values);
  write_file(sibling(out_path, ".sv.csv"), csv.str());

  out << "estimated n = " << c.order << " model from " << result.identifiability.columns
      << " columns; regression " << result.upsilon_rows << " x " << result.upsilon_cols
      << ", spectral radius " << fmt(result.spectral_radius) << '\n';
  for (const std::string& w : result.warnings) {
    out << "warning: " << w << '\n';
  }
  out << "wrote " << out_path << '\n';
  return kOk;
}

int cmd_validate(const std::vector<std::string>& model_paths, const Common& c,
                 const std::string& record_id, std::optional<Index> horizon,
                 std::optional<Index> state_samples, const std::string& truth_path,
                 std::ostream& out) {
  const Archive archive = load_archive(c);
  const Record& rec = archive.record(record_id);
  std::optional<StateSpaceModel> truth;
  if (!truth_path.empty()) {
    truth = load_model_json(truth_path).model;
  }
  ValidationOptions vopts;
  vopts.horizon = horizon;
  vopts.state_fit_samples = state_samples;

  std::vector<ValidationReport> reports;
  for (const std::string& path : model_paths) {
    const ModelDocument doc = load_model_json(path);
    int ell = c.ell;
    if (ell <= 0) {
      if (!doc.ell) {
        throw UsageError(path + " records no block depth; pass --ell");
      }
      ell = *doc.ell;
    }
    ValidationReport r = predict_validate(doc.model, ell, rec, vopts);
    if (truth) {
      r.markov_distance = markov_distance(*truth, doc.model);
    }
    reports.push_back(std::move(r));
  }

  if (c.json) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      auto row = nlohmann::ordered_json::parse(validation_to_json(reports[i]));
      row["model"] = model_paths[i];
      doc.push_back(std::move(row));
    }
    out << doc.dump(2) << '\n';
    return kOk;
  }
  out << "validation record " << rec.id << ", horizon " << reports.front().horizon
      << "; RMS prediction error x 1e2\n";
  out << std::left << std::setw(10) << "output";
  for (const std::string& path : model_paths) {
    out << std::setw(16) << fs::path(path).filename().string();
  }
  out << '\n';
  const Index p = archive.p();
  for (Index k = 0; k < p; ++k) {
    out << std::setw(10) << ("y" + std::to_string(k + 1));
    for (const ValidationReport& r : reports) {
      out << std::setw(16) << fmt(100.0 * r.per_channel_rms(k), 5);
    }
    out << '\n';
  }
  if (truth) {
    out << std::setw(10) << "markov";
    for (const ValidationReport& r : reports) {
      out << std::setw(16) << fmt(*r.markov_distance, 5);
    }
    out << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-record subspace identification of LTI systems", "mrsid"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mrsid 0.1.0");

  std::string spec_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  auto* gen = app.add_subcommand("generate", "Simulate a synthetic archive from a spec");
  gen->add_option("--spec", spec_path, "Generator spec JSON")->required();
  gen->add_option("--out", out_path, "Archive CSV to write")->required();
  gen->add_option("--seed", seed, "Override the spec's seed");

  Common c;
  std::string report_path;
  bool force = false;

  auto* scan = app.add_subcommand("scan", "Per-record lengths and standalone verdicts");
  add_archive_options(scan, c);
  add_rank_options(scan, c, false);
  scan->add_flag("--json", c.json, "Emit JSON");

  auto* check = app.add_subcommand("check", "Run the identifiability test");
  add_archive_options(check, c);
  add_rank_options(check, c, true);
  check->add_flag("--json", c.json, "Emit the report as JSON");
  check->add_option("--report", report_path, "Also write the report JSON here");

  auto* sel = app.add_subcommand("select", "Greedy record selection");
  add_archive_options(sel, c);
  add_rank_options(sel, c, false);
  sel->add_option("--out", out_path, "Selection file to write (default: stdout)");

  auto* fitc = app.add_subcommand("fit", "Estimate (A, B, C, D) and initial states");
  add_archive_options(fitc, c);
  add_rank_options(fitc, c, true);
  fitc->add_option("--out", out_path, "Model JSON to write")->required();
  fitc->add_flag("--force", force, "Estimate even if the identifiability test fails");

  std::vector<std::string> model_paths;
  std::string record_id;
  std::string truth_path;
  std::optional<Index> horizon;
  std::optional<Index> state_samples;
  auto* val = app.add_subcommand("validate", "Prediction error on a held-out record");
  add_archive_options(val, c);
  val->add_option("--model", model_paths, "Model JSON (repeatable)")->required();
  val->add_option("--record", record_id, "Validation record id")->required();
  val->add_option("--ell", c.ell, "Block depth (default: from the model file)");
  val->add_option("--horizon", horizon, "Samples to evaluate")->check(CLI::PositiveNumber);
  val->add_option("--state-samples", state_samples, "Samples used to fit the initial state")
      ->check(CLI::PositiveNumber);
  val->add_option("--truth", truth_path, "True model JSON; adds Markov distances");
  val->add_flag("--json", c.json, "Emit JSON");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  if (!argv_rev.empty()) {
    argv_rev.pop_back();  // program name
  }
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*gen) return cmd_generate(spec_path, out_path, seed, out);
    if (*scan) return cmd_scan(c, out);
    if (*check) return cmd_check(c, report_path, out);
    if (*sel) return cmd_select(c, out_path, out);
    if (*fitc) return cmd_fit(c, out_path, force, out, err);
    if (*val) return cmd_validate(model_paths, c, record_id, horizon, state_samples, truth_path, out);
  } catch (const IdentifiabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kNotIdentifiable;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace mrsid::cli
