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

#include "mrsid/serialization.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mrsid/errors.hpp"

namespace mrsid {
namespace {

using json = nlohmann::ordered_json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      row.push_back(m(i, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i));
  }
  return out;
}

/// Non-finite diagnostics (an infinite condition number) serialize as null.
json number_to_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double as_number(const json& j, const std::string& what) {
  if (!j.is_number()) {
    throw DataError(what + ": expected a number");
  }
  return j.get<double>();
}

Matrix matrix_from_json(const json& j, Index rows, Index cols, const std::string& what) {
  Matrix out(rows, cols);
  if (j.is_number()) {
    if (rows != 1 || cols != 1) {
      throw DataError(what + ": scalar given for a " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " matrix");
    }
    out(0, 0) = j.get<double>();
    return out;
  }
  if (!j.is_array()) {
    throw DataError(what + ": expected an array");
  }
  const bool nested = !j.empty() && j.front().is_array();
  if (nested) {
    if (static_cast<Index>(j.size()) != rows) {
      throw DataError(what + ": expected " + std::to_string(rows) + " rows, got " +
                      std::to_string(j.size()));
    }
    for (Index r = 0; r < rows; ++r) {
      const json& row = j[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
        throw DataError(what + ": row " + std::to_string(r) + " must have " +
                        std::to_string(cols) + " entries");
      }
      for (Index c = 0; c < cols; ++c) {
        out(r, c) = as_number(row[static_cast<std::size_t>(c)], what);
      }
    }
    return out;
  }
  if (static_cast<Index>(j.size()) != rows * cols) {
    throw DataError(what + ": expected " + std::to_string(rows * cols) + " values, got " +
                    std::to_string(j.size()));
  }
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      out(r, c) = as_number(j[static_cast<std::size_t>(r * cols + c)], what);
    }
  }
  return out;
}

Vector vector_from_json(const json& j, Index size, const std::string& what) {
  if (!j.is_array() || static_cast<Index>(j.size()) != size) {
    throw DataError(what + ": expected an array of " + std::to_string(size) + " numbers");
  }
  Vector out(size);
  for (Index i = 0; i < size; ++i) {
    out(i) = as_number(j[static_cast<std::size_t>(i)], what);
  }
  return out;
}

int positive_int(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<int>() < 1) {
    throw DataError(std::string("model document: '") + key + "' must be a positive integer");
  }
  return doc[key].get<int>();
}

json model_json(const StateSpaceModel& model, const std::vector<NamedState>& states) {
  json doc;
  doc["n"] = model.n();
  doc["m"] = model.m();
  doc["p"] = model.p();
  doc["A"] = matrix_to_json(model.A());
  doc["B"] = matrix_to_json(model.B());
  doc["C"] = matrix_to_json(model.C());
  doc["D"] = matrix_to_json(model.D());
  if (!states.empty()) {
    json arr = json::array();
    for (const auto& s : states) {
      arr.push_back({{"name", s.name}, {"x", vector_to_json(s.x)}});
    }
    doc["initial_states"] = std::move(arr);
  }
  return doc;
}

ModelDocument model_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw DataError("model document must be a JSON object");
  }
  const int n = positive_int(doc, "n");
  const int m = positive_int(doc, "m");
  const int p = positive_int(doc, "p");
  for (const char* key : {"A", "B", "C", "D"}) {
    if (!doc.contains(key)) {
      throw DataError(std::string("model document: missing '") + key + "'");
    }
  }
  ModelDocument out{StateSpaceModel(matrix_from_json(doc["A"], n, n, "A"),
                                    matrix_from_json(doc["B"], n, m, "B"),
                                    matrix_from_json(doc["C"], p, n, "C"),
                                    matrix_from_json(doc["D"], p, m, "D")),
                    {},
                    std::nullopt};
  if (doc.contains("initial_states")) {
    const json& arr = doc["initial_states"];
    if (!arr.is_array()) {
      throw DataError("model document: 'initial_states' must be an array");
    }
    for (const auto& item : arr) {
      if (!item.is_object() || !item.contains("name") || !item["name"].is_string() ||
          !item.contains("x")) {
        throw DataError("model document: initial state entries need 'name' and 'x'");
      }
      out.initial_states.push_back(
          {item["name"].get<std::string>(), vector_from_json(item["x"], n, "initial state")});
    }
  }
  if (doc.contains("diagnostics") && doc["diagnostics"].contains("ell") &&
      doc["diagnostics"]["ell"].is_number_integer()) {
    out.ell = doc["diagnostics"]["ell"].get<int>();
  }
  return out;
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw DataError(what + ": invalid JSON: " + e.what());
  }
}

json report_json(const IdentifiabilityReport& r) {
  json doc;
  doc["ell"] = r.ell;
  doc["n"] = r.n;
  doc["columns"] = r.columns;
  doc["sv_U"] = vector_to_json(r.sv_U);
  doc["sv_W"] = vector_to_json(r.sv_W);
  doc["rank_U"] = r.rank_U;
  doc["rank_W"] = r.rank_W;
  doc["required_rank_U"] = r.required_rank_U;
  doc["required_rank_W"] = r.required_rank_W;
  doc["input_rank_ok"] = r.input_rank_ok;
  doc["joint_rank_ok"] = r.joint_rank_ok;
  doc["column_feasible"] = r.column_feasible;
  doc["pass"] = r.pass;
  return doc;
}

const char* law_name(InputLaw law) {
  switch (law) {
    case InputLaw::uniform:
      return "uniform";
    case InputLaw::gaussian:
      return "gaussian";
    case InputLaw::constant:
      return "constant";
    case InputLaw::sinusoid:
      return "sinusoid";
  }
  return "uniform";
}

double number_or(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  return as_number(obj[key], std::string("generator spec: '") + key + "'");
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string model_to_json(const StateSpaceModel& model,
                          const std::vector<NamedState>& initial_states) {
  return model_json(model, initial_states).dump(2) + "\n";
}

ModelDocument parse_model_json(std::string_view text) {
  return model_from_json(parse_json(text, "model document"));
}

ModelDocument load_model_json(const std::filesystem::path& path) {
  return parse_model_json(read_text_file(path));
}

std::string estimation_to_json(const EstimationResult& r) {
  std::vector<NamedState> named;
  json window_states = json::array();
  for (const auto& s : r.initial_states) {
    named.push_back({s.record_id + "@" + std::to_string(s.offset), s.x});
    window_states.push_back(
        {{"record_id", s.record_id}, {"offset", s.offset}, {"x", vector_to_json(s.x)}});
  }
  json doc = model_json(r.model, named);

  json diag;
  diag["ell"] = r.ell;
  diag["identifiability"] = report_json(r.identifiability);
  diag["forced"] = r.forced;
  diag["sv_projected"] = vector_to_json(r.sv_projected);
  diag["upsilon_shape"] = {r.upsilon_rows, r.upsilon_cols};
  diag["upsilon_singular_values"] = vector_to_json(r.upsilon_singular_values);
  diag["upsilon_rank"] = r.upsilon_rank;
  diag["upsilon_condition"] = number_to_json(r.upsilon_condition);
  diag["residual_norm"] = number_to_json(r.residual_norm);
  diag["spectral_radius"] = number_to_json(r.spectral_radius);
  diag["stable"] = r.stable;
  diag["window_initial_states"] = std::move(window_states);
  diag["warnings"] = r.warnings;
  doc["diagnostics"] = std::move(diag);
  return doc.dump(2) + "\n";
}

std::string report_to_json(const IdentifiabilityReport& report) {
  return report_json(report).dump(2) + "\n";
}

std::string validation_to_json(const ValidationReport& report) {
  json doc;
  doc["validation_record_id"] = report.validation_record_id;
  doc["horizon"] = report.horizon;
  doc["per_channel_rms"] = vector_to_json(report.per_channel_rms);
  doc["estimated_validation_x0"] = vector_to_json(report.estimated_validation_x0);
  doc["markov_distance"] =
      report.markov_distance ? number_to_json(*report.markov_distance) : json(nullptr);
  return doc.dump(2) + "\n";
}

GeneratorSpec parse_generator_spec(std::string_view text) {
  const json doc = parse_json(text, "generator spec");
  if (!doc.is_object() || !doc.contains("model") || !doc.contains("record_lengths")) {
    throw DataError("generator spec needs 'model' and 'record_lengths'");
  }
  ModelDocument md = model_from_json(doc["model"]);
  GeneratorSpec spec(std::move(md.model), {});
  const int n = spec.model.n();

  if (!doc["record_lengths"].is_array()) {
    throw DataError("generator spec: 'record_lengths' must be an array");
  }
  for (const auto& len : doc["record_lengths"]) {
    if (!len.is_number_integer()) {
      throw DataError("generator spec: record lengths must be integers");
    }
    spec.record_lengths.push_back(len.get<Index>());
  }
  if (doc.contains("record_ids")) {
    for (const auto& id : doc["record_ids"]) {
      spec.record_ids.push_back(id.is_string() ? id.get<std::string>() : id.dump());
    }
  }
  if (doc.contains("initial_states") && doc["initial_states"].is_array()) {
    for (const auto& x : doc["initial_states"]) {
      if (x.is_null()) {
        spec.initial_states.emplace_back(std::nullopt);
      } else {
        spec.initial_states.emplace_back(vector_from_json(x, n, "generator initial state"));
      }
    }
  } else if (doc.contains("initial_states") && doc["initial_states"] != "random") {
    throw DataError("generator spec: 'initial_states' must be an array or \"random\"");
  }
  spec.random_state_scale = number_or(doc, "random_state_scale", 1.0);
  spec.output_noise_sigma = number_or(doc, "output_noise_sigma", 0.0);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
      throw DataError("generator spec: 'seed' must be a nonnegative integer");
    }
    spec.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("record_gap")) {
    spec.record_gap = doc["record_gap"].get<Index>();
  }
  if (doc.contains("input_scales")) {
    if (!doc["input_scales"].is_array()) {
      throw DataError("generator spec: 'input_scales' must be an array");
    }
    for (const auto& g : doc["input_scales"]) {
      if (g.is_null()) {
        spec.input_scales.emplace_back(std::nullopt);
      } else {
        spec.input_scales.emplace_back(vector_from_json(g, spec.model.m(), "input scale"));
      }
    }
  }
  if (doc.contains("input")) {
    const json& in = doc["input"];
    const std::string law = in.value("law", std::string("uniform"));
    if (law == "uniform") {
      spec.input.law = InputLaw::uniform;
    } else if (law == "gaussian") {
      spec.input.law = InputLaw::gaussian;
    } else if (law == "constant") {
      spec.input.law = InputLaw::constant;
    } else if (law == "sinusoid") {
      spec.input.law = InputLaw::sinusoid;
    } else {
      throw DataError("generator spec: unknown input law '" + law + "'");
    }
    spec.input.low = number_or(in, "low", spec.input.low);
    spec.input.high = number_or(in, "high", spec.input.high);
    spec.input.sigma = number_or(in, "sigma", spec.input.sigma);
    spec.input.value = number_or(in, "value", spec.input.value);
    spec.input.amplitude = number_or(in, "amplitude", spec.input.amplitude);
    spec.input.frequency = number_or(in, "frequency", spec.input.frequency);
    spec.input.phase = number_or(in, "phase", spec.input.phase);
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("generator spec: ") + e.what());
  }
  return spec;
}

GeneratorSpec load_generator_spec(const std::filesystem::path& path) {
  return parse_generator_spec(read_text_file(path));
}

std::string generator_spec_to_json(const GeneratorSpec& spec) {
  json doc;
  doc["model"] = model_json(spec.model, {});
  doc["record_lengths"] = spec.record_lengths;
  if (!spec.record_ids.empty()) {
    doc["record_ids"] = spec.record_ids;
  }
  if (spec.initial_states.empty()) {
    doc["initial_states"] = "random";
  } else {
    json arr = json::array();
    for (const auto& x : spec.initial_states) {
      arr.push_back(x ? vector_to_json(*x) : json(nullptr));
    }
    doc["initial_states"] = std::move(arr);
  }
  doc["random_state_scale"] = spec.random_state_scale;
  json in;
  in["law"] = law_name(spec.input.law);
  switch (spec.input.law) {
    case InputLaw::uniform:
      in["low"] = spec.input.low;
      in["high"] = spec.input.high;
      break;
    case InputLaw::gaussian:
      in["sigma"] = spec.input.sigma;
      break;
    case InputLaw::constant:
      in["value"] = spec.input.value;
      break;
    case InputLaw::sinusoid:
      in["amplitude"] = spec.input.amplitude;
      in["frequency"] = spec.input.frequency;
      in["phase"] = spec.input.phase;
      break;
  }
  doc["input"] = std::move(in);
  doc["output_noise_sigma"] = spec.output_noise_sigma;
  doc["seed"] = spec.seed;
  doc["record_gap"] = spec.record_gap;
  if (!spec.input_scales.empty()) {
    json arr = json::array();
    for (const auto& g : spec.input_scales) {
      arr.push_back(g ? vector_to_json(*g) : json(nullptr));
    }
    doc["input_scales"] = std::move(arr);
  }
  return doc.dump(2) + "\n";
}

}  // namespace mrsid
