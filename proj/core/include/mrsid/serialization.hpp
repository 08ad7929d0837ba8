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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrsid/identifiability.hpp"
#include "mrsid/lti_model.hpp"
#include "mrsid/moesp.hpp"
#include "mrsid/synth.hpp"
#include "mrsid/validation.hpp"

namespace mrsid {

// Model documents are JSON objects:
//
//   { "n": 2, "m": 1, "p": 1,
//     "A": [[0.9, 0.2], [0, 0.8]], "B": [[1], [1]], "C": [[1, 1]], "D": [[1]],
//     "initial_states": [ { "name": "4@0", "x": [-1, -1] } ],   // optional
//     "diagnostics": { "ell": 3, ... } }                         // optional
//
// Matrices are row-major: nested rows, or a flat array of rows*cols values
// (a bare number is accepted for 1x1 blocks).

struct NamedState {
  std::string name;
  Vector x;
};

struct ModelDocument {
  StateSpaceModel model;
  std::vector<NamedState> initial_states;
  /// Block depth recorded by the estimator, when present.
  std::optional<int> ell;
};

std::string model_to_json(const StateSpaceModel& model,
                          const std::vector<NamedState>& initial_states = {});
ModelDocument parse_model_json(std::string_view text);
ModelDocument load_model_json(const std::filesystem::path& path);

/// Model document plus a "diagnostics" block (spectra, condition numbers,
/// identifiability verdicts, per-window initial states keyed by provenance).
std::string estimation_to_json(const EstimationResult& result);

std::string report_to_json(const IdentifiabilityReport& report);
std::string validation_to_json(const ValidationReport& report);

// Generator specs:
//
//   { "model": { ...model document... },
//     "record_lengths": [20, 20, ...],
//     "record_ids": ["1", "2", ...],                       // optional
//     "initial_states": [null, [-1, -1], ...] | "random",  // optional
//     "random_state_scale": 1.0,                           // optional
//     "input": { "law": "uniform", "low": 0, "high": 1 },
//     "output_noise_sigma": 0.0,
//     "seed": 41,
//     "record_gap": 1,                                     // optional
//     "input_scales": [null, [1, 0.1], ...] }              // optional
GeneratorSpec parse_generator_spec(std::string_view text);
GeneratorSpec load_generator_spec(const std::filesystem::path& path);
std::string generator_spec_to_json(const GeneratorSpec& spec);

/// Reads a whole file; throws DataError when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace mrsid
