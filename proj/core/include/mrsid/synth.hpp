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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mrsid/data_archive.hpp"
#include "mrsid/lti_model.hpp"
#include "mrsid/rng.hpp"

namespace mrsid {

enum class InputLaw { uniform, gaussian, constant, sinusoid };

struct InputSpec {
  InputLaw law = InputLaw::uniform;
  double low = 0.0;         // uniform
  double high = 1.0;        // uniform
  double sigma = 1.0;       // gaussian
  double value = 1.0;       // constant
  double amplitude = 1.0;   // sinusoid
  double frequency = 0.05;  // sinusoid, cycles per sample
  double phase = 0.0;       // sinusoid, radians
};

/// Recipe for a synthetic archive: one simulated record per entry of
/// record_lengths.
struct GeneratorSpec {
  GeneratorSpec(StateSpaceModel m, std::vector<Index> lengths)
      : model(std::move(m)), record_lengths(std::move(lengths)) {}

  StateSpaceModel model;
  std::vector<Index> record_lengths;
  /// Record ids; defaults to "1", "2", ... when empty.
  std::vector<std::string> record_ids;
  /// Per-record initial states; an empty vector or a nullopt entry draws the
  /// state uniformly from [-random_state_scale, random_state_scale]^n.
  std::vector<std::optional<Vector>> initial_states;
  double random_state_scale = 1.0;
  InputSpec input;
  double output_noise_sigma = 0.0;
  std::uint64_t seed = 0;
  /// Gap in samples inserted between consecutive records' time stamps.
  Index record_gap = 1;
  /// Optional per-record, per-channel input gains (length m); nullopt or an
  /// empty vector means unit gains. Samples are drawn first, then scaled.
  std::vector<std::optional<Vector>> input_scales;

  /// Throws std::invalid_argument / DimensionError on malformed specs.
  void validate() const;
};

struct GeneratedArchive {
  Archive archive;
  /// True initial state of each record, random draws resolved.
  std::vector<Vector> initial_states;
};

/// Deterministic in spec.seed. Per record, in archive order, the random
/// stream is consumed as: initial state (if random, n uniforms), inputs
/// (time-major, m values per sample), output noise (time-major, p gaussians
/// per sample, only when sigma > 0).
GeneratedArchive generate(const GeneratorSpec& spec);

/// Random model with spectral radius in [0.5, max_radius], gaussian B, C, D,
/// and well-conditioned observability and controllability matrices.
StateSpaceModel random_stable_model(int n, int m, int p, Rng& rng, double max_radius = 0.95);

}  // namespace mrsid
