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

#include "mrsid/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mrsid/errors.hpp"
#include "mrsid/linalg.hpp"

namespace mrsid {
namespace {

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      out(i, j) = rng.gaussian();
    }
  }
  return out;
}

double input_sample(const InputSpec& in, Index t, Rng& rng) {
  switch (in.law) {
    case InputLaw::uniform:
      return rng.uniform(in.low, in.high);
    case InputLaw::gaussian:
      return rng.gaussian(in.sigma);
    case InputLaw::constant:
      return in.value;
    case InputLaw::sinusoid:
      return in.amplitude * std::sin(2.0 * std::numbers::pi * in.frequency *
                                         static_cast<double>(t) +
                                     in.phase);
  }
  return 0.0;
}

}  // namespace

void GeneratorSpec::validate() const {
  if (record_lengths.empty()) {
    throw std::invalid_argument("generator spec needs at least one record length");
  }
  for (Index len : record_lengths) {
    if (len < 1) {
      throw std::invalid_argument("record lengths must be >= 1");
    }
  }
  if (!record_ids.empty() && record_ids.size() != record_lengths.size()) {
    throw std::invalid_argument("record_ids must match record_lengths in size");
  }
  if (!initial_states.empty() && initial_states.size() != record_lengths.size()) {
    throw std::invalid_argument("initial_states must match record_lengths in size");
  }
  for (const auto& x : initial_states) {
    if (x && x->size() != model.n()) {
      throw DimensionError("generator initial state does not have length n = " +
                           std::to_string(model.n()));
    }
  }
  if (!(output_noise_sigma >= 0.0)) {
    throw std::invalid_argument("output noise sigma must be >= 0");
  }
  if (!(random_state_scale >= 0.0)) {
    throw std::invalid_argument("random state scale must be >= 0");
  }
  if (!input_scales.empty() && input_scales.size() != record_lengths.size()) {
    throw std::invalid_argument("input_scales must match record_lengths in size");
  }
  for (const auto& g : input_scales) {
    if (g && g->size() != model.m()) {
      throw DimensionError("input scale vector does not have length m = " +
                           std::to_string(model.m()));
    }
  }
  if (record_gap < 1) {
    throw std::invalid_argument("record gap must be >= 1");
  }
  if (input.law == InputLaw::gaussian && !(input.sigma >= 0.0)) {
    throw std::invalid_argument("gaussian input sigma must be >= 0");
  }
}

GeneratedArchive generate(const GeneratorSpec& spec) {
  spec.validate();
  const StateSpaceModel& model = spec.model;
  Rng rng(spec.seed);
  GeneratedArchive out{Archive(model.m(), model.p()), {}};

  long long clock = 0;
  for (std::size_t r = 0; r < spec.record_lengths.size(); ++r) {
    const Index len = spec.record_lengths[r];
    Vector x0(model.n());
    if (!spec.initial_states.empty() && spec.initial_states[r]) {
      x0 = *spec.initial_states[r];
    } else {
      for (Index i = 0; i < x0.size(); ++i) {
        x0(i) = rng.uniform(-spec.random_state_scale, spec.random_state_scale);
      }
    }
    Matrix u(model.m(), len);
    for (Index t = 0; t < len; ++t) {
      for (Index k = 0; k < u.rows(); ++k) {
        u(k, t) = input_sample(spec.input, t, rng);
      }
    }
    if (!spec.input_scales.empty() && spec.input_scales[r]) {
      u = spec.input_scales[r]->asDiagonal() * u;
    }
    Trajectory traj = simulate(model, x0, u);
    if (spec.output_noise_sigma > 0.0) {
      for (Index t = 0; t < len; ++t) {
        for (Index k = 0; k < traj.outputs.rows(); ++k) {
          traj.outputs(k, t) += rng.gaussian(spec.output_noise_sigma);
        }
      }
    }
    std::string id = spec.record_ids.empty() ? std::to_string(r + 1) : spec.record_ids[r];
    out.archive.add({std::move(id), clock, std::move(traj.inputs), std::move(traj.outputs)});
    out.initial_states.push_back(std::move(x0));
    clock += len + spec.record_gap;
  }
  return out;
}

StateSpaceModel random_stable_model(int n, int m, int p, Rng& rng, double max_radius) {
  if (n < 1 || m < 1 || p < 1) {
    throw std::invalid_argument("random_stable_model: n, m, p must be >= 1");
  }
  if (!(max_radius > 0.5 && max_radius < 1.0)) {
    throw std::invalid_argument("random_stable_model: max_radius must lie in (0.5, 1)");
  }
  constexpr double kMaxCondition = 1e3;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix a = gaussian_matrix(n, n, rng);
    const double radius = spectral_radius(a);
    const double target = rng.uniform(0.5, max_radius);
    if (radius < 1e-6) {
      continue;
    }
    a *= target / radius;
    Matrix b = gaussian_matrix(n, m, rng);
    Matrix c = gaussian_matrix(p, n, rng);
    Matrix d = gaussian_matrix(p, m, rng);

    StateSpaceModel model(std::move(a), std::move(b), std::move(c), std::move(d));
    const Matrix obs = observability_matrix(model, n);
    Matrix ctrb(n, static_cast<Index>(n) * m);
    Matrix block = model.B();
    for (int k = 0; k < n; ++k) {
      ctrb.middleCols(static_cast<Index>(k) * m, m) = block;
      block = model.A() * block;
    }
    const Vector so = singular_values(obs);
    const Vector sc = singular_values(ctrb);
    if (so.size() >= n && sc.size() >= n && so(0) / so(n - 1) < kMaxCondition &&
        sc(0) / sc(n - 1) < kMaxCondition) {
      return model;
    }
  }
  throw NumericalError("random_stable_model: no well-conditioned minimal model found");
}

}  // namespace mrsid
