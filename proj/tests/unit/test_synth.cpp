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

#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace mrsid;

TEST_CASE("rng is a documented mt19937_64 stream") {
  Rng rng(5489);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next();
  CHECK(v == 9981545732273789042ULL);

  Rng a(1), b(1);
  std::mt19937_64 ref(1);
  const std::uint64_t raw = ref();
  CHECK(a.uniform() == static_cast<double>(raw >> 11) * 0x1.0p-53);
  // A gaussian draw consumes two engine outputs.
  b.gaussian();
  ref();
  CHECK(b.next() == ref());
}

TEST_CASE("rng moments") {
  Rng rng(99);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    s += g;
    s2 += g * g;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(2.0, 3.0);
    CHECK(u >= 2.0);
    CHECK(u < 3.0);
  }
}

TEST_CASE("example spec reproduces the stated initial states") {
  const GeneratorSpec spec = load_generator_spec(test::fixture("siso_seven_records.json"));
  const auto g = generate(spec);
  REQUIRE(g.archive.size() == 7);
  for (const auto& r : g.archive.records()) CHECK(r.length() == 20);
  CHECK((g.initial_states[3] - Vector{{-1.0, -1.0}}).norm() == 0.0);
  CHECK((g.initial_states[4] - Vector{{0.5, 1.0}}).norm() == 0.0);
  CHECK((g.initial_states[5] - Vector{{1.0, 0.5}}).norm() == 0.0);
  const Record& r4 = g.archive.record("4");
  CHECK(r4.inputs.minCoeff() >= 0.0);
  CHECK(r4.inputs.maxCoeff() < 1.0);
  // Outputs come from the stated model and state.
  const Trajectory tr = simulate(spec.model, g.initial_states[3], r4.inputs);
  CHECK((tr.outputs - r4.outputs).norm() == 0.0);
}

TEST_CASE("generation is deterministic in the seed") {
  GeneratorSpec spec = load_generator_spec(test::fixture("mimo_seventeen_records.json"));
  const auto a = generate(spec);
  const auto b = generate(spec);
  for (std::size_t k = 0; k < a.archive.size(); ++k) {
    CHECK(a.archive.records()[k].outputs == b.archive.records()[k].outputs);
  }
  spec.seed += 1;
  const auto c = generate(spec);
  CHECK(c.archive.records()[0].outputs != a.archive.records()[0].outputs);
}

TEST_CASE("zero input, zero state, no noise gives an all-zero archive") {
  GeneratorSpec spec{test::siso_example(), {5, 7}};
  spec.input.law = InputLaw::constant;
  spec.input.value = 0.0;
  spec.initial_states = {Vector::Zero(2), Vector::Zero(2)};
  const auto g = generate(spec);
  for (const auto& r : g.archive.records()) {
    CHECK(r.inputs.norm() == 0.0);
    CHECK(r.outputs.norm() == 0.0);
  }
}

TEST_CASE("noise-free archives satisfy the data equation") {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const StateSpaceModel s = random_stable_model(3, 2, 2, rng);
    GeneratorSpec spec{s, {12, 9}};
    spec.seed = rng.next();
    const auto g = generate(spec);
    const auto sel = full_windowing(g.archive, 4);
    const auto d = build_multirecord(g.archive, sel, 4);
    Matrix x(3, d.cols());
    for (Index c = 0; c < d.cols(); ++c) {
      const auto& src = d.provenance[static_cast<std::size_t>(c)];
      const std::size_t r = src.record_id == "1" ? 0 : 1;
      const Matrix xs = test::oracle_states(s.A(), s.B(), g.initial_states[r],
                                            g.archive.records()[r].inputs);
      x.col(c) = xs.col(src.offset);
    }
    const Matrix res = d.Y - observability_matrix(s, 4) * x - toeplitz_matrix(s, 4) * d.U;
    CHECK(res.norm() <= 1e-10 * d.Y.norm());
  }
}

TEST_CASE("noise level matches sigma on long records") {
  GeneratorSpec spec{test::siso_example(), {5000}};
  spec.output_noise_sigma = 0.3;
  spec.seed = 4;
  const auto noisy = generate(spec);
  spec.output_noise_sigma = 0.0;
  const auto clean = generate(spec);
  const Matrix e = noisy.archive.records()[0].outputs - clean.archive.records()[0].outputs;
  const double sd = std::sqrt(e.squaredNorm() / static_cast<double>(e.size()));
  CHECK(std::abs(sd - 0.3) < 0.03);
}

TEST_CASE("per-record input gains scale the drawn samples") {
  GeneratorSpec spec{test::siso_example(), {10, 10}};
  spec.seed = 3;
  const auto plain = generate(spec);
  spec.input_scales = {std::nullopt, Vector{{0.5}}};
  const auto scaled = generate(spec);
  CHECK(scaled.archive.records()[0].inputs == plain.archive.records()[0].inputs);
  CHECK((scaled.archive.records()[1].inputs - 0.5 * plain.archive.records()[1].inputs).norm() ==
        0.0);
}

TEST_CASE("spec validation") {
  GeneratorSpec spec{test::siso_example(), {}};
  CHECK_THROWS(generate(spec));
  spec.record_lengths = {0};
  CHECK_THROWS(generate(spec));
  spec.record_lengths = {5};
  spec.output_noise_sigma = -1.0;
  CHECK_THROWS(generate(spec));
  spec.output_noise_sigma = 0.0;
  spec.initial_states = {Vector::Zero(3)};
  CHECK_THROWS_AS(generate(spec), DimensionError);
}

TEST_CASE("random stable models are stable and well conditioned") {
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const StateSpaceModel s = random_stable_model(4, 2, 2, rng);
    const double r = spectral_radius(s.A());
    CHECK(r >= 0.5 - 1e-12);
    CHECK(r <= 0.95 + 1e-12);
    const Vector sv = singular_values(observability_matrix(s, 4));
    CHECK(sv(0) / sv(3) < 1e3);
  }
}
