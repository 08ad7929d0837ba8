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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "mrsid/mrsid.hpp"

using namespace mrsid;

namespace {

GeneratorSpec fixture_spec(const char* name) {
  return load_generator_spec(std::string(MRSID_FIXTURE_DIR) + "/" + name);
}

ColumnSelection whole(const Archive& a, const std::vector<std::string>& ids, int ell) {
  ColumnSelection sel;
  for (const auto& id : ids) sel.entries.push_back({id, 0, a.record(id).length() - ell + 1, 1});
  return sel;
}

void BM_FitTwoStateExample(benchmark::State& state) {
  const auto g = generate(fixture_spec("siso_seven_records.json"));
  const ColumnSelection sel{{{"4", 0, 2, 1}, {"5", 0, 2, 1}, {"6", 0, 1, 1}}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(g.archive, sel, 3, 2));
  }
}
BENCHMARK(BM_FitTwoStateExample);

void BM_FitSeventeenRecordPair(benchmark::State& state) {
  const auto g = generate(fixture_spec("mimo_seventeen_records.json"));
  const ColumnSelection sel = whole(g.archive, {"5", "6"}, 5);
  FitOptions opts;
  opts.force = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(g.archive, sel, 5, 4, opts));
  }
}
BENCHMARK(BM_FitSeventeenRecordPair)->Unit(benchmark::kMillisecond);

void BM_IdentifiabilityCheck(benchmark::State& state) {
  const auto g = generate(fixture_spec("mimo_seventeen_records.json"));
  const auto data = build_multirecord(g.archive, full_windowing(g.archive, 5), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_identifiability(data, 4, RankConfig{}));
  }
  state.counters["columns"] = static_cast<double>(data.cols());
}
BENCHMARK(BM_IdentifiabilityCheck)->Unit(benchmark::kMillisecond);

void BM_BuildRegression(benchmark::State& state) {
  const Index len = state.range(0);
  Rng rng(1);
  const StateSpaceModel model = random_stable_model(4, 2, 2, rng);
  GeneratorSpec spec(model, {len, len});
  const auto g = generate(spec);
  const auto windows = regression_windows(g.archive, whole(g.archive, {"1", "2"}, 5), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_upsilon(model.A(), model.C(), windows));
  }
  state.SetComplexityN(len);
}
BENCHMARK(BM_BuildRegression)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_ProjectOutInputs(benchmark::State& state) {
  const Index j = state.range(0);
  Rng rng(2);
  Matrix u(10, j), y(10, j);
  for (Index c = 0; c < j; ++c) {
    for (Index r = 0; r < 10; ++r) {
      u(r, c) = rng.gaussian();
      y(r, c) = rng.gaussian();
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_out_rows(y, u, 1e-8));
  }
  state.SetComplexityN(j);
}
BENCHMARK(BM_ProjectOutInputs)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

}  // namespace

BENCHMARK_MAIN();
