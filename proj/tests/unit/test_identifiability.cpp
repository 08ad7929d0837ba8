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

#include "test_support.hpp"

using namespace mrsid;

namespace {

GeneratedArchive siso_archive() {
  return generate(load_generator_spec(test::fixture("siso_seven_records.json")));
}

}  // namespace

TEST_CASE("threshold rank counts singular values above the cutoff") {
  Vector sv(4);
  sv << 10.0, 1.0, 1e-6, 1e-10;
  RankConfig cfg;
  CHECK(rank_from_spectrum(sv, cfg) == 3);
  cfg.rel_tol = 1e-6;
  CHECK(rank_from_spectrum(sv, cfg) == 2);
  cfg.rel_tol = 1e-8;
  cfg.mode = RankMode::gap;
  // Exactly-zero trailing values are excluded by the threshold first.
  CHECK(rank_from_spectrum(Vector{{3.0, 2.0, 0.0}}, cfg) == 2);
  cfg.mode = RankMode::threshold;
  cfg.abs_tol = 5.0;
  CHECK(rank_from_spectrum(sv, cfg) == 1);
}

TEST_CASE("gap rank picks the largest index with a qualifying ratio") {
  Vector sv(5);
  sv << 10.0, 9.0, 0.5, 1e-3, 5e-4;
  RankConfig cfg;
  cfg.mode = RankMode::gap;
  CHECK(rank_from_spectrum(sv, cfg) == 3);
  cfg.gap_ratio = 1000.0;
  // No ratio exceeds 1000: fall back to the threshold rank.
  CHECK(rank_from_spectrum(sv, cfg) == 5);
}

TEST_CASE("numerical rank agrees with an eigenvalue oracle") {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Index r = 1 + static_cast<Index>(rng.next() % 5);
    const Matrix m = test::random_matrix(6, r, rng) * test::random_matrix(r, 9, rng);
    const RankResult res = numerical_rank(m, RankConfig{});
    CHECK(res.rank == r);
    const Vector oracle = test::oracle_singular_values(m);
    CHECK((res.singular_values.head(r) - oracle.head(r)).norm() < 1e-9 * oracle(0));
  }
}

TEST_CASE("rank config validation") {
  RankConfig cfg;
  cfg.rel_tol = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg = RankConfig{};
  cfg.gap_ratio = 1.0;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("lag hypothesis") {
  CHECK_THROWS_AS(require_lag_hypothesis(2, 2, RankConfig{}), LagHypothesisError);
  CHECK_NOTHROW(require_lag_hypothesis(3, 2, RankConfig{}));
  RankConfig lag;
  lag.known_lag = 1;
  CHECK_NOTHROW(require_lag_hypothesis(2, 3, lag));
  CHECK_THROWS_AS(require_lag_hypothesis(1, 3, lag), LagHypothesisError);
}

TEST_CASE("example selection passes with exact ranks") {
  const auto g = siso_archive();
  const auto d = build_multirecord(g.archive, test::siso_selection(), 3);
  const auto rep = check_identifiability(d, 2, RankConfig{});
  CHECK(rep.pass);
  CHECK(rep.rank_U == 3);
  CHECK(rep.rank_W == 5);
  CHECK(rep.columns == 5);
  CHECK(rep.failure_summary().empty());
  // Lag violation is an error, not a failed report.
  CHECK_THROWS_AS(check_identifiability(d, 3, RankConfig{}), LagHypothesisError);
}

TEST_CASE("one column short fails the column-count condition") {
  const auto g = siso_archive();
  ColumnSelection sel{{SelectionEntry{"4", 0, 2, 1}, SelectionEntry{"5", 0, 2, 1}}};
  const auto rep = check_identifiability(build_multirecord(g.archive, sel, 3), 2, RankConfig{});
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.column_feasible);
  CHECK_FALSE(rep.joint_rank_ok);
  CHECK(rep.failure_summary().find("column-count") != std::string::npos);
}

TEST_CASE("constant input fails the input rank condition") {
  GeneratorSpec spec{test::siso_example(), {30}};
  spec.input.law = InputLaw::constant;
  spec.seed = 2;
  const auto g = generate(spec);
  const auto rep =
      check_identifiability(build_multirecord(g.archive, full_windowing(g.archive, 3), 3), 2,
                            RankConfig{});
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.input_rank_ok);
  CHECK(rep.rank_U == 1);
  CHECK(rep.failure_summary().find("input rank") != std::string::npos);
}

TEST_CASE("joint rank never exceeds m*ell+n on noise-free data") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto c = test::ensemble_case(seed);
    const auto d = build_multirecord(c.data.archive, c.selection, c.ell);
    const auto rep = check_identifiability(d, c.model.n(), RankConfig{});
    CHECK(rep.rank_W <= rep.required_rank_W);
  }
}

TEST_CASE("greedy selection accepts only informative records") {
  const auto g = siso_archive();
  const GreedyResult res = greedy_select(g.archive, 2, 3, RankConfig{});
  CHECK(res.pass);
  REQUIRE_FALSE(res.history.empty());
  CHECK(res.history.front().accepted);
  CHECK(res.final_report.pass);
  // Stops as soon as the test passes: the first record already has 18 columns.
  CHECK(res.history.size() == 1);
  CHECK(res.selection.entries.size() == 1);

  // With records of length 3 (one column each), several records are needed.
  GeneratorSpec spec{test::siso_example(), std::vector<Index>(8, 3)};
  spec.seed = 17;
  const auto short_g = generate(spec);
  const GreedyResult res2 = greedy_select(short_g.archive, 2, 3, RankConfig{});
  CHECK(res2.pass);
  CHECK(res2.selection.column_count() == 5);
}

TEST_CASE("greedy rejects a record that adds no rank") {
  GeneratorSpec spec{test::siso_example(), {3, 3, 3}};
  spec.seed = 5;
  auto g = generate(spec);
  // Duplicate the first record under a new id: it adds nothing.
  Record dup = g.archive.records()[0];
  dup.id = "dup";
  Archive a(1, 1);
  a.add(g.archive.records()[0]);
  a.add(dup);
  a.add(g.archive.records()[1]);
  const GreedyResult res = greedy_select(a, 2, 3, RankConfig{});
  REQUIRE(res.history.size() == 3);
  CHECK(res.history[0].accepted);
  CHECK_FALSE(res.history[1].accepted);
  CHECK(res.history[2].accepted);
  CHECK_FALSE(res.pass);
}

TEST_CASE("persistency of excitation diagnostic") {
  GeneratorSpec spec{test::siso_example(), {40}};
  spec.seed = 8;
  const auto g = generate(spec);
  CHECK(is_persistently_exciting(g.archive.records()[0], 3, 2, RankConfig{}));
  spec.input.law = InputLaw::constant;
  const auto c = generate(spec);
  CHECK_FALSE(is_persistently_exciting(c.archive.records()[0], 3, 2, RankConfig{}));
  Record tiny = g.archive.records()[0];
  tiny.inputs = tiny.inputs.leftCols(4).eval();
  tiny.outputs = tiny.outputs.leftCols(4).eval();
  CHECK_THROWS_AS(is_persistently_exciting(tiny, 3, 2, RankConfig{}), DataError);
}
