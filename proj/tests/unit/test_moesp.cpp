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

#include <Eigen/Eigenvalues>

#include <algorithm>

#include "test_support.hpp"

using namespace mrsid;

namespace {

GeneratedArchive siso_archive() {
  return generate(load_generator_spec(test::fixture("siso_seven_records.json")));
}

// Regression matrix by superposition: one simulation per parameter.
Matrix oracle_upsilon(const Matrix& a, const Matrix& c, const std::vector<DataWindow>& ws) {
  const Index n = a.rows(), p = c.rows(), m = ws.front().inputs.rows();
  Index total = 0;
  for (const auto& w : ws) total += w.length();
  const Index cols = n * m + p * m + n * static_cast<Index>(ws.size());
  Matrix out = Matrix::Zero(p * total, cols);
  Index row0 = 0;
  for (std::size_t wi = 0; wi < ws.size(); ++wi) {
    const auto& w = ws[wi];
    auto run = [&](const Matrix& b, const Matrix& d, const Vector& x1, Index col) {
      const StateSpaceModel s(a, b, c, d);
      const Trajectory tr = simulate(s, x1, w.inputs);
      for (Index t = 0; t < w.length(); ++t) out.block(row0 + t * p, col, p, 1) = tr.outputs.col(t);
    };
    for (Index k = 0; k < m; ++k) {
      for (Index i = 0; i < n; ++i) {
        Matrix b = Matrix::Zero(n, m);
        b(i, k) = 1.0;
        run(b, Matrix::Zero(p, m), Vector::Zero(n), k * n + i);
      }
      for (Index i = 0; i < p; ++i) {
        Matrix d = Matrix::Zero(p, m);
        d(i, k) = 1.0;
        run(Matrix::Zero(n, m), d, Vector::Zero(n), n * m + k * p + i);
      }
    }
    for (Index i = 0; i < n; ++i) {
      run(Matrix::Zero(n, m), Matrix::Zero(p, m), Vector::Unit(n, i),
          n * m + p * m + static_cast<Index>(wi) * n + i);
    }
    row0 += p * w.length();
  }
  return out;
}

}  // namespace

TEST_CASE("projection annihilates the input row space") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Index j = 8 + static_cast<Index>(rng.next() % 20);
    const Matrix u = test::random_matrix(4, j, rng);
    const Matrix y = test::random_matrix(3, j, rng);
    Index r = 0;
    const Matrix proj = project_out_rows(y, u, 1e-10, &r);
    CHECK(r == 4);
    CHECK((proj * u.transpose()).norm() < 1e-10 * y.norm() * u.norm());
    const Matrix pi = orthogonal_projector(u);
    CHECK((pi * pi - pi).norm() < 1e-10);
    CHECK((y * pi - proj).norm() < 1e-10 * y.norm());
    CHECK(std::abs(pi.trace() - static_cast<double>(j - 4)) < 1e-9);
  }
}

TEST_CASE("projection handles rank-deficient inputs") {
  Rng rng(1);
  const Matrix base = test::random_matrix(1, 10, rng);
  Matrix u(3, 10);
  u << base, 2.0 * base, -base;
  const Matrix y = test::random_matrix(2, 10, rng);
  Index r = 0;
  const Matrix proj = project_out_rows(y, u, 1e-10, &r);
  CHECK(r == 1);
  CHECK((proj * u.transpose()).norm() < 1e-10);
}

TEST_CASE("regression matrix matches superposition oracle") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const StateSpaceModel s = random_stable_model(3, 2, 2, rng);
    std::vector<DataWindow> ws;
    for (int k = 0; k < 3; ++k) {
      const Index len = 3 + static_cast<Index>(rng.next() % 6);
      ws.push_back({"w" + std::to_string(k), 0, test::random_matrix(2, len, rng),
                    Matrix::Zero(2, len)});
    }
    const RegressionProblem prob = build_upsilon(s.A(), s.C(), ws);
    const Matrix oracle = oracle_upsilon(s.A(), s.C(), ws);
    REQUIRE(prob.upsilon.rows() == oracle.rows());
    REQUIRE(prob.upsilon.cols() == oracle.cols());
    CHECK((prob.upsilon - oracle).norm() < 1e-12 * oracle.norm());
  }
}

TEST_CASE("regression reproduces B, D and window states exactly") {
  Rng rng(29);
  const StateSpaceModel s = random_stable_model(2, 1, 2, rng);
  std::vector<DataWindow> ws;
  std::vector<Vector> xs;
  for (int k = 0; k < 3; ++k) {
    const Matrix u = test::random_matrix(1, 6, rng);
    const Vector x = test::random_matrix(2, 1, rng);
    ws.push_back({"w", k, u, simulate(s, x, u).outputs});
    xs.push_back(x);
  }
  const RegressionSolution sol = solve_bd_x0(build_upsilon(s.A(), s.C(), ws));
  CHECK(test::rel_err(sol.B, s.B()) < 1e-10);
  CHECK(test::rel_err(sol.D, s.D()) < 1e-10);
  REQUIRE(sol.initial_states.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(test::rel_err(sol.initial_states[k], xs[k]) < 1e-10);
  CHECK(sol.residual_norm < 1e-10);
  CHECK(sol.rank == 2 + 2 + 6);
}

TEST_CASE("example archive fit recovers the system") {
  const auto g = siso_archive();
  const EstimationResult est = fit(g.archive, test::siso_selection(), 3, 2);
  CHECK(est.identifiability.pass);
  CHECK_FALSE(est.forced);
  CHECK(est.upsilon_rows == 11);
  CHECK(est.upsilon_cols == 9);
  CHECK(est.upsilon_rank == 9);
  CHECK(est.stable);

  const auto mk = markov_parameters(est.model, 8);
  for (int k = 1; k < 8; ++k) {
    const double expect = 3.0 * std::pow(0.9, k - 1) - std::pow(0.8, k - 1);
    CHECK(std::abs(mk[k](0, 0) - expect) <= 1e-6 * std::abs(expect));
  }
  CHECK(std::abs(est.model.D()(0, 0) - 1.0) < 1e-8);

  Eigen::EigenSolver<Matrix> es(est.model.A());
  std::vector<double> ev = {es.eigenvalues()(0).real(), es.eigenvalues()(1).real()};
  std::sort(ev.begin(), ev.end());
  CHECK(ev[0] == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(ev[1] == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(std::abs(es.eigenvalues()(0).imag()) < 1e-8);

  REQUIRE(est.initial_states.size() == 3);
  CHECK(est.initial_states[0].record_id == "4");
  CHECK(est.initial_states[2].record_id == "6");
}

TEST_CASE("fit refuses unidentifiable data unless forced") {
  GeneratorSpec spec{test::siso_example(), {30}};
  spec.input.law = InputLaw::constant;
  const auto g = generate(spec);
  const auto sel = full_windowing(g.archive, 3);
  CHECK_THROWS_AS(fit(g.archive, sel, 3, 2), IdentifiabilityError);
  try {
    fit(g.archive, sel, 3, 2);
  } catch (const IdentifiabilityError& e) {
    CHECK(std::string(e.what()).find("input rank") != std::string::npos);
  }
  FitOptions force;
  force.force = true;
  // Constant input leaves too little in the projected outputs for order 2.
  try {
    const EstimationResult est = fit(g.archive, sel, 3, 2, force);
    CHECK(est.forced);
    CHECK_FALSE(est.warnings.empty());
  } catch (const NumericalError&) {
    CHECK(true);
  }
}

TEST_CASE("forced fit on a one-column-short selection reports the failure") {
  GeneratorSpec spec{test::siso_example(), {20, 20}};
  spec.seed = 77;
  const auto g = generate(spec);
  ColumnSelection sel{{SelectionEntry{"1", 0, 2, 1}, SelectionEntry{"2", 0, 2, 1}}};
  CHECK_THROWS_AS(fit(g.archive, sel, 3, 2), IdentifiabilityError);
}

TEST_CASE("extract_ac preconditions") {
  ProjectionResult pr;
  pr.projected = Matrix::Zero(3, 10);
  CHECK_THROWS_AS(extract_ac(pr, 2, 1, 3, RankConfig{}), NumericalError);
  CHECK_THROWS_AS(extract_ac(pr, 2, 2, 3, RankConfig{}), DimensionError);
  pr.projected = Matrix::Zero(2, 10);
  CHECK_THROWS_AS(extract_ac(pr, 2, 1, 2, RankConfig{}), NumericalError);
}
