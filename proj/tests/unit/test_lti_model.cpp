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

#include "test_support.hpp"

using namespace mrsid;
using mrsid::test::siso_example;

TEST_CASE("state space model rejects inconsistent shapes") {
  Matrix a = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(StateSpaceModel(a, Matrix::Ones(3, 1), Matrix::Ones(1, 2), Matrix::Ones(1, 1)),
                  DimensionError);
  CHECK_THROWS_AS(StateSpaceModel(a, Matrix::Ones(2, 1), Matrix::Ones(1, 3), Matrix::Ones(1, 1)),
                  DimensionError);
  CHECK_THROWS_AS(StateSpaceModel(a, Matrix::Ones(2, 1), Matrix::Ones(1, 2), Matrix::Ones(2, 1)),
                  DimensionError);
  CHECK_THROWS_AS(StateSpaceModel(Matrix::Ones(2, 3), Matrix::Ones(2, 1), Matrix::Ones(1, 2),
                                  Matrix::Ones(1, 1)),
                  DimensionError);
  Matrix bad = a;
  bad(0, 0) = std::nan("");
  CHECK_THROWS(StateSpaceModel(bad, Matrix::Ones(2, 1), Matrix::Ones(1, 2), Matrix::Ones(1, 1)));
}

TEST_CASE("simulate matches the plain recursion") {
  const StateSpaceModel s = siso_example();
  Rng rng(3);
  Matrix u(1, 25);
  for (Index t = 0; t < u.cols(); ++t) u(0, t) = rng.uniform();
  Vector x1(2);
  x1 << -1.0, -1.0;
  const Trajectory tr = simulate(s, x1, u);
  const Matrix xs = test::oracle_states(s.A(), s.B(), x1, u);
  REQUIRE(tr.length() == 25);
  CHECK((tr.states - xs.leftCols(25)).norm() < 1e-13);
  CHECK((tr.outputs - (s.C() * xs.leftCols(25) + s.D() * u)).norm() < 1e-13);
  CHECK((tr.initial_state() - x1).norm() == 0.0);
}

TEST_CASE("zero input and zero state give zero output") {
  const StateSpaceModel s = siso_example();
  const Trajectory tr = simulate(s, Vector::Zero(2), Matrix::Zero(1, 10));
  CHECK(tr.outputs.norm() == 0.0);
}

TEST_CASE("simulate checks argument shapes") {
  const StateSpaceModel s = siso_example();
  CHECK_THROWS_AS(simulate(s, Vector::Zero(3), Matrix::Zero(1, 4)), DimensionError);
  CHECK_THROWS_AS(simulate(s, Vector::Zero(2), Matrix::Zero(2, 4)), DimensionError);
}

TEST_CASE("markov parameters of the example system") {
  // CA^k B = 3 * 0.9^k - 0.8^k for this upper-triangular A.
  const auto mk = markov_parameters(siso_example(), 9);
  REQUIRE(mk.size() == 9);
  CHECK(mk[0](0, 0) == doctest::Approx(1.0));
  for (int k = 1; k < 9; ++k) {
    const double expect = 3.0 * std::pow(0.9, k - 1) - std::pow(0.8, k - 1);
    CHECK(mk[k](0, 0) == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK(mk[2](0, 0) == doctest::Approx(1.9));
}

TEST_CASE("markov parameters equal the simulated impulse response") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const StateSpaceModel s = random_stable_model(3, 2, 2, rng);
    const auto mk = markov_parameters(s, 8);
    const auto oracle = test::oracle_markov(s, 8);
    for (int k = 0; k < 8; ++k) CHECK((mk[k] - oracle[k]).norm() < 1e-12);
  }
}

TEST_CASE("observability and toeplitz blocks") {
  const StateSpaceModel s = siso_example();
  const Matrix g = observability_matrix(s, 3);
  Matrix expect(3, 2);
  expect << 1.0, 1.0, 0.9, 1.0, 0.81, 0.98;
  CHECK((g - expect).norm() < 1e-14);

  const Matrix h = toeplitz_matrix(s, 3);
  Matrix th(3, 3);
  th << 1.0, 0.0, 0.0, 2.0, 1.0, 0.0, 1.9, 2.0, 1.0;
  CHECK((h - th).norm() < 1e-14);
  CHECK_THROWS(observability_matrix(s, 0));
}

TEST_CASE("stacked outputs satisfy y = Gamma x + H u") {
  Rng rng(5);
  const StateSpaceModel s = random_stable_model(3, 2, 1, rng);
  const Matrix u = test::random_matrix(2, 4, rng);
  const Vector x1 = test::random_matrix(3, 1, rng);
  const Trajectory tr = simulate(s, x1, u);
  Vector ustack(8), ystack(4);
  for (Index t = 0; t < 4; ++t) {
    ustack.segment(2 * t, 2) = u.col(t);
    ystack(t) = tr.outputs(0, t);
  }
  const Vector rhs = observability_matrix(s, 4) * x1 + toeplitz_matrix(s, 4) * ustack;
  CHECK((ystack - rhs).norm() < 1e-12);
}

TEST_CASE("similarity transform preserves markov parameters and inverts") {
  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const StateSpaceModel s = random_stable_model(4, 2, 2, rng);
    Matrix t = test::random_matrix(4, 4, rng);
    t += 3.0 * Matrix::Identity(4, 4);
    const StateSpaceModel st = apply_similarity(s, t);
    const auto a = markov_parameters(s, 10);
    const auto b = markov_parameters(st, 10);
    const Vector sv = singular_values(t);
    const double tol = 1e-12 * sv(0) / sv(3);
    for (int k = 0; k < 10; ++k) CHECK(test::rel_err(b[k], a[k]) < tol + 1e-12);

    const StateSpaceModel back = apply_similarity(st, t.inverse());
    CHECK(test::rel_err(back.A(), s.A()) < 1e-10);
    CHECK(test::rel_err(back.B(), s.B()) < 1e-10);
    CHECK(test::rel_err(back.C(), s.C()) < 1e-10);
  }
}

TEST_CASE("similarity with a singular transform is rejected") {
  Matrix t(2, 2);
  t << 1.0, 2.0, 2.0, 4.0;
  CHECK_THROWS_AS(apply_similarity(siso_example(), t), NumericalError);
  CHECK_THROWS_AS(apply_similarity(siso_example(), Matrix::Identity(3, 3)), DimensionError);
}
