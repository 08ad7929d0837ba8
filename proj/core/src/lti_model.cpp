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

#include "mrsid/lti_model.hpp"

#include <string>

#include "mrsid/errors.hpp"

namespace mrsid {
namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

StateSpaceModel::StateSpaceModel(Matrix a, Matrix b, Matrix c, Matrix d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  const Index n = a_.rows();
  const Index m = b_.cols();
  const Index p = c_.rows();
  if (n < 1 || m < 1 || p < 1) {
    throw DimensionError("state-space model needs n, m, p >= 1 (A " + shape(a_) + ", B " +
                         shape(b_) + ", C " + shape(c_) + ")");
  }
  if (a_.cols() != n || b_.rows() != n || c_.cols() != n || d_.rows() != p || d_.cols() != m) {
    throw DimensionError("inconsistent model blocks: A " + shape(a_) + ", B " + shape(b_) +
                         ", C " + shape(c_) + ", D " + shape(d_));
  }
  if (!a_.allFinite() || !b_.allFinite() || !c_.allFinite() || !d_.allFinite()) {
    throw DimensionError("model matrices contain non-finite entries");
  }
}

Trajectory simulate(const StateSpaceModel& model, const Vector& x1, const Matrix& inputs) {
  if (x1.size() != model.n()) {
    throw DimensionError("initial state has length " + std::to_string(x1.size()) +
                         ", model has n = " + std::to_string(model.n()));
  }
  if (inputs.rows() != model.m()) {
    throw DimensionError("inputs have " + std::to_string(inputs.rows()) +
                         " channels, model has m = " + std::to_string(model.m()));
  }
  const Index len = inputs.cols();
  Trajectory traj{inputs, Matrix(model.p(), len), Matrix(model.n(), len)};
  Vector x = x1;
  for (Index t = 0; t < len; ++t) {
    traj.states.col(t) = x;
    traj.outputs.col(t).noalias() = model.C() * x + model.D() * inputs.col(t);
    x = model.A() * x + model.B() * inputs.col(t);
  }
  return traj;
}

Matrix observability_matrix(const StateSpaceModel& model, int ell) {
  if (ell < 1) {
    throw std::invalid_argument("observability_matrix: ell must be >= 1");
  }
  const int p = model.p();
  Matrix gamma(static_cast<Index>(ell) * p, model.n());
  Matrix block = model.C();
  for (int i = 0; i < ell; ++i) {
    gamma.middleRows(static_cast<Index>(i) * p, p) = block;
    block = block * model.A();
  }
  return gamma;
}

std::vector<Matrix> markov_parameters(const StateSpaceModel& model, int count) {
  if (count < 1) {
    throw std::invalid_argument("markov_parameters: count must be >= 1");
  }
  std::vector<Matrix> params;
  params.reserve(static_cast<std::size_t>(count));
  params.push_back(model.D());
  Matrix ca = model.C();
  for (int k = 1; k < count; ++k) {
    params.push_back(ca * model.B());
    ca = ca * model.A();
  }
  return params;
}

Matrix toeplitz_matrix(const StateSpaceModel& model, int ell) {
  if (ell < 1) {
    throw std::invalid_argument("toeplitz_matrix: ell must be >= 1");
  }
  const int p = model.p();
  const int m = model.m();
  const auto params = markov_parameters(model, ell);
  Matrix h = Matrix::Zero(static_cast<Index>(ell) * p, static_cast<Index>(ell) * m);
  for (int i = 0; i < ell; ++i) {
    for (int j = 0; j <= i; ++j) {
      h.block(static_cast<Index>(i) * p, static_cast<Index>(j) * m, p, m) =
          params[static_cast<std::size_t>(i - j)];
    }
  }
  return h;
}

StateSpaceModel apply_similarity(const StateSpaceModel& model, const Matrix& t,
                                 double max_condition) {
  if (t.rows() != model.n() || t.cols() != model.n()) {
    throw DimensionError("similarity transform is " + shape(t) + ", model has n = " +
                         std::to_string(model.n()));
  }
  const Vector sv = singular_values(t);
  const double cond = condition_number(sv);
  if (!(cond <= max_condition)) {
    throw NumericalError("similarity transform is singular or ill-conditioned (cond = " +
                         std::to_string(cond) + ")");
  }
  const Matrix t_inv = pseudo_inverse(t, 0.0);
  return StateSpaceModel(t * model.A() * t_inv, t * model.B(), model.C() * t_inv, model.D());
}

}  // namespace mrsid
