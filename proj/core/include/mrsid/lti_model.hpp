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

#include <vector>

#include "mrsid/linalg.hpp"

namespace mrsid {

/// Discrete-time LTI system
///
///   x_{t+1} = A x_t + B u_t
///   y_t     = C x_t + D u_t
///
/// with n states, m inputs and p outputs. Construction validates the block
/// dimensions and rejects non-finite entries, so every instance is usable.
class StateSpaceModel {
 public:
  StateSpaceModel(Matrix a, Matrix b, Matrix c, Matrix d);

  const Matrix& A() const { return a_; }
  const Matrix& B() const { return b_; }
  const Matrix& C() const { return c_; }
  const Matrix& D() const { return d_; }

  int n() const { return static_cast<int>(a_.rows()); }
  int m() const { return static_cast<int>(b_.cols()); }
  int p() const { return static_cast<int>(c_.rows()); }

 private:
  Matrix a_, b_, c_, d_;
};

/// Samples are stored column-wise: inputs is m x N, outputs p x N and
/// states n x N with states.col(0) the initial state.
struct Trajectory {
  Matrix inputs;
  Matrix outputs;
  Matrix states;

  Index length() const { return inputs.cols(); }
  Vector initial_state() const { return states.col(0); }
};

Trajectory simulate(const StateSpaceModel& model, const Vector& x1, const Matrix& inputs);

/// Extended observability matrix [C; CA; ...; CA^{ell-1}], (ell*p) x n.
Matrix observability_matrix(const StateSpaceModel& model, int ell);

/// Lower block-triangular Toeplitz matrix of impulse-response blocks,
/// (ell*p) x (ell*m): D on the diagonal, CA^{i-j-1}B below it.
Matrix toeplitz_matrix(const StateSpaceModel& model, int ell);

/// [D, CB, CAB, ..., CA^{count-2}B].
std::vector<Matrix> markov_parameters(const StateSpaceModel& model, int count);

/// Change of state coordinates x' = T x: returns (T A T^-1, T B, C T^-1, D).
/// T is inverted through its SVD; throws NumericalError when cond(T) exceeds
/// `max_condition`.
StateSpaceModel apply_similarity(const StateSpaceModel& model, const Matrix& t,
                                 double max_condition = 1e12);

}  // namespace mrsid
