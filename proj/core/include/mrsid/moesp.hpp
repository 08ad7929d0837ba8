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

#include <span>
#include <string>
#include <vector>

#include "mrsid/data_archive.hpp"
#include "mrsid/identifiability.hpp"
#include "mrsid/linalg.hpp"
#include "mrsid/lti_model.hpp"

namespace mrsid {

/// Y with the row space of U projected out: Y (I - U^T (U U^T)^+ U).
struct ProjectionResult {
  Matrix projected;        // (ell*p) x j
  Index input_rank = 0;    // numerical rank of U
  Index projector_rank = 0;  // rank of the projector, j - input_rank
  double data_scale = 0.0;   // Frobenius norm of Y, reference for rank cutoffs
};

/// Computes Y - (Y V) V^T where V is an orthonormal basis of the row space of
/// `u` truncated at rel_tol. The j x j projector is never formed.
Matrix project_out_rows(const Matrix& y, const Matrix& u, double rel_tol,
                        Index* input_rank = nullptr);

ProjectionResult project_out_inputs(const MultiRecordMatrices& data, double rel_tol = 1e-8);

/// Explicit j x j projector I - V V^T. Only meant for diagnostics and tests.
Matrix orthogonal_projector(const Matrix& u, double rel_tol = 1e-8);

struct ObservabilityEstimate {
  Matrix A;      // n x n
  Matrix C;      // p x n
  Matrix gamma;  // (ell*p) x n, leading left singular vectors scaled by sqrt(sigma)
  Vector singular_values;  // full spectrum of the projected matrix
};

/// Column space of the projected outputs -> (A, C) up to a change of basis.
/// Throws NumericalError when the projected matrix has fewer than n
/// significant singular values or the shifted observability block is rank
/// deficient.
ObservabilityEstimate extract_ac(const ProjectionResult& projection, int n, int p, int ell,
                                 const RankConfig& cfg = {});

/// Linear regression for vec(B), vec(D) and one initial state per window.
///
/// Rows run window by window, time-major within a window (p rows per
/// sample). Columns are [vec(B) | vec(D) | x_1 | ... | x_w] with column-major
/// vec. The initial-state part is block diagonal with blocks
/// [C; CA; ...; CA^{L_i-1}].
struct RegressionProblem {
  Matrix upsilon;
  Vector outputs;
  int n = 0;
  int m = 0;
  int p = 0;
  Index windows = 0;
};

RegressionProblem build_upsilon(const Matrix& a, const Matrix& c,
                                std::span<const DataWindow> windows);

struct RegressionSolution {
  Matrix B;
  Matrix D;
  std::vector<Vector> initial_states;
  Vector singular_values;
  Index rank = 0;
  double condition = 0.0;
  double residual_norm = 0.0;
};

/// Minimum-norm least squares through the SVD of upsilon, truncated at
/// rel_tol * sigma_1.
RegressionSolution solve_bd_x0(const RegressionProblem& problem, double rel_tol = 1e-8);

struct WindowState {
  std::string record_id;
  Index offset = 0;
  Vector x;
};

struct FitOptions {
  RankConfig rank;
  /// Estimate even when the identifiability test fails.
  bool force = false;
};

struct EstimationResult {
  StateSpaceModel model;
  int ell = 0;
  std::vector<WindowState> initial_states;
  Matrix gamma_hat;
  Vector sv_projected;
  Index upsilon_rows = 0;
  Index upsilon_cols = 0;
  Vector upsilon_singular_values;
  Index upsilon_rank = 0;
  double upsilon_condition = 0.0;
  double residual_norm = 0.0;
  double spectral_radius = 0.0;
  bool stable = false;
  IdentifiabilityReport identifiability;
  bool forced = false;
  std::vector<std::string> warnings;
};

/// Projection, column-space extraction, (A, C) recovery and the B/D/initial
/// state regression. Throws IdentifiabilityError when the rank test fails and
/// options.force is not set.
EstimationResult fit(const MultiRecordMatrices& data, std::span<const DataWindow> windows, int n,
                     const FitOptions& options = {});

/// Convenience overload building the data matrices and windows from a
/// selection.
EstimationResult fit(const Archive& archive, const ColumnSelection& selection, int ell, int n,
                     const FitOptions& options = {});

}  // namespace mrsid
