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

#include <Eigen/Dense>

namespace mrsid {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Singular values in nonincreasing order. Empty matrices give an empty vector.
Vector singular_values(const Matrix& m);

/// Number of singular values above max(rel_tol * sigma_1, abs_tol).
Index threshold_rank(const Vector& sv, double rel_tol, double abs_tol = 0.0);

/// Moore-Penrose pseudo-inverse via SVD, discarding singular values at or
/// below rel_tol * sigma_1.
Matrix pseudo_inverse(const Matrix& m, double rel_tol = 1e-12);

/// Orthonormal basis (columns) of the row space of `m`, truncated at
/// rel_tol * sigma_1. Result is m.cols() x r.
Matrix row_space_basis(const Matrix& m, double rel_tol);

/// sigma_max / sigma_min over the given spectrum; +inf when sigma_min is zero.
double condition_number(const Vector& sv);

double spectral_radius(const Matrix& a);

bool all_finite(const Matrix& m);

}  // namespace mrsid
