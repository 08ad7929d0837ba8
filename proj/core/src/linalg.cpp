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

#include "mrsid/linalg.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace mrsid {

Vector singular_values(const Matrix& m) {
  if (m.size() == 0) {
    return Vector{};
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

Index threshold_rank(const Vector& sv, double rel_tol, double abs_tol) {
  if (sv.size() == 0) {
    return 0;
  }
  const double cutoff = std::max(rel_tol * sv(0), abs_tol);
  Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) {
    ++r;
  }
  return r;
}

Matrix pseudo_inverse(const Matrix& m, double rel_tol) {
  if (m.size() == 0) {
    return Matrix::Zero(m.cols(), m.rows());
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const Index r = threshold_rank(sv, rel_tol);
  if (r == 0) {
    return Matrix::Zero(m.cols(), m.rows());
  }
  const Vector inv = sv.head(r).cwiseInverse();
  return svd.matrixV().leftCols(r) * inv.asDiagonal() * svd.matrixU().leftCols(r).transpose();
}

Matrix row_space_basis(const Matrix& m, double rel_tol) {
  if (m.size() == 0) {
    return Matrix::Zero(m.cols(), 0);
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinV);
  const Index r = threshold_rank(svd.singularValues(), rel_tol);
  return svd.matrixV().leftCols(r);
}

double condition_number(const Vector& sv) {
  if (sv.size() == 0) {
    return std::numeric_limits<double>::infinity();
  }
  const double lo = sv(sv.size() - 1);
  if (lo <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return sv(0) / lo;
}

double spectral_radius(const Matrix& a) {
  if (a.size() == 0) {
    return 0.0;
  }
  Eigen::EigenSolver<Matrix> es(a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace mrsid
