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

#include "mrsid/moesp.hpp"

#include <sstream>

#include <Eigen/SVD>

#include "mrsid/errors.hpp"

namespace mrsid {
namespace {

std::string format_spectrum(const Vector& sv) {
  std::ostringstream os;
  os << '(';
  for (Index i = 0; i < sv.size(); ++i) {
    os << (i ? ", " : "") << sv(i);
  }
  os << ')';
  return os.str();
}

}  // namespace

Matrix project_out_rows(const Matrix& y, const Matrix& u, double rel_tol, Index* input_rank) {
  if (y.cols() != u.cols()) {
    throw DimensionError("project_out_rows: Y and U column counts differ");
  }
  const Matrix basis = row_space_basis(u, rel_tol);
  if (input_rank != nullptr) {
    *input_rank = basis.cols();
  }
  if (basis.cols() == 0) {
    return y;
  }
  return y - (y * basis) * basis.transpose();
}

ProjectionResult project_out_inputs(const MultiRecordMatrices& data, double rel_tol) {
  if (data.cols() == 0) {
    throw std::invalid_argument("project_out_inputs: empty data matrices");
  }
  ProjectionResult out;
  out.projected = project_out_rows(data.Y, data.U, rel_tol, &out.input_rank);
  out.projector_rank = data.cols() - out.input_rank;
  out.data_scale = data.Y.norm();
  return out;
}

Matrix orthogonal_projector(const Matrix& u, double rel_tol) {
  const Matrix basis = row_space_basis(u, rel_tol);
  return Matrix::Identity(u.cols(), u.cols()) - basis * basis.transpose();
}

ObservabilityEstimate extract_ac(const ProjectionResult& projection, int n, int p, int ell,
                                 const RankConfig& cfg) {
  const Matrix& proj = projection.projected;
  if (n < 1 || p < 1 || ell < 2) {
    throw std::invalid_argument("extract_ac: need n, p >= 1 and ell >= 2");
  }
  if (proj.rows() != static_cast<Index>(ell) * p) {
    throw DimensionError("extract_ac: projected matrix has " + std::to_string(proj.rows()) +
                         " rows, expected ell*p = " + std::to_string(ell * p));
  }
  if (static_cast<Index>(ell - 1) * p < n) {
    throw NumericalError("extract_ac: (ell-1)*p = " + std::to_string((ell - 1) * p) +
                         " rows cannot determine an order-" + std::to_string(n) + " A");
  }

  Eigen::JacobiSVD<Matrix> svd(proj, Eigen::ComputeThinU);
  ObservabilityEstimate est;
  est.singular_values = svd.singularValues();

  const double scale = std::max(projection.data_scale, est.singular_values.size() > 0
                                                          ? est.singular_values(0)
                                                          : 0.0);
  const double cutoff = std::max(cfg.rel_tol * scale, cfg.abs_tol);
  if (est.singular_values.size() < n || !(est.singular_values(n - 1) > cutoff)) {
    throw NumericalError("projected outputs have fewer than n = " + std::to_string(n) +
                         " significant singular values " +
                         format_spectrum(est.singular_values) +
                         "; the data are not exciting enough for this order");
  }

  const Vector root = est.singular_values.head(n).cwiseSqrt();
  est.gamma = svd.matrixU().leftCols(n) * root.asDiagonal();
  est.C = est.gamma.topRows(p);

  const Index shift_rows = static_cast<Index>(ell - 1) * p;
  const Matrix upper = est.gamma.topRows(shift_rows);
  const Matrix lower = est.gamma.bottomRows(shift_rows);
  const Vector upper_sv = singular_values(upper);
  if (threshold_rank(upper_sv, cfg.rel_tol) < n) {
    throw NumericalError("shifted observability block is rank deficient " +
                         format_spectrum(upper_sv));
  }
  est.A = pseudo_inverse(upper, cfg.rel_tol) * lower;
  return est;
}

RegressionProblem build_upsilon(const Matrix& a, const Matrix& c,
                                std::span<const DataWindow> windows) {
  const Index n = a.rows();
  if (a.cols() != n || c.cols() != n || n < 1) {
    throw DimensionError("build_upsilon: A must be square and match C's columns");
  }
  if (windows.empty()) {
    throw std::invalid_argument("build_upsilon: no data windows");
  }
  const Index p = c.rows();
  const Index m = windows.front().inputs.rows();

  Index total = 0;
  for (const auto& w : windows) {
    if (w.inputs.rows() != m || w.outputs.rows() != p || w.inputs.cols() != w.outputs.cols() ||
        w.length() < 1) {
      throw DimensionError("build_upsilon: window '" + w.record_id + "@" +
                           std::to_string(w.offset) + "' does not match m = " +
                           std::to_string(m) + ", p = " + std::to_string(p));
    }
    total += w.length();
  }

  const Index nw = static_cast<Index>(windows.size());
  const Index col_d = n * m;
  const Index col_x = n * m + p * m;
  RegressionProblem prob;
  prob.n = static_cast<int>(n);
  prob.m = static_cast<int>(m);
  prob.p = static_cast<int>(p);
  prob.windows = nw;
  prob.upsilon = Matrix::Zero(p * total, col_x + n * nw);
  prob.outputs.resize(p * total);

  Matrix sens(n, n * m);  // d x_t / d vec(B) given zero initial state
  Matrix obs(p, n);       // C A^t
  Index row = 0;
  for (Index i = 0; i < nw; ++i) {
    const DataWindow& w = windows[static_cast<std::size_t>(i)];
    sens.setZero();
    obs = c;
    for (Index t = 0; t < w.length(); ++t, row += p) {
      prob.upsilon.block(row, 0, p, n * m).noalias() = c * sens;
      for (Index k = 0; k < m; ++k) {
        prob.upsilon.block(row, col_d + k * p, p, p).diagonal().setConstant(w.inputs(k, t));
      }
      prob.upsilon.block(row, col_x + i * n, p, n) = obs;
      prob.outputs.segment(row, p) = w.outputs.col(t);

      sens = a * sens;
      for (Index k = 0; k < m; ++k) {
        sens.block(0, k * n, n, n).diagonal().array() += w.inputs(k, t);
      }
      obs = obs * a;
      if (!sens.allFinite() || !obs.allFinite()) {
        throw NumericalError("regression matrix overflow: powers of A diverge over a window of " +
                             std::to_string(w.length()) + " samples");
      }
    }
  }
  return prob;
}

RegressionSolution solve_bd_x0(const RegressionProblem& problem, double rel_tol) {
  const Matrix& ups = problem.upsilon;
  if (ups.rows() != problem.outputs.size()) {
    throw DimensionError("solve_bd_x0: regression matrix and output vector sizes differ");
  }
  const Index n = problem.n;
  const Index m = problem.m;
  const Index p = problem.p;
  if (ups.cols() != n * m + p * m + n * problem.windows) {
    throw DimensionError("solve_bd_x0: parameter layout does not match regression matrix");
  }

  Eigen::JacobiSVD<Matrix> svd(ups, Eigen::ComputeThinU | Eigen::ComputeThinV);
  RegressionSolution sol;
  sol.singular_values = svd.singularValues();
  sol.rank = threshold_rank(sol.singular_values, rel_tol);
  sol.condition = condition_number(sol.singular_values);

  Vector theta = Vector::Zero(ups.cols());
  if (sol.rank > 0) {
    const Index r = sol.rank;
    const Vector coeff = (svd.matrixU().leftCols(r).transpose() * problem.outputs).array() /
                         sol.singular_values.head(r).array();
    theta = svd.matrixV().leftCols(r) * coeff;
  }
  sol.residual_norm = (ups * theta - problem.outputs).norm();

  sol.B = Eigen::Map<const Matrix>(theta.data(), n, m);
  sol.D = Eigen::Map<const Matrix>(theta.data() + n * m, p, m);
  sol.initial_states.reserve(static_cast<std::size_t>(problem.windows));
  for (Index i = 0; i < problem.windows; ++i) {
    sol.initial_states.emplace_back(theta.segment(n * m + p * m + i * n, n));
  }
  return sol;
}

EstimationResult fit(const MultiRecordMatrices& data, std::span<const DataWindow> windows, int n,
                     const FitOptions& options) {
  const RankConfig& cfg = options.rank;
  IdentifiabilityReport report = check_identifiability(data, n, cfg);
  const int ell = data.ell;
  const int p = static_cast<int>(data.Y.rows() / ell);

  std::vector<std::string> warnings;
  const bool forced = !report.pass;
  if (forced) {
    if (!options.force) {
      throw IdentifiabilityError(report.failure_summary());
    }
    warnings.push_back("identifiability test failed, estimate forced: " +
                       report.failure_summary());
  }

  const ProjectionResult proj = project_out_inputs(data, cfg.rel_tol);
  const ObservabilityEstimate ac = extract_ac(proj, n, p, ell, cfg);
  const RegressionProblem reg = build_upsilon(ac.A, ac.C, windows);
  if (reg.m != static_cast<int>(data.U.rows() / ell)) {
    throw DimensionError("fit: data windows and data matrices disagree on the input count");
  }
  RegressionSolution sol = solve_bd_x0(reg, cfg.rel_tol);
  if (sol.rank < reg.upsilon.cols()) {
    warnings.push_back("regression matrix is rank deficient (rank " + std::to_string(sol.rank) +
                       " of " + std::to_string(reg.upsilon.cols()) +
                       "); minimum-norm solution returned");
  }

  const double radius = spectral_radius(ac.A);
  if (!(radius < 1.0)) {
    warnings.push_back("estimated A is not stable (spectral radius " + std::to_string(radius) +
                       ")");
  }

  std::vector<WindowState> states;
  states.reserve(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    states.push_back({windows[i].record_id, windows[i].offset, std::move(sol.initial_states[i])});
  }

  return EstimationResult{
      StateSpaceModel(ac.A, std::move(sol.B), ac.C, std::move(sol.D)),
      ell,
      std::move(states),
      ac.gamma,
      ac.singular_values,
      reg.upsilon.rows(),
      reg.upsilon.cols(),
      std::move(sol.singular_values),
      sol.rank,
      sol.condition,
      sol.residual_norm,
      radius,
      radius < 1.0,
      std::move(report),
      forced,
      std::move(warnings),
  };
}

EstimationResult fit(const Archive& archive, const ColumnSelection& selection, int ell, int n,
                     const FitOptions& options) {
  const auto data = build_multirecord(archive, selection, ell);
  const auto windows = regression_windows(archive, selection, ell);
  return fit(data, windows, n, options);
}

}  // namespace mrsid
