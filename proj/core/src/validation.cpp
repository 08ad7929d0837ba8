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

#include "mrsid/validation.hpp"

#include <algorithm>
#include <cmath>

#include "mrsid/errors.hpp"

namespace mrsid {

Alignment align_similarity(const StateSpaceModel& truth, const StateSpaceModel& estimate,
                           int ell) {
  if (truth.n() != estimate.n() || truth.m() != estimate.m() || truth.p() != estimate.p()) {
    throw DimensionError("align_similarity: models have different (n, m, p)");
  }
  if (ell <= truth.n()) {
    throw std::invalid_argument("align_similarity: ell must exceed n");
  }
  const Matrix g_true = observability_matrix(truth, ell);
  const Matrix g_est = observability_matrix(estimate, ell);
  const Vector sv_true = singular_values(g_true);
  const Vector sv_est = singular_values(g_est);
  constexpr double kRankTol = 1e-10;
  if (threshold_rank(sv_true, kRankTol) < truth.n() ||
      threshold_rank(sv_est, kRankTol) < estimate.n()) {
    throw NumericalError("align_similarity: observability matrix is rank deficient");
  }
  Alignment out;
  out.T = pseudo_inverse(g_true, kRankTol) * g_est;
  out.residual = (g_true * out.T - g_est).norm();
  return out;
}

double markov_distance(const StateSpaceModel& a, const StateSpaceModel& b, int count) {
  if (a.m() != b.m() || a.p() != b.p()) {
    throw DimensionError("markov_distance: models have different input/output dimensions");
  }
  const auto ma = markov_parameters(a, count);
  const auto mb = markov_parameters(b, count);
  double sum = 0.0;
  for (std::size_t k = 0; k < ma.size(); ++k) {
    sum += (ma[k] - mb[k]).squaredNorm();
  }
  return std::sqrt(sum);
}

double markov_distance(const StateSpaceModel& a, const StateSpaceModel& b) {
  return markov_distance(a, b, 4 * std::max(a.n(), b.n()));
}

double relative_markov_distance(const StateSpaceModel& reference, const StateSpaceModel& b,
                                int count) {
  double scale = 0.0;
  for (const Matrix& mk : markov_parameters(reference, count)) {
    scale += mk.squaredNorm();
  }
  if (!(scale > 0.0)) {
    throw std::invalid_argument("relative_markov_distance: reference response is zero");
  }
  return markov_distance(reference, b, count) / std::sqrt(scale);
}

Vector estimate_initial_state(const StateSpaceModel& model, const Matrix& inputs,
                              const Matrix& outputs, Index samples) {
  if (inputs.rows() != model.m() || outputs.rows() != model.p() ||
      inputs.cols() != outputs.cols()) {
    throw DimensionError("estimate_initial_state: record does not match the model");
  }
  if (samples < 1 || samples > inputs.cols()) {
    throw std::invalid_argument("estimate_initial_state: sample count out of range");
  }
  // Free response: y_t - (forced response from zero state) = C A^{t-1} x1.
  const Index p = model.p();
  const Trajectory forced =
      simulate(model, Vector::Zero(model.n()), inputs.leftCols(samples));
  Matrix regressor(p * samples, model.n());
  Matrix obs = model.C();
  for (Index t = 0; t < samples; ++t) {
    regressor.middleRows(t * p, p) = obs;
    obs = obs * model.A();
  }
  const Matrix residual = outputs.leftCols(samples) - forced.outputs;
  const Vector rhs = Eigen::Map<const Vector>(residual.data(), residual.size());
  return pseudo_inverse(regressor, 1e-10) * rhs;
}

ValidationReport predict_validate(const StateSpaceModel& model, int ell, const Record& record,
                                  const ValidationOptions& options) {
  if (record.inputs.rows() != model.m() || record.outputs.rows() != model.p()) {
    throw DimensionError("validation record '" + record.id + "' does not match the model");
  }
  const Index len = record.length();
  if (len < model.n()) {
    throw DataError("validation record '" + record.id + "' has fewer than n samples");
  }
  const bool stable = spectral_radius(model.A()) < 1.0;
  if (!stable && !options.horizon) {
    throw NumericalError(
        "model is not stable; refusing unbounded-horizon validation (set a horizon)");
  }
  const Index horizon = std::min(options.horizon.value_or(len), len);
  if (horizon < 1) {
    throw std::invalid_argument("validation horizon must be >= 1");
  }
  Index fit_samples =
      options.state_fit_samples.value_or(std::min<Index>(2 * static_cast<Index>(ell), len));
  fit_samples = std::min(fit_samples, len);
  if (fit_samples < model.n()) {
    throw std::invalid_argument("initial-state window must cover at least n samples");
  }

  ValidationReport rep;
  rep.validation_record_id = record.id;
  rep.horizon = horizon;
  rep.estimated_validation_x0 =
      estimate_initial_state(model, record.inputs, record.outputs, fit_samples);

  const Trajectory sim =
      simulate(model, rep.estimated_validation_x0, record.inputs.leftCols(horizon));
  const Matrix err = record.outputs.leftCols(horizon) - sim.outputs;
  rep.per_channel_rms =
      (err.array().square().rowwise().sum() / static_cast<double>(horizon)).sqrt();
  return rep;
}

ValidationReport predict_validate(const EstimationResult& estimate, const Record& record,
                                  const ValidationOptions& options) {
  return predict_validate(estimate.model, estimate.ell, record, options);
}

}  // namespace mrsid
