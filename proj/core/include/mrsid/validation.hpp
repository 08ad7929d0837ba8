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

#include <optional>
#include <string>

#include "mrsid/data_archive.hpp"
#include "mrsid/linalg.hpp"
#include "mrsid/lti_model.hpp"
#include "mrsid/moesp.hpp"

namespace mrsid {

struct Alignment {
  /// Least-squares solution of Gamma(truth) T = Gamma(estimate), so that
  /// A = T Ahat T^-1, B = T Bhat, C = Chat T^-1 and x = T xhat.
  Matrix T;
  /// Frobenius misfit ||Gamma(truth) T - Gamma(estimate)||.
  double residual = 0.0;
};

/// Recovers the state transformation between two realizations from their
/// depth-ell observability matrices. Throws NumericalError when either is
/// rank deficient.
Alignment align_similarity(const StateSpaceModel& truth, const StateSpaceModel& estimate,
                           int ell);

/// Root-sum-square Frobenius difference of the first `count` Markov
/// parameters. The default count is 4 * max(n_a, n_b).
double markov_distance(const StateSpaceModel& a, const StateSpaceModel& b, int count);
double markov_distance(const StateSpaceModel& a, const StateSpaceModel& b);

/// markov_distance(reference, b, count) divided by the Frobenius norm of the
/// reference's first `count` Markov parameters.
double relative_markov_distance(const StateSpaceModel& reference, const StateSpaceModel& b,
                                int count);

struct ValidationOptions {
  /// Samples used to estimate the validation initial state. Defaults to
  /// min(2 * ell, record length).
  std::optional<Index> state_fit_samples;
  /// Evaluate on the first `horizon` samples only. Required for models that
  /// are not asymptotically stable.
  std::optional<Index> horizon;
};

struct ValidationReport {
  Vector per_channel_rms;
  Index horizon = 0;
  std::string validation_record_id;
  Vector estimated_validation_x0;
  std::optional<double> markov_distance;
};

/// Least-squares initial state from the first `samples` samples with B and D
/// held fixed.
Vector estimate_initial_state(const StateSpaceModel& model, const Matrix& inputs,
                              const Matrix& outputs, Index samples);

/// Estimates the record's initial state, simulates the model over the record
/// (or the requested horizon) and reports per-channel RMS of y - yhat. For a
/// deterministic model the one-step-ahead predictor is this simulation.
ValidationReport predict_validate(const StateSpaceModel& model, int ell, const Record& record,
                                  const ValidationOptions& options = {});
ValidationReport predict_validate(const EstimationResult& estimate, const Record& record,
                                  const ValidationOptions& options = {});

}  // namespace mrsid
