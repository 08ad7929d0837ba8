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
#include <vector>

#include "mrsid/data_archive.hpp"
#include "mrsid/linalg.hpp"

namespace mrsid {

enum class RankMode {
  /// rank = #{sigma_i > max(rel_tol * sigma_1, abs_tol)}. For exact data.
  threshold,
  /// Among the indices that pass the threshold rule, the largest r with
  /// sigma_r / sigma_{r+1} > gap_ratio. Falls back to the threshold rank when
  /// no such gap exists. For noisy data with graded spectra.
  gap,
};

struct RankConfig {
  RankMode mode = RankMode::threshold;
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  double gap_ratio = 10.0;
  /// Maximal lag of the system when known; otherwise ell > n is required.
  std::optional<int> known_lag;

  /// Throws std::invalid_argument on out-of-range settings.
  void validate() const;
};

struct RankResult {
  Index rank = 0;
  Vector singular_values;
};

RankResult numerical_rank(const Matrix& m, const RankConfig& cfg);
Index rank_from_spectrum(const Vector& sv, const RankConfig& cfg);

/// Throws LagHypothesisError unless ell exceeds the known lag (or n when the
/// lag is unknown).
void require_lag_hypothesis(int ell, int n, const RankConfig& cfg);

struct IdentifiabilityReport {
  int ell = 0;
  int n = 0;
  Index columns = 0;
  Vector sv_U;
  Vector sv_W;
  Index rank_U = 0;
  Index rank_W = 0;
  Index required_rank_U = 0;  // m * ell
  Index required_rank_W = 0;  // m * ell + n
  bool input_rank_ok = false;
  bool joint_rank_ok = false;
  bool column_feasible = false;  // columns >= m * ell + n
  bool pass = false;

  /// Human-readable list of the failed conditions; empty when pass.
  std::string failure_summary() const;
};

/// Rank test on [U; Y] and U plus the column-count requirement.
IdentifiabilityReport check_identifiability(const MultiRecordMatrices& data, int n,
                                            const RankConfig& cfg);

struct GreedyStep {
  std::string record_id;
  bool accepted = false;
  IdentifiabilityReport report;  // of the candidate (accumulated + record)
};

struct GreedyResult {
  ColumnSelection selection;
  std::vector<GreedyStep> history;
  IdentifiabilityReport final_report;  // of the accepted selection
  bool pass = false;
};

/// Walks the archive in order and keeps a record's windows only when they
/// raise rank_U or rank_W of the accumulated selection. Stops at the first
/// passing selection.
GreedyResult greedy_select(const Archive& archive, int n, int ell, const RankConfig& cfg,
                           Index stride = 1);

/// Single-record input richness check: the depth-(ell+n) block-Hankel input
/// matrix of the whole record has full row rank m(ell+n). Diagnostic only.
bool is_persistently_exciting(const Record& record, int ell, int n, const RankConfig& cfg);

}  // namespace mrsid
