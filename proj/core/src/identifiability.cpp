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

#include "mrsid/identifiability.hpp"

#include <algorithm>
#include <stdexcept>

#include "mrsid/errors.hpp"

namespace mrsid {

void RankConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw std::invalid_argument("rank rel_tol must lie in (0, 1)");
  }
  if (!(abs_tol >= 0.0)) {
    throw std::invalid_argument("rank abs_tol must be >= 0");
  }
  if (!(gap_ratio > 1.0)) {
    throw std::invalid_argument("rank gap_ratio must be > 1");
  }
  if (known_lag && *known_lag < 0) {
    throw std::invalid_argument("known lag must be >= 0");
  }
}

Index rank_from_spectrum(const Vector& sv, const RankConfig& cfg) {
  const Index r_threshold = threshold_rank(sv, cfg.rel_tol, cfg.abs_tol);
  if (cfg.mode == RankMode::threshold) {
    return r_threshold;
  }
  // Only ratios between consecutive computed values count; a full-rank
  // spectrum has no trailing zero to compare against.
  for (Index r = std::min(r_threshold, sv.size() - 1); r >= 1; --r) {
    if (sv(r - 1) > cfg.gap_ratio * sv(r)) {
      return r;
    }
  }
  return r_threshold;
}

RankResult numerical_rank(const Matrix& m, const RankConfig& cfg) {
  if (m.size() == 0) {
    throw std::invalid_argument("numerical_rank: empty matrix");
  }
  RankResult out;
  out.singular_values = singular_values(m);
  out.rank = rank_from_spectrum(out.singular_values, cfg);
  return out;
}

void require_lag_hypothesis(int ell, int n, const RankConfig& cfg) {
  if (n < 1) {
    throw std::invalid_argument("model order n must be >= 1");
  }
  if (cfg.known_lag) {
    if (ell <= *cfg.known_lag) {
      throw LagHypothesisError("block depth ell = " + std::to_string(ell) +
                               " must exceed the system lag L = " +
                               std::to_string(*cfg.known_lag));
    }
  } else if (ell <= n) {
    throw LagHypothesisError("block depth ell = " + std::to_string(ell) +
                             " must exceed the model order n = " + std::to_string(n) +
                             " (lag unknown)");
  }
}

std::string IdentifiabilityReport::failure_summary() const {
  std::string s;
  auto add = [&s](const std::string& item) {
    if (!s.empty()) {
      s += "; ";
    }
    s += item;
  };
  if (!input_rank_ok) {
    add("input rank condition failed: rank U = " + std::to_string(rank_U) +
        " < m*ell = " + std::to_string(required_rank_U));
  }
  if (!joint_rank_ok) {
    add("joint rank condition failed: rank [U;Y] = " + std::to_string(rank_W) +
        " != m*ell+n = " + std::to_string(required_rank_W));
  }
  if (!column_feasible) {
    add("column-count condition failed: j = " + std::to_string(columns) +
        " < m*ell+n = " + std::to_string(required_rank_W));
  }
  return s;
}

IdentifiabilityReport check_identifiability(const MultiRecordMatrices& data, int n,
                                            const RankConfig& cfg) {
  cfg.validate();
  require_lag_hypothesis(data.ell, n, cfg);
  if (data.cols() == 0 || data.U.rows() == 0) {
    throw std::invalid_argument("check_identifiability: empty data matrices");
  }
  if (data.U.rows() % data.ell != 0 || data.Y.rows() % data.ell != 0 ||
      data.Y.cols() != data.U.cols()) {
    throw DimensionError("data matrices are inconsistent with ell = " + std::to_string(data.ell));
  }
  const Index m = data.U.rows() / data.ell;

  Matrix w(data.U.rows() + data.Y.rows(), data.cols());
  w << data.U, data.Y;

  IdentifiabilityReport rep;
  rep.ell = data.ell;
  rep.n = n;
  rep.columns = data.cols();
  const RankResult ru = numerical_rank(data.U, cfg);
  const RankResult rw = numerical_rank(w, cfg);
  rep.sv_U = ru.singular_values;
  rep.sv_W = rw.singular_values;
  rep.rank_U = ru.rank;
  rep.rank_W = rw.rank;
  rep.required_rank_U = m * data.ell;
  rep.required_rank_W = m * data.ell + n;
  rep.input_rank_ok = rep.rank_U == rep.required_rank_U;
  rep.joint_rank_ok = rep.rank_W == rep.required_rank_W;
  rep.column_feasible = rep.columns >= rep.required_rank_W;
  rep.pass = rep.input_rank_ok && rep.joint_rank_ok && rep.column_feasible;
  return rep;
}

GreedyResult greedy_select(const Archive& archive, int n, int ell, const RankConfig& cfg,
                           Index stride) {
  require_lag_hypothesis(ell, n, cfg);
  GreedyResult result;
  result.final_report.ell = ell;
  result.final_report.n = n;
  result.final_report.required_rank_U = static_cast<Index>(archive.m()) * ell;
  result.final_report.required_rank_W = static_cast<Index>(archive.m()) * ell + n;

  for (const auto& rec : archive.records()) {
    if (rec.length() < ell) {
      continue;
    }
    ColumnSelection candidate = result.selection;
    candidate.entries.push_back({rec.id, 0, (rec.length() - ell) / stride + 1, stride});
    const auto data = build_multirecord(archive, candidate, ell);
    IdentifiabilityReport rep = check_identifiability(data, n, cfg);

    const bool grows = rep.rank_W > result.final_report.rank_W ||
                       rep.rank_U > result.final_report.rank_U;
    result.history.push_back({rec.id, grows, rep});
    if (grows) {
      result.selection = std::move(candidate);
      result.final_report = std::move(rep);
      if (result.final_report.pass) {
        break;
      }
    }
  }
  result.pass = result.final_report.pass;
  return result;
}

bool is_persistently_exciting(const Record& record, int ell, int n, const RankConfig& cfg) {
  const int depth = ell + n;
  const Index m = record.inputs.rows();
  const Index needed_cols = m * depth;
  const Index cols = record.length() - depth + 1;
  if (cols < needed_cols) {
    throw DataError("record '" + record.id + "' has " + std::to_string(record.length()) +
                    " samples; the depth-" + std::to_string(depth) +
                    " excitation test needs at least " +
                    std::to_string(needed_cols + depth - 1));
  }
  Matrix hankel(m * depth, cols);
  for (Index k = 0; k < cols; ++k) {
    hankel.col(k) = Eigen::Map<const Vector>(record.inputs.col(k).data(), m * depth);
  }
  return numerical_rank(hankel, cfg).rank == m * depth;
}

}  // namespace mrsid
