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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrsid/linalg.hpp"

namespace mrsid {

/// One contiguous stretch of sampled data. Samples are columns: inputs is
/// m x N, outputs is p x N, and column k was taken at sample index
/// start_time + k.
struct Record {
  std::string id;
  long long start_time = 0;
  Matrix inputs;
  Matrix outputs;

  Index length() const { return inputs.cols(); }
};

/// An ordered collection of records sharing channel dimensions. Gaps between
/// records are arbitrary; ids are unique.
class Archive {
 public:
  Archive(int m, int p);
  Archive(int m, int p, std::vector<Record> records);

  /// Appends a record after validating its shape and id.
  void add(Record record);

  int m() const { return m_; }
  int p() const { return p_; }
  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }

  const std::vector<Record>& records() const { return records_; }
  const Record* find(std::string_view id) const;
  /// Throws DataError when the id is unknown.
  const Record& record(std::string_view id) const;

 private:
  int m_;
  int p_;
  std::vector<Record> records_;
};

/// `count` windows of length ell inside one record, starting at
/// offset, offset + stride, ..., offset + (count - 1) * stride.
struct SelectionEntry {
  std::string record_id;
  Index offset = 0;
  Index count = 1;
  Index stride = 1;

  /// Samples spanned by the entry's windows for the given block depth.
  Index span(int ell) const { return (count - 1) * stride + ell; }
};

struct ColumnSelection {
  std::vector<SelectionEntry> entries;

  Index column_count() const;
  bool empty() const { return entries.empty(); }
};

struct ColumnSource {
  std::string record_id;
  Index offset = 0;

  bool operator==(const ColumnSource&) const = default;
};

/// Stacked length-ell windows. Column k of U (resp. Y) is the vertical
/// stack of the ell input (resp. output) samples of window provenance[k].
struct MultiRecordMatrices {
  Matrix U;
  Matrix Y;
  int ell = 0;
  std::vector<ColumnSource> provenance;

  Index cols() const { return U.cols(); }
};

/// A contiguous stretch of samples used as one regression block when
/// estimating B, D and initial states. It carries its own initial state.
struct DataWindow {
  std::string record_id;
  Index offset = 0;
  Matrix inputs;
  Matrix outputs;

  Index length() const { return inputs.cols(); }
};

/// Block-Hankel matrices from one record: column k stacks samples k..k+ell-1.
MultiRecordMatrices build_hankel(const Record& record, int ell, Index j);

/// One column per selected window, in selection order.
MultiRecordMatrices build_multirecord(const Archive& archive, const ColumnSelection& selection,
                                      int ell);

/// One regression window per selection entry, spanning every sample its
/// columns touch.
std::vector<DataWindow> regression_windows(const Archive& archive,
                                           const ColumnSelection& selection, int ell);

/// Windows for a block-Hankel problem on one record: a single window covering
/// samples 0..ell+j-2.
std::vector<DataWindow> hankel_windows(const Record& record, int ell, Index j);

/// Distinct (u_t, y_t) samples touched by the selection. Overlapping windows
/// within a record are counted once.
Index data_pair_count(const ColumnSelection& selection, int ell);

/// Every length-ell window of every record (step `stride`). Records shorter
/// than ell are skipped.
ColumnSelection full_windowing(const Archive& archive, int ell, Index stride = 1);

/// Checks that every window fits inside its record and the selection is
/// nonempty. Throws DataError otherwise.
void validate_selection(const Archive& archive, const ColumnSelection& selection, int ell);

struct CsvOptions {
  /// Subtract each channel's archive-wide mean after loading.
  bool center = false;
};

/// Reads the `t,seg,u1..um,y1..yp` format. Rows are grouped by `seg` in
/// order of first appearance, sorted by `t` and must be contiguous.
Archive read_archive_csv(std::istream& in, int m, int p, const CsvOptions& options = {},
                         std::string_view source = "<stream>");
Archive load_archive_csv(const std::filesystem::path& path, int m, int p,
                         const CsvOptions& options = {});

/// Counts the u*/y* columns in the header of an archive CSV file.
std::pair<int, int> csv_channel_counts(const std::filesystem::path& path);

/// Writes doubles in shortest round-trip form, so reading back is exact.
void write_archive_csv(std::ostream& out, const Archive& archive);
void write_archive_csv(const std::filesystem::path& path, const Archive& archive);

/// Per-channel mean removal across all records.
Archive center_channels(const Archive& archive);

/// Selection file: one `record_id,offset,count[,stride]` per line; blank lines
/// and lines starting with '#' are ignored.
ColumnSelection read_selection(std::istream& in, std::string_view source = "<stream>");
ColumnSelection load_selection(const std::filesystem::path& path);
void write_selection(std::ostream& out, const ColumnSelection& selection);

}  // namespace mrsid
