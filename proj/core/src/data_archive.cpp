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

#include "mrsid/data_archive.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include "mrsid/errors.hpp"

namespace mrsid {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

template <typename T>
bool parse_number(std::string_view field, T& value) {
  if (field.empty()) {
    return false;
  }
  if (field.front() == '+') {
    field.remove_prefix(1);
  }
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

void append_double(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

bool is_blank_or_comment(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

}  // namespace

// ---------------------------------------------------------------------------
// Archive

Archive::Archive(int m, int p) : m_(m), p_(p) {
  if (m < 1 || p < 1) {
    throw DimensionError("archive needs m, p >= 1");
  }
}

Archive::Archive(int m, int p, std::vector<Record> records) : Archive(m, p) {
  records_.reserve(records.size());
  for (auto& r : records) {
    add(std::move(r));
  }
}

void Archive::add(Record record) {
  if (record.inputs.cols() != record.outputs.cols() || record.inputs.cols() < 1) {
    throw DimensionError("record '" + record.id + "' needs equal, nonzero input/output lengths");
  }
  if (record.inputs.rows() != m_ || record.outputs.rows() != p_) {
    throw DimensionError("record '" + record.id + "' has " +
                         std::to_string(record.inputs.rows()) + " inputs / " +
                         std::to_string(record.outputs.rows()) + " outputs, archive expects " +
                         std::to_string(m_) + " / " + std::to_string(p_));
  }
  if (find(record.id) != nullptr) {
    throw DataError("duplicate record id '" + record.id + "'");
  }
  records_.push_back(std::move(record));
}

const Record* Archive::find(std::string_view id) const {
  for (const auto& r : records_) {
    if (r.id == id) {
      return &r;
    }
  }
  return nullptr;
}

const Record& Archive::record(std::string_view id) const {
  if (const Record* r = find(id)) {
    return *r;
  }
  throw DataError("unknown record id '" + std::string(id) + "'");
}

Index ColumnSelection::column_count() const {
  Index j = 0;
  for (const auto& e : entries) {
    j += e.count;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Data matrices

void validate_selection(const Archive& archive, const ColumnSelection& selection, int ell) {
  if (ell < 1) {
    throw std::invalid_argument("block depth ell must be >= 1");
  }
  if (selection.empty() || selection.column_count() == 0) {
    throw DataError("column selection is empty");
  }
  for (const auto& e : selection.entries) {
    const Record& rec = archive.record(e.record_id);
    if (e.count < 1 || e.stride < 1 || e.offset < 0) {
      throw DataError("selection entry for record '" + e.record_id +
                      "' needs offset >= 0, count >= 1, stride >= 1");
    }
    if (e.offset + e.span(ell) > rec.length()) {
      throw DataError("selection window out of range: record '" + e.record_id + "' has " +
                      std::to_string(rec.length()) + " samples, entry needs " +
                      std::to_string(e.offset + e.span(ell)));
    }
  }
}

MultiRecordMatrices build_multirecord(const Archive& archive, const ColumnSelection& selection,
                                      int ell) {
  validate_selection(archive, selection, ell);
  const Index j = selection.column_count();
  const Index m = archive.m();
  const Index p = archive.p();
  MultiRecordMatrices out{Matrix(ell * m, j), Matrix(ell * p, j), ell, {}};
  out.provenance.reserve(static_cast<std::size_t>(j));

  Index col = 0;
  for (const auto& e : selection.entries) {
    const Record& rec = archive.record(e.record_id);
    for (Index k = 0; k < e.count; ++k, ++col) {
      const Index off = e.offset + k * e.stride;
      // Columns of a column-major m x N block are contiguous, so the ell
      // samples starting at `off` already sit in stacked order.
      out.U.col(col) = Eigen::Map<const Vector>(rec.inputs.col(off).data(), ell * m);
      out.Y.col(col) = Eigen::Map<const Vector>(rec.outputs.col(off).data(), ell * p);
      out.provenance.push_back({rec.id, off});
    }
  }
  return out;
}

MultiRecordMatrices build_hankel(const Record& record, int ell, Index j) {
  if (ell < 1 || j < 1) {
    throw std::invalid_argument("build_hankel: ell and j must be >= 1");
  }
  if (record.length() < ell + j - 1) {
    throw DataError("record '" + record.id + "' has " + std::to_string(record.length()) +
                    " samples; a depth-" + std::to_string(ell) + " Hankel matrix with " +
                    std::to_string(j) + " columns needs " + std::to_string(ell + j - 1));
  }
  Archive single(static_cast<int>(record.inputs.rows()), static_cast<int>(record.outputs.rows()),
                 {record});
  return build_multirecord(single, ColumnSelection{{{record.id, 0, j, 1}}}, ell);
}

std::vector<DataWindow> regression_windows(const Archive& archive,
                                           const ColumnSelection& selection, int ell) {
  validate_selection(archive, selection, ell);
  std::vector<DataWindow> windows;
  windows.reserve(selection.entries.size());
  for (const auto& e : selection.entries) {
    const Record& rec = archive.record(e.record_id);
    const Index len = e.span(ell);
    windows.push_back({rec.id, e.offset, rec.inputs.middleCols(e.offset, len),
                       rec.outputs.middleCols(e.offset, len)});
  }
  return windows;
}

std::vector<DataWindow> hankel_windows(const Record& record, int ell, Index j) {
  const Index len = ell + j - 1;
  if (record.length() < len) {
    throw DataError("record '" + record.id + "' too short for the requested Hankel windows");
  }
  return {{record.id, 0, record.inputs.leftCols(len), record.outputs.leftCols(len)}};
}

Index data_pair_count(const ColumnSelection& selection, int ell) {
  std::map<std::string, std::set<Index>> touched;
  for (const auto& e : selection.entries) {
    auto& samples = touched[e.record_id];
    for (Index k = 0; k < e.count; ++k) {
      const Index start = e.offset + k * e.stride;
      for (Index t = 0; t < ell; ++t) {
        samples.insert(start + t);
      }
    }
  }
  Index total = 0;
  for (const auto& [id, samples] : touched) {
    total += static_cast<Index>(samples.size());
  }
  return total;
}

ColumnSelection full_windowing(const Archive& archive, int ell, Index stride) {
  if (stride < 1) {
    throw std::invalid_argument("window stride must be >= 1");
  }
  ColumnSelection sel;
  for (const auto& rec : archive.records()) {
    if (rec.length() < ell) {
      continue;
    }
    const Index count = (rec.length() - ell) / stride + 1;
    sel.entries.push_back({rec.id, 0, count, stride});
  }
  return sel;
}

// ---------------------------------------------------------------------------
// CSV

Archive read_archive_csv(std::istream& in, int m, int p, const CsvOptions& options,
                         std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!is_blank_or_comment(line)) {
      have_header = true;
      break;
    }
  }
  if (!have_header) {
    throw DataError(std::string(source) + ": empty archive file (no header)");
  }

  const auto header = split_fields(line);
  const std::size_t width = 2 + static_cast<std::size_t>(m) + static_cast<std::size_t>(p);
  if (header.size() != width) {
    throw DataError(where(source, line_no) + "header has " + std::to_string(header.size()) +
                    " columns, expected " + std::to_string(width) + " (t,seg,u1..u" +
                    std::to_string(m) + ",y1..y" + std::to_string(p) + ")");
  }
  if (header[0] != "t" || header[1] != "seg") {
    throw DataError(where(source, line_no) + "header must start with 't,seg'");
  }
  for (int i = 0; i < m; ++i) {
    if (header[2 + static_cast<std::size_t>(i)] != "u" + std::to_string(i + 1)) {
      throw DataError(where(source, line_no) + "expected column 'u" + std::to_string(i + 1) + "'");
    }
  }
  for (int i = 0; i < p; ++i) {
    if (header[2 + static_cast<std::size_t>(m + i)] != "y" + std::to_string(i + 1)) {
      throw DataError(where(source, line_no) + "expected column 'y" + std::to_string(i + 1) + "'");
    }
  }

  struct Row {
    long long t;
    std::size_t line;
    std::vector<double> values;
  };
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<Row>> groups;

  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) {
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != width) {
      throw DataError(where(source, line_no) + "row has " + std::to_string(fields.size()) +
                      " columns, expected " + std::to_string(width));
    }
    Row row{0, line_no, std::vector<double>(width - 2)};
    if (!parse_number(fields[0], row.t)) {
      throw DataError(where(source, line_no) + "malformed time index '" + std::string(fields[0]) +
                      "'");
    }
    if (fields[1].empty()) {
      throw DataError(where(source, line_no) + "empty segment id");
    }
    for (std::size_t k = 2; k < width; ++k) {
      if (!parse_number(fields[k], row.values[k - 2]) || !std::isfinite(row.values[k - 2])) {
        throw DataError(where(source, line_no) + "malformed number '" + std::string(fields[k]) +
                        "' in column '" + std::string(header[k]) + "'");
      }
    }
    const std::string seg(fields[1]);
    auto [it, inserted] = groups.try_emplace(seg);
    if (inserted) {
      order.push_back(seg);
    }
    it->second.push_back(std::move(row));
  }
  if (order.empty()) {
    throw DataError(std::string(source) + ": archive file has no data rows");
  }

  Archive archive(m, p);
  for (const auto& seg : order) {
    auto& rows = groups[seg];
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.t < b.t; });
    for (std::size_t k = 1; k < rows.size(); ++k) {
      if (rows[k].t != rows[k - 1].t + 1) {
        throw DataError(where(source, rows[k].line) + "segment '" + seg +
                        "' is not contiguous: t=" + std::to_string(rows[k].t) +
                        " follows t=" + std::to_string(rows[k - 1].t));
      }
    }
    const Index len = static_cast<Index>(rows.size());
    Record rec{seg, rows.front().t, Matrix(m, len), Matrix(p, len)};
    for (Index k = 0; k < len; ++k) {
      const auto& v = rows[static_cast<std::size_t>(k)].values;
      for (int i = 0; i < m; ++i) {
        rec.inputs(i, k) = v[static_cast<std::size_t>(i)];
      }
      for (int i = 0; i < p; ++i) {
        rec.outputs(i, k) = v[static_cast<std::size_t>(m + i)];
      }
    }
    archive.add(std::move(rec));
  }
  return options.center ? center_channels(archive) : archive;
}

Archive load_archive_csv(const std::filesystem::path& path, int m, int p,
                         const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open archive file '" + path.string() + "'");
  }
  return read_archive_csv(in, m, p, options, path.string());
}

std::pair<int, int> csv_channel_counts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open archive file '" + path.string() + "'");
  }
  std::string line;
  while (std::getline(in, line)) {
    if (is_blank_or_comment(line)) {
      continue;
    }
    int m = 0;
    int p = 0;
    for (auto f : split_fields(line)) {
      if (f.size() > 1 && f.front() == 'u') {
        ++m;
      } else if (f.size() > 1 && f.front() == 'y') {
        ++p;
      }
    }
    if (m == 0 || p == 0) {
      throw DataError(path.string() + ": header names no u*/y* channels");
    }
    return {m, p};
  }
  throw DataError(path.string() + ": empty archive file (no header)");
}

void write_archive_csv(std::ostream& out, const Archive& archive) {
  std::string text = "t,seg";
  for (int i = 1; i <= archive.m(); ++i) {
    text += ",u" + std::to_string(i);
  }
  for (int i = 1; i <= archive.p(); ++i) {
    text += ",y" + std::to_string(i);
  }
  text += '\n';
  for (const auto& rec : archive.records()) {
    for (Index k = 0; k < rec.length(); ++k) {
      text += std::to_string(rec.start_time + k);
      text += ',';
      text += rec.id;
      for (Index i = 0; i < rec.inputs.rows(); ++i) {
        text += ',';
        append_double(text, rec.inputs(i, k));
      }
      for (Index i = 0; i < rec.outputs.rows(); ++i) {
        text += ',';
        append_double(text, rec.outputs(i, k));
      }
      text += '\n';
    }
  }
  out << text;
}

void write_archive_csv(const std::filesystem::path& path, const Archive& archive) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write archive file '" + path.string() + "'");
  }
  write_archive_csv(out, archive);
}

Archive center_channels(const Archive& archive) {
  Vector u_mean = Vector::Zero(archive.m());
  Vector y_mean = Vector::Zero(archive.p());
  Index total = 0;
  for (const auto& rec : archive.records()) {
    u_mean += rec.inputs.rowwise().sum();
    y_mean += rec.outputs.rowwise().sum();
    total += rec.length();
  }
  if (total == 0) {
    return archive;
  }
  u_mean /= static_cast<double>(total);
  y_mean /= static_cast<double>(total);
  Archive out(archive.m(), archive.p());
  for (auto rec : archive.records()) {
    rec.inputs.colwise() -= u_mean;
    rec.outputs.colwise() -= y_mean;
    out.add(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Selection files

ColumnSelection read_selection(std::istream& in, std::string_view source) {
  ColumnSelection sel;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) {
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != 3 && fields.size() != 4) {
      throw DataError(where(source, line_no) + "expected 'record_id,offset,count[,stride]'");
    }
    SelectionEntry e{std::string(fields[0]), 0, 0, 1};
    const bool ok = !e.record_id.empty() && parse_number(fields[1], e.offset) &&
                    parse_number(fields[2], e.count) &&
                    (fields.size() == 3 || parse_number(fields[3], e.stride));
    if (!ok || e.offset < 0 || e.stride < 1 || e.count < 0) {
      throw DataError(where(source, line_no) + "malformed selection line '" + line + "'");
    }
    if (e.count > 0) {
      sel.entries.push_back(std::move(e));
    }
  }
  return sel;
}

ColumnSelection load_selection(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open selection file '" + path.string() + "'");
  }
  return read_selection(in, path.string());
}

void write_selection(std::ostream& out, const ColumnSelection& selection) {
  for (const auto& e : selection.entries) {
    out << e.record_id << ',' << e.offset << ',' << e.count;
    if (e.stride != 1) {
      out << ',' << e.stride;
    }
    out << '\n';
  }
}

}  // namespace mrsid
