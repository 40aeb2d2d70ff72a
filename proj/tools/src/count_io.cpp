// Copyright 2026 The timebin-qpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tbq/cli/count_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tbq/errors.hpp"
#include "tbq/matrix_json.hpp"

namespace tbq::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == line.npos ? line.npos : comma - start)));
    if (comma == line.npos) return out;
    start = comma + 1;
  }
}

std::uint64_t parse_count(std::string_view s, long line) {
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
    throw ParseError("counts must be a non-negative integer, got '" + std::string(s) + "'", line);
  }
  return value;
}

double parse_duration(std::string_view s, long line) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size() || !std::isfinite(value) || value < 0.0) {
    throw ParseError("duration_s must be a non-negative number, got '" + std::string(s) + "'", line);
  }
  return value;
}

void check_input_label(std::string_view label, int n_qubits, long line) {
  std::vector<BasisKet> kets;
  try {
    kets = split_labels(label);
  } catch (const Error& e) {
    throw ParseError("unknown input label '" + std::string(label) + "'", line);
  }
  if (static_cast<int>(kets.size()) != n_qubits) {
    throw ParseError("input label '" + std::string(label) + "' does not match the qubit count", line);
  }
}

std::string format_duration(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", kOutputSignificantDigits, round_significant(d));
  return buf;
}

}  // namespace

std::vector<LabeledCount> read_counts(std::istream& in, const ProjectorSet& projs) {
  std::vector<LabeledCount> out;
  std::string line;
  long number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = split_fields(view);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() == 4 && fields[0] == "setting_label" && fields[1] == "input_label" && fields[2] == "counts" &&
          fields[3] == "duration_s") {
        continue;
      }
      throw ParseError(std::string("expected header '") + kCountHeader + "'", number);
    }
    if (fields.size() != 4) {
      throw ParseError("expected 4 fields, got " + std::to_string(fields.size()), number);
    }
    const auto setting = projs.index_of(fields[0]);
    if (!setting) throw ParseError("unknown setting label '" + std::string(fields[0]) + "'", number);
    check_input_label(fields[1], projs.n_qubits(), number);
    out.push_back({std::string(fields[1]),
                   {*setting, parse_count(fields[2], number), parse_duration(fields[3], number)}});
  }
  if (!header_seen) throw ParseError("count file is empty", number);
  return out;
}

std::vector<LabeledCount> ingest_counts(const std::string& path, const ProjectorSet& projs) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open count file '" + path + "'", 0);
  return read_counts(in, projs);
}

void write_counts(std::ostream& out, std::span<const LabeledCount> counts, const ProjectorSet& projs) {
  out << kCountHeader << '\n';
  for (const auto& c : counts) {
    if (c.record.setting_index >= projs.size()) {
      throw Error(ErrorKind::OutOfRange, "setting index outside the projector set");
    }
    out << projs[c.record.setting_index].label << ',' << c.input_label << ',' << c.record.counts << ','
        << format_duration(c.record.duration_s) << '\n';
  }
}

void write_counts_file(const std::string& path, std::span<const LabeledCount> counts, const ProjectorSet& projs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  write_counts(out, counts, projs);
  if (!out) throw Error(ErrorKind::InvalidArgument, "write to '" + path + "' failed");
}

std::vector<LabeledCount> label_runs(std::span<const SimulatedRun> runs) {
  std::vector<LabeledCount> out;
  for (const auto& run : runs) {
    for (const auto& r : run.records) out.push_back({run.input_label, r});
  }
  return out;
}

std::vector<InputCounts> group_by_input(std::span<const LabeledCount> counts) {
  std::vector<InputCounts> out;
  for (const auto& c : counts) {
    auto it = std::find_if(out.begin(), out.end(), [&](const InputCounts& g) { return g.input_label == c.input_label; });
    if (it == out.end()) {
      out.push_back({c.input_label, {}});
      it = std::prev(out.end());
    }
    it->records.push_back(c.record);
  }
  return out;
}

}  // namespace tbq::cli
