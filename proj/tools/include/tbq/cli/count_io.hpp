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

#ifndef TBQ_CLI_COUNT_IO_HPP
#define TBQ_CLI_COUNT_IO_HPP

// Count files: CSV with header
//   setting_label,input_label,counts,duration_s
// Setting labels are projector labels ("plus:L"); input labels are basis-ket
// labels of the prepared input, joined the same way.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tbq/expsim.hpp"
#include "tbq/tomo.hpp"

namespace tbq::cli {

inline constexpr const char* kCountHeader = "setting_label,input_label,counts,duration_s";

struct LabeledCount {
  std::string input_label;
  CountRecord record;
  bool operator==(const LabeledCount&) const = default;
};

/// Records grouped by input, in order of first appearance.
struct InputCounts {
  std::string input_label;
  std::vector<CountRecord> records;
};

/// Throws ParseError (with the 1-based line number) on malformed rows,
/// negative or non-integer counts, and unknown setting or input labels.
std::vector<LabeledCount> read_counts(std::istream& in, const ProjectorSet& projs);
std::vector<LabeledCount> ingest_counts(const std::string& path, const ProjectorSet& projs);

void write_counts(std::ostream& out, std::span<const LabeledCount> counts, const ProjectorSet& projs);
void write_counts_file(const std::string& path, std::span<const LabeledCount> counts, const ProjectorSet& projs);

std::vector<LabeledCount> label_runs(std::span<const SimulatedRun> runs);
std::vector<InputCounts> group_by_input(std::span<const LabeledCount> counts);

}  // namespace tbq::cli

#endif  // TBQ_CLI_COUNT_IO_HPP
