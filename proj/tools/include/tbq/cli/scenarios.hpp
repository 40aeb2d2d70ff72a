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

#ifndef TBQ_CLI_SCENARIOS_HPP
#define TBQ_CLI_SCENARIOS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tbq/expsim.hpp"
#include "tbq/qcore.hpp"

namespace tbq::cli {

enum class Scenario { ideal_qpt, noisy_qpt, entangle, cnot_table, qst_single, deconvolve };

std::string_view to_string(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);
const std::vector<std::string>& scenario_names();

struct ScenarioOptions {
  Scenario scenario = Scenario::ideal_qpt;
  std::string config_path;  // empty: built-in defaults
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the config seed
  bool exact = false;
  int bootstrap_replicas = 100;  // noisy-qpt; 0 disables
  bool minimal_projectors = false;
  std::string chi_total_path;  // deconvolve
  std::string chi_input_path;  // deconvolve
};

struct ScenarioOutcome {
  std::vector<std::string> files;  // relative to out_dir, in write order
  nlohmann::json summary;
};

/// Runs one scenario and writes its artifacts. Throws tbq::Error on bad
/// configuration, unreadable inputs or unwritable output.
ScenarioOutcome run_scenario(const ScenarioOptions& options);

/// Config file (or defaults) with the seed override applied.
NoiseConfig resolve_config(const ScenarioOptions& options);

/// Basis labels for density-matrix files: "t1t1,t1t2,t2t1,t2t2" or "t1,t2".
std::string computational_ordering(int dim);

/// One row per entry: row,col,re,im,abs. Data for bar-chart figures.
std::string matrix_bars_csv(const ComplexMatrix& m, const std::vector<std::string>& labels);

/// Indented JSON with a trailing newline.
void write_json_file(const std::string& path, const nlohmann::json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tbq::cli

#endif  // TBQ_CLI_SCENARIOS_HPP
