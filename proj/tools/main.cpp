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

// timebin: run simulated gate-characterisation scenarios and reconstruct
// states and processes from count files.
//
//   timebin run --scenario noisy-qpt --config noise.json --out results --seed 7
//   timebin ingest --counts counts.csv --out results
//
// TIMEBIN_LOG=trace|debug|info|warn|error|off sets the stderr log level.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "tbq/cli/count_io.hpp"
#include "tbq/cli/scenarios.hpp"
#include "tbq/errors.hpp"
#include "tbq/matrix_json.hpp"
#include "tbq/metrics.hpp"
#include "tbq/tomo.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("timebin");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("TIMEBIN_LOG")) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string_view(env) != "off") {
      spdlog::warn("TIMEBIN_LOG='{}' not recognised; keeping 'warn'", env);
    } else {
      spdlog::set_level(level);
    }
  }
}

struct IngestOptions {
  std::string counts_path;
  std::string out_dir = ".";
  int qubits = 2;
  bool minimal = false;
};

int ingest(const IngestOptions& o) {
  using namespace tbq;
  const ProjectorSet projs = o.minimal ? ProjectorSet::minimal(o.qubits) : ProjectorSet::overcomplete(o.qubits);
  const auto counts = cli::ingest_counts(o.counts_path, projs);
  const auto groups = cli::group_by_input(counts);
  std::filesystem::create_directories(o.out_dir);
  std::map<std::string, DensityMatrix> states;
  for (const auto& g : groups) {
    DensityMatrix rho = qst_mle(g.records, projs);
    std::string stem = g.input_label;
    for (char& c : stem) {
      if (c == ':') c = '_';
    }
    cli::write_json_file(o.out_dir + "/rho_" + stem + ".json",
                         matrix_to_json(rho.matrix(), cli::computational_ordering(rho.dim())));
    states.emplace(g.input_label, std::move(rho));
  }
  spdlog::info("reconstructed {} states from {} records", states.size(), counts.size());

  if (o.qubits != 2) return 0;
  std::vector<DensityMatrix> outputs;
  for (const auto& input : tomography_input_set()) {
    const auto it = states.find(input.label());
    if (it == states.end()) {
      spdlog::info("input {} absent; skipping process reconstruction", input.label());
      return 0;
    }
    outputs.push_back(it->second);
  }
  const ProcessMatrix chi = qpt_mle(outputs);
  cli::write_json_file(o.out_dir + "/chi.json", matrix_to_json(chi.chi(), chi.basis_ordering()));
  cli::write_json_file(o.out_dir + "/gate_report.json",
                       GateReport::from_process_fidelity(process_fidelity(chi, chi_cphase_ideal())).to_json());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Time-bin C-Phase gate simulator and tomography toolkit", "timebin"};
  app.require_subcommand(1);

  tbq::cli::ScenarioOptions run;
  std::string scenario_name;
  auto* run_cmd = app.add_subcommand("run", "Run a simulated experiment and write its artifacts");
  run_cmd->add_option("--scenario", scenario_name, "Scenario name")
      ->required()
      ->check(CLI::IsMember(tbq::cli::scenario_names()));
  run_cmd->add_option("--config", run.config_path, "Noise configuration (JSON)")->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out_dir, "Output directory")->required();
  run_cmd->add_option("--seed", run.seed, "Master seed (overrides the config)");
  run_cmd->add_flag("--exact", run.exact, "Infinite statistics: use Born probabilities instead of counts");
  run_cmd->add_option("--bootstrap", run.bootstrap_replicas, "Bootstrap replicas for noisy-qpt (0 disables)")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_flag("--minimal", run.minimal_projectors, "Use the 4^n minimal projector set");
  run_cmd->add_option("--chi-total", run.chi_total_path, "deconvolve: measured chi file")->check(CLI::ExistingFile);
  run_cmd->add_option("--chi-input", run.chi_input_path, "deconvolve: input channel chi file")
      ->check(CLI::ExistingFile);

  IngestOptions ing;
  auto* ingest_cmd = app.add_subcommand("ingest", "Reconstruct states (and chi) from a count file");
  ingest_cmd->add_option("--counts", ing.counts_path, "Count CSV")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--out", ing.out_dir, "Output directory")->required();
  ingest_cmd->add_option("--qubits", ing.qubits, "Qubits per setting label")->check(CLI::IsMember({1, 2}));
  ingest_cmd->add_flag("--minimal", ing.minimal, "Settings come from the minimal projector set");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      run.scenario = *tbq::cli::parse_scenario(scenario_name);
      if (run.bootstrap_replicas == 1) throw tbq::Error(tbq::ErrorKind::InvalidArgument, "--bootstrap needs 0 or >= 2");
      const auto outcome = tbq::cli::run_scenario(run);
      for (const auto& f : outcome.files) std::cout << f << '\n';
      return 0;
    }
    return ingest(ing);
  } catch (const std::exception& e) {
    std::cerr << "timebin: " << e.what() << '\n';
    return 1;
  }
}
