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

#include "tbq/cli/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "tbq/cli/count_io.hpp"
#include "tbq/cli/pipeline.hpp"
#include "tbq/errors.hpp"
#include "tbq/matrix_json.hpp"
#include "tbq/metrics.hpp"
#include "tbq/timebin.hpp"
#include "tbq/tomo.hpp"

namespace tbq::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::array<std::pair<Scenario, std::string_view>, 6> kNames{{
    {Scenario::ideal_qpt, "ideal-qpt"},
    {Scenario::noisy_qpt, "noisy-qpt"},
    {Scenario::entangle, "entangle"},
    {Scenario::cnot_table, "cnot-table"},
    {Scenario::qst_single, "qst-single"},
    {Scenario::deconvolve, "deconvolve"},
}};

std::string fmt_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", kOutputSignificantDigits, round_significant(x));
  return buf;
}

class Emitter {
 public:
  explicit Emitter(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw Error(ErrorKind::InvalidArgument, "cannot create output directory '" + dir + "'");
    }
  }

  void json(const std::string& name, const nlohmann::json& j) {
    write_json_file((dir_ / name).string(), j);
    done(name);
  }
  void text(const std::string& name, const std::string& body) {
    write_text_file((dir_ / name).string(), body);
    done(name);
  }
  void counts(const std::string& name, std::span<const LabeledCount> c, const ProjectorSet& projs) {
    write_counts_file((dir_ / name).string(), c, projs);
    done(name);
  }
  std::vector<std::string> files() && { return std::move(files_); }

 private:
  void done(const std::string& name) {
    spdlog::debug("wrote {}", (dir_ / name).string());
    files_.push_back(name);
  }
  fs::path dir_;
  std::vector<std::string> files_;
};

std::vector<std::string> computational_labels(int dim) {
  if (dim == 2) return {"t1", "t2"};
  return {"t1t1", "t1t2", "t2t1", "t2t2"};
}

nlohmann::json chi_json(const ProcessMatrix& chi) { return matrix_to_json(chi.chi(), chi.basis_ordering()); }

nlohmann::json rho_json(const DensityMatrix& rho) {
  return matrix_to_json(rho.matrix(), computational_ordering(rho.dim()));
}

std::string chi_bars(const ProcessMatrix& chi) {
  return matrix_bars_csv(chi.chi(), pauli_basis(chi.dim() == 4 ? 2 : 1).labels());
}

std::string rho_bars(const DensityMatrix& rho) {
  return matrix_bars_csv(rho.matrix(), computational_labels(rho.dim()));
}

ProjectorSet projector_set(const ScenarioOptions& o, int n_qubits) {
  return o.minimal_projectors ? ProjectorSet::minimal(n_qubits) : ProjectorSet::overcomplete(n_qubits);
}

std::string file_stem(const std::string& label) {
  std::string out = label;
  for (char& c : out) {
    if (c == ':') c = '_';
  }
  return out;
}

nlohmann::json run_header(const ScenarioOptions& o, const NoiseConfig& config, bool exact) {
  return {{"scenario", std::string(to_string(o.scenario))},
          {"seed", config.seed},
          {"exact", exact},
          {"noise_config", config.to_json()}};
}

ProcessMatrix read_chi(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open chi file '" + path + "'", 0);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("chi file '" + path + "': " + e.what(), 0);
  }
  const auto ordering = basis_ordering_of(j);
  if (ordering && *ordering != ProcessMatrix::kPauliLexicographic) {
    throw Error(ErrorKind::BasisMismatch, "chi file '" + path + "' uses basis ordering '" + *ordering + "'");
  }
  const ComplexMatrix m = matrix_from_json(j);
  if (m.rows() == 16) return ProcessMatrix::from_matrix(m, 4);
  if (m.rows() == 4) return ProcessMatrix::from_matrix(m, 2);
  throw Error(ErrorKind::DimensionMismatch, "chi file '" + path + "' is not 4x4 or 16x16");
}

ScenarioOutcome ideal_qpt(const ScenarioOptions& o, Emitter& out) {
  NoiseConfig config = NoiseConfig::noiseless();
  config.seed = resolve_config(o).seed;
  const ProjectorSet p2 = projector_set(o, 2);
  const ProjectorSet p1 = projector_set(o, 1);
  const QptPipelineResult r = run_qpt_pipeline(config, true, p2, p1);
  GateReport report = GateReport::from_process_fidelity(r.cphase_fidelity);
  report.raw_process_fidelity = r.raw_fidelity;
  report.input_process_fidelity = r.input_fidelity;

  out.json("chi.json", chi_json(r.chi_raw));
  out.json("chi_linear.json", chi_json(r.chi_linear));
  out.json("chi_ideal.json", chi_json(chi_cphase_ideal()));
  out.text("chi_bars.csv", chi_bars(r.chi_raw));
  out.json("gate_report.json", report.to_json());
  nlohmann::json summary = run_header(o, config, true);
  summary["chi_linear_min_eigenvalue"] = round_significant(r.chi_linear.min_eigenvalue());
  out.json("summary.json", summary);
  return {{}, summary};
}

ScenarioOutcome noisy_qpt(const ScenarioOptions& o, Emitter& out) {
  const NoiseConfig config = resolve_config(o);
  const ProjectorSet p2 = projector_set(o, 2);
  const ProjectorSet p1 = projector_set(o, 1);
  const QptPipelineResult r = run_qpt_pipeline(config, o.exact, p2, p1);

  GateReport report = GateReport::from_process_fidelity(r.cphase_fidelity);
  report.raw_process_fidelity = r.raw_fidelity;
  report.input_process_fidelity = r.input_fidelity;
  std::optional<QptBootstrap> boot;
  if (!o.exact && o.bootstrap_replicas > 0) {
    spdlog::info("bootstrap with {} replicas", o.bootstrap_replicas);
    boot = bootstrap_qpt(r, o.bootstrap_replicas, stream_seed(config.seed, 0, 0xB0075), p2, p1);
    report.process_fidelity_stddev = boot->cphase.stddev;
    report.raw_process_fidelity_stddev = boot->raw.stddev;
  }

  out.json("chi_raw.json", chi_json(r.chi_raw));
  out.json("chi_linear.json", chi_json(r.chi_linear));
  out.json("chi_input.json", chi_json(r.chi_input));
  out.json("chi_cphase.json", chi_json(r.chi_cphase));
  out.text("chi_raw_bars.csv", chi_bars(r.chi_raw));
  out.text("chi_cphase_bars.csv", chi_bars(r.chi_cphase));
  for (std::size_t i = 0; i < r.prepared.size(); ++i) {
    out.json("rho_input_" + std::string(to_string(kInputKets[i])) + ".json", rho_json(r.prepared[i]));
  }
  if (!o.exact) {
    out.counts("counts_gate.csv", label_runs(r.gate_runs), p2);
    out.counts("counts_inputs.csv", label_runs(r.input_runs), p1);
  }
  if (boot) {
    std::string csv = "replica,raw_process_fidelity,process_fidelity\n";
    for (std::size_t k = 0; k < boot->raw.replicas.size(); ++k) {
      csv += std::to_string(k) + "," + fmt_number(boot->raw.replicas[k]) + "," + fmt_number(boot->cphase.replicas[k]) +
             "\n";
    }
    out.text("bootstrap.csv", csv);
  }
  out.json("gate_report.json", report.to_json());

  nlohmann::json summary = run_header(o, config, o.exact);
  summary["chi_linear_min_eigenvalue"] = round_significant(r.chi_linear.min_eigenvalue());
  summary["chi_raw_min_eigenvalue"] = round_significant(r.chi_raw.min_eigenvalue());
  summary["coincidence_rate_hz"] = round_significant(coincidence_rate_estimate(config, kGateSuccessProbability));
  if (boot) summary["bootstrap_replicas"] = o.bootstrap_replicas;
  out.json("summary.json", summary);
  return {{}, summary};
}

ScenarioOutcome entangle(const ScenarioOptions& o, Emitter& out) {
  const NoiseConfig config = resolve_config(o);
  const ProjectorSet p2 = projector_set(o, 2);
  const std::array<TomographyInput, 4> inputs{{{BasisKet::plus, BasisKet::plus},
                                               {BasisKet::plus, BasisKet::L},
                                               {BasisKet::L, BasisKet::L},
                                               {BasisKet::L, BasisKet::plus}}};
  const std::vector<SimulatedRun> runs = simulate_gate_experiment(inputs, config, p2, o.exact);
  const ComplexMatrix cz = ideal_cphase_unitary();
  nlohmann::json summary = run_header(o, config, o.exact);
  std::string csv = "input,fidelity,chsh_max\n";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const DensityMatrix rho = reconstruct_state(runs[i].observations(p2), p2, o.exact);
    const ComplexVector target = cz * inputs[i].ket();
    const double f = state_fidelity(rho, target);
    const double chsh = chsh_max(rho);
    const std::string stem = file_stem(inputs[i].label());
    out.json("rho_" + stem + ".json", rho_json(rho));
    out.text("rho_" + stem + "_bars.csv", rho_bars(rho));
    csv += inputs[i].label() + "," + fmt_number(f) + "," + fmt_number(chsh) + "\n";
    summary["outputs"][inputs[i].label()] = {{"fidelity", round_significant(f)},
                                             {"chsh_max", round_significant(chsh)},
                                             {"bell_violation", chsh > 2.0}};
  }
  if (!o.exact) out.counts("counts.csv", label_runs(runs), p2);
  out.text("fidelities.csv", csv);
  out.json("summary.json", summary);
  return {{}, summary};
}

std::string table_csv(const Eigen::Matrix4d& table) {
  std::string csv = "input,output,probability\n";
  const std::array<const char*, 4> bits{"00", "01", "10", "11"};
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) csv += std::string(bits[i]) + "," + bits[k] + "," + fmt_number(table(i, k)) + "\n";
  }
  return csv;
}

nlohmann::json table_json(const Eigen::Matrix4d& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < 4; ++k) row.push_back(round_significant(table(i, k)));
    rows.push_back(row);
  }
  return rows;
}

ScenarioOutcome cnot_table(const ScenarioOptions& o, Emitter& out) {
  const NoiseConfig config = resolve_config(o);
  const Eigen::Matrix4d zz = simulate_truth_table(CnotBasis::zz, config, o.exact);
  const Eigen::Matrix4d xx = simulate_truth_table(CnotBasis::xx, config, o.exact);
  const double f_zz = logic_fidelity(zz, ideal_cnot_table(CnotBasis::zz));
  const double f_xx = logic_fidelity(xx, ideal_cnot_table(CnotBasis::xx));
  const GateReport report = GateReport::from_logic_fidelities(f_zz, f_xx);

  out.text("truth_table_zz.csv", table_csv(zz));
  out.text("truth_table_xx.csv", table_csv(xx));
  out.json("gate_report.json", report.to_json());
  nlohmann::json summary = run_header(o, config, o.exact);
  summary["truth_table_zz"] = table_json(zz);
  summary["truth_table_xx"] = table_json(xx);
  out.json("summary.json", summary);
  return {{}, summary};
}

ScenarioOutcome qst_single(const ScenarioOptions& o, Emitter& out) {
  const NoiseConfig config = resolve_config(o);
  const ProjectorSet p1 = projector_set(o, 1);
  nlohmann::json summary = run_header(o, config, o.exact);
  std::vector<SimulatedRun> runs;
  std::string csv = "input,fidelity\n";
  for (std::size_t i = 0; i < kInputKets.size(); ++i) {
    runs.push_back(simulate_input_qst(kInputKets[i], config, p1, o.exact, i));
    const DensityMatrix rho = reconstruct_state(runs.back().observations(p1), p1, o.exact);
    const double f = state_fidelity(rho, ket(kInputKets[i]));
    const std::string name(to_string(kInputKets[i]));
    out.json("rho_" + name + ".json", rho_json(rho));
    out.text("rho_" + name + "_bars.csv", rho_bars(rho));
    csv += name + "," + fmt_number(f) + "\n";
    summary["fidelities"][name] = round_significant(f);
  }
  if (!o.exact) out.counts("counts.csv", label_runs(runs), p1);
  out.text("fidelities.csv", csv);
  out.json("summary.json", summary);
  return {{}, summary};
}

ScenarioOutcome deconvolve(const ScenarioOptions& o, Emitter& out) {
  if (o.chi_total_path.empty() || o.chi_input_path.empty()) {
    throw Error(ErrorKind::InvalidArgument, "deconvolve needs --chi-total and --chi-input");
  }
  const ProcessMatrix total = read_chi(o.chi_total_path);
  const ProcessMatrix input = read_chi(o.chi_input_path);
  const ProcessMatrix gate = deconvolve_input_imperfection(total, input);
  out.json("chi_cphase.json", chi_json(gate));
  out.text("chi_cphase_bars.csv", chi_bars(gate));
  nlohmann::json summary{{"scenario", std::string(to_string(o.scenario))}};
  if (gate.dim() == 4) {
    const ProcessMatrix ideal = chi_cphase_ideal();
    GateReport report = GateReport::from_process_fidelity(process_fidelity(gate, ideal));
    report.raw_process_fidelity = process_fidelity(total, ideal);
    out.json("gate_report.json", report.to_json());
  }
  out.json("summary.json", summary);
  return {{}, summary};
}

}  // namespace

std::string_view to_string(Scenario s) {
  for (const auto& [value, name] : kNames) {
    if (value == s) return name;
  }
  return "unknown";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (const auto& [value, n] : kNames) {
    if (n == name) return value;
  }
  return std::nullopt;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [value, name] : kNames) v.emplace_back(name);
    return v;
  }();
  return names;
}

NoiseConfig resolve_config(const ScenarioOptions& options) {
  NoiseConfig config = options.config_path.empty() ? NoiseConfig{} : NoiseConfig::load(options.config_path);
  if (options.seed) config.seed = *options.seed;
  return config;
}

std::string computational_ordering(int dim) {
  std::string out;
  for (const auto& l : computational_labels(dim)) out += (out.empty() ? "" : ",") + l;
  return out;
}

std::string matrix_bars_csv(const ComplexMatrix& m, const std::vector<std::string>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != m.rows() || m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "bar labels do not match the matrix");
  }
  std::string csv = "row,col,re,im,abs\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      csv += labels[static_cast<std::size_t>(i)] + "," + labels[static_cast<std::size_t>(j)] + "," +
             fmt_number(m(i, j).real()) + "," + fmt_number(m(i, j).imag()) + "," + fmt_number(std::abs(m(i, j))) +
             "\n";
    }
  }
  return csv;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
}

void write_json_file(const std::string& path, const nlohmann::json& j) { write_text_file(path, j.dump(2) + "\n"); }

ScenarioOutcome run_scenario(const ScenarioOptions& options) {
  Emitter out(options.out_dir);
  spdlog::info("scenario {} -> {}", to_string(options.scenario), options.out_dir);
  ScenarioOutcome outcome;
  switch (options.scenario) {
    case Scenario::ideal_qpt: outcome = ideal_qpt(options, out); break;
    case Scenario::noisy_qpt: outcome = noisy_qpt(options, out); break;
    case Scenario::entangle: outcome = entangle(options, out); break;
    case Scenario::cnot_table: outcome = cnot_table(options, out); break;
    case Scenario::qst_single: outcome = qst_single(options, out); break;
    case Scenario::deconvolve: outcome = deconvolve(options, out); break;
  }
  outcome.files = std::move(out).files();
  return outcome;
}

}  // namespace tbq::cli
