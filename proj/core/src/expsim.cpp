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

#include "tbq/expsim.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tbq/errors.hpp"

namespace tbq {

namespace {

constexpr std::uint64_t kGateDomain = 1;
constexpr std::uint64_t kInputDomain = 2;
constexpr std::uint64_t kTableDomain = 3;
constexpr int kMaxHalfFrequency = 4;

bool is_per_photon_loss(const std::string& key) { return key == "interferometer" || key == "switch"; }

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Average over delta ~ N(0, sigma^2) of a trigonometric polynomial in
// delta / 2 with frequencies up to kMaxHalfFrequency. Every noise integrand
// here is one: phases enter amplitudes as e^{i delta}, switch drift as
// cos/sin(delta / 2), and the moment is quadratic in the amplitudes.
// Equally spaced nodes over the 4 pi period with weights built from the
// characteristic function make the rule exact for any sigma.
Quadrature gaussian_rule(double sigma) {
  if (sigma <= 0.0) return {{0.0}, {1.0}};
  constexpr int n = 2 * kMaxHalfFrequency + 1;
  Quadrature q;
  for (int j = 0; j < n; ++j) {
    const double delta = 4.0 * std::numbers::pi * j / n;
    double w = 1.0;
    for (int k = 1; k <= kMaxHalfFrequency; ++k) {
      const double half = 0.5 * k;
      w += 2.0 * std::exp(-0.5 * half * half * sigma * sigma) * std::cos(half * delta);
    }
    q.nodes.push_back(delta);
    q.weights.push_back(w / n);
  }
  return q;
}

std::array<Complex, 2> prepared_amplitudes(BasisKet k, double phase_error) {
  const ComplexVector v = ket(k);
  return {v[0], v[1] * std::polar(1.0, phase_error)};
}

std::array<Complex, 2> attenuate(const std::array<Complex, 2>& a) { return {a[0] / std::sqrt(3.0), a[1]}; }

// Post-selected amplitudes for one noise realisation. Scaled so the ideal
// gate has unit norm (success probability 1/9 maps to 1).
ComplexVector gate_realisation(const TomographyInput& input, double phase_a, double phase_b,
                               const SwitchSetting& setting) {
  return 3.0 * coincidence_output(attenuate(prepared_amplitudes(input.control, phase_a)),
                                  attenuate(prepared_amplitudes(input.target, phase_b)), setting);
}

struct NoiseDraw {
  double phase_a;
  double phase_b;
  SwitchSetting setting;
};

// Fixed draw order per setting keeps streams aligned whatever the sigmas are.
NoiseDraw draw_noise(const TomographyInput& input, const NoiseConfig& config, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double za = normal(rng);
  const double zb = normal(rng);
  NoiseDraw d;
  d.phase_a = is_superposition(input.control) ? config.phase_sigma_rad * za : 0.0;
  d.phase_b = is_superposition(input.target) ? config.phase_sigma_rad * zb : 0.0;
  d.setting = perturb_switch(SwitchSetting::cphase(), config, rng);
  return d;
}

std::uint64_t poisson(double mean, std::mt19937_64& rng) {
  if (!(mean > 0.0)) return 0;
  return std::poisson_distribution<std::uint64_t>(mean)(rng);
}

double background_rate(const NoiseConfig& config, int dim) {
  const double signal = coincidence_rate_estimate(config, kGateSuccessProbability);
  return config.accidental_fraction * signal / static_cast<double>(dim * dim) + dark_coincidence_rate(config);
}

DensityMatrix density_from_moment(const ComplexMatrix& moment) {
  const double tr = moment.trace().real();
  if (!(tr > 0.0)) throw Error(ErrorKind::ZeroParameter, "noise average has no post-selected weight");
  return DensityMatrix::from_matrix(hermitian_part(moment / tr));
}

}  // namespace

NoiseConfig NoiseConfig::noiseless() {
  NoiseConfig c;
  c.dark_cps = {0.0, 0.0};
  c.accidental_fraction = 0.0;
  c.phase_sigma_rad = 0.0;
  c.splitting_drift_sigma = 0.0;
  return c;
}

void NoiseConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, "NoiseConfig: " + msg); };
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!finite_nonneg(mean_pairs_per_pulse) || mean_pairs_per_pulse >= 1.0) fail("mean_pairs_per_pulse must be in [0, 1)");
  if (!finite_nonneg(rep_rate_hz)) fail("rep_rate_hz must be non-negative");
  for (double e : det_eff) {
    if (!(e >= 0.0 && e <= 1.0)) fail("det_eff must lie in [0, 1]");
  }
  for (double d : dark_cps) {
    if (!finite_nonneg(d)) fail("dark_cps must be non-negative");
  }
  for (const auto& [key, db] : loss_db) {
    if (!finite_nonneg(db)) fail("loss_db." + key + " must be non-negative");
  }
  if (!finite_nonneg(accidental_fraction)) fail("accidental_fraction must be non-negative");
  if (!finite_nonneg(phase_sigma_rad)) fail("phase_sigma_rad must be non-negative");
  if (!finite_nonneg(splitting_drift_sigma)) fail("splitting_drift_sigma must be non-negative");
  if (!finite_nonneg(acquisition_s)) fail("acquisition_s must be non-negative");
  if (!finite_nonneg(coincidence_window_s)) fail("coincidence_window_s must be non-negative");
}

nlohmann::json NoiseConfig::to_json() const {
  nlohmann::json j;
  j["mean_pairs_per_pulse"] = mean_pairs_per_pulse;
  j["rep_rate_hz"] = rep_rate_hz;
  j["det_eff"] = det_eff;
  j["dark_cps"] = dark_cps;
  j["loss_db"] = loss_db;
  j["accidental_fraction"] = accidental_fraction;
  j["phase_sigma_rad"] = phase_sigma_rad;
  j["splitting_drift_sigma"] = splitting_drift_sigma;
  j["acquisition_s"] = acquisition_s;
  j["coincidence_window_s"] = coincidence_window_s;
  j["seed"] = seed;
  return j;
}

NoiseConfig NoiseConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("noise config must be a JSON object", 0);
  NoiseConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "mean_pairs_per_pulse") c.mean_pairs_per_pulse = value.get<double>();
      else if (key == "rep_rate_hz") c.rep_rate_hz = value.get<double>();
      else if (key == "det_eff") c.det_eff = value.get<std::array<double, 2>>();
      else if (key == "dark_cps") c.dark_cps = value.get<std::array<double, 2>>();
      else if (key == "loss_db") c.loss_db = value.get<std::map<std::string, double>>();
      else if (key == "accidental_fraction") c.accidental_fraction = value.get<double>();
      else if (key == "phase_sigma_rad") c.phase_sigma_rad = value.get<double>();
      else if (key == "splitting_drift_sigma") c.splitting_drift_sigma = value.get<double>();
      else if (key == "acquisition_s") c.acquisition_s = value.get<double>();
      else if (key == "coincidence_window_s") c.coincidence_window_s = value.get<double>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else throw ParseError("unknown noise config key '" + key + "'", 0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("noise config: ") + e.what(), 0);
  }
  c.validate();
  return c;
}

NoiseConfig NoiseConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open noise config '" + path + "'", 0);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("noise config '" + path + "': " + e.what(), 0);
  }
  return from_json(j);
}

double total_loss_db(const NoiseConfig& config) {
  double total = 0.0;
  for (const auto& [key, db] : config.loss_db) total += is_per_photon_loss(key) ? 2.0 * db : db;
  return total;
}

double coincidence_rate_estimate(const NoiseConfig& config, double success_prob) {
  return config.rep_rate_hz * config.mean_pairs_per_pulse * success_prob * config.det_eff[0] * config.det_eff[1] *
         std::pow(10.0, -total_loss_db(config) / 10.0);
}

double singles_rate(const NoiseConfig& config, int detector) {
  if (detector != 0 && detector != 1) throw Error(ErrorKind::InvalidArgument, "detector index must be 0 or 1");
  return config.rep_rate_hz * config.mean_pairs_per_pulse * config.det_eff[static_cast<std::size_t>(detector)] *
         std::pow(10.0, -total_loss_db(config) / 20.0);
}

double dark_coincidence_rate(const NoiseConfig& config) {
  return config.coincidence_window_s *
         (config.dark_cps[0] * singles_rate(config, 1) + config.dark_cps[1] * singles_rate(config, 0));
}

std::vector<CountRecord> sample_counts(const RealVector& true_probs, const NoiseConfig& config, double duration_s,
                                       std::uint64_t rng_seed, int dim) {
  if ((true_probs.array() < 0.0).any() || true_probs.sum() > 1.0 + 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "sample_counts: probabilities must be non-negative and sum to at most 1");
  }
  if (!(duration_s >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sample_counts: negative duration");
  std::mt19937_64 rng(rng_seed);
  const double signal = coincidence_rate_estimate(config, kGateSuccessProbability);
  const double background = background_rate(config, dim);
  std::vector<CountRecord> out;
  out.reserve(static_cast<std::size_t>(true_probs.size()));
  for (Eigen::Index k = 0; k < true_probs.size(); ++k) {
    const double mean = (signal * true_probs[k] + background) * duration_s;
    out.push_back({static_cast<std::size_t>(k), poisson(mean, rng), duration_s});
  }
  return out;
}

SwitchSetting perturb_switch(const SwitchSetting& setting, const NoiseConfig& config, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double z1 = normal(rng);
  const double z2 = normal(rng);
  return {setting.theta_t1 + config.splitting_drift_sigma * z1, setting.theta_t2 + config.splitting_drift_sigma * z2};
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index, std::uint64_t domain) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(domain)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

Observations SimulatedRun::observations(const ProjectorSet& projs) const {
  if (exact) return Observations::from_probabilities(probabilities);
  return Observations::from_records(records, projs);
}

DensityMatrix expected_gate_output(const TomographyInput& input, const NoiseConfig& config) {
  const Quadrature qa = gaussian_rule(is_superposition(input.control) ? config.phase_sigma_rad : 0.0);
  const Quadrature qb = gaussian_rule(is_superposition(input.target) ? config.phase_sigma_rad : 0.0);
  const Quadrature qt = gaussian_rule(config.splitting_drift_sigma);
  const SwitchSetting nominal = SwitchSetting::cphase();
  ComplexMatrix moment = ComplexMatrix::Zero(4, 4);
  for (std::size_t a = 0; a < qa.nodes.size(); ++a) {
    for (std::size_t b = 0; b < qb.nodes.size(); ++b) {
      for (std::size_t t1 = 0; t1 < qt.nodes.size(); ++t1) {
        for (std::size_t t2 = 0; t2 < qt.nodes.size(); ++t2) {
          const double w = qa.weights[a] * qb.weights[b] * qt.weights[t1] * qt.weights[t2];
          const SwitchSetting s{nominal.theta_t1 + qt.nodes[t1], nominal.theta_t2 + qt.nodes[t2]};
          const ComplexVector psi = gate_realisation(input, qa.nodes[a], qb.nodes[b], s);
          moment += w * psi * psi.adjoint();
        }
      }
    }
  }
  return density_from_moment(moment);
}

DensityMatrix expected_prepared_state(BasisKet k, const NoiseConfig& config) {
  const Quadrature q = gaussian_rule(is_superposition(k) ? config.phase_sigma_rad : 0.0);
  ComplexMatrix moment = ComplexMatrix::Zero(2, 2);
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const auto a = prepared_amplitudes(k, q.nodes[i]);
    ComplexVector v(2);
    v << a[0], a[1];
    moment += q.weights[i] * v * v.adjoint();
  }
  return density_from_moment(moment);
}

std::vector<SimulatedRun> simulate_gate_experiment(std::span<const TomographyInput> inputs,
                                                   const NoiseConfig& config, const ProjectorSet& projs,
                                                   bool exact) {
  config.validate();
  if (projs.n_qubits() != 2) throw Error(ErrorKind::DimensionMismatch, "gate tomography needs a two-qubit projector set");
  const double signal = coincidence_rate_estimate(config, kGateSuccessProbability);
  const double background = background_rate(config, 4);
  std::vector<SimulatedRun> runs;
  runs.reserve(inputs.size());
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    const TomographyInput& input = inputs[j];
    DensityMatrix truth = expected_gate_output(input, config);
    SimulatedRun run{config, input.label(), exact, {}, measurement_probabilities(truth, projs), std::move(truth)};
    if (!exact) {
      std::mt19937_64 rng(stream_seed(config.seed, j, kGateDomain));
      for (std::size_t k = 0; k < projs.size(); ++k) {
        const NoiseDraw d = draw_noise(input, config, rng);
        const ComplexVector psi = gate_realisation(input, d.phase_a, d.phase_b, d.setting);
        const double p = std::norm(projs[k].ket.dot(psi));
        run.records.push_back({k, poisson((signal * p + background) * config.acquisition_s, rng), config.acquisition_s});
      }
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

SimulatedRun simulate_input_qst(BasisKet k, const NoiseConfig& config, const ProjectorSet& projs, bool exact,
                                std::uint64_t index) {
  config.validate();
  if (projs.n_qubits() != 1) throw Error(ErrorKind::DimensionMismatch, "input tomography needs a one-qubit projector set");
  DensityMatrix truth = expected_prepared_state(k, config);
  SimulatedRun run{config, std::string(to_string(k)), exact, {}, measurement_probabilities(truth, projs),
                   std::move(truth)};
  if (exact) return run;
  const double signal = coincidence_rate_estimate(config, kGateSuccessProbability);
  const double background = background_rate(config, 2);
  std::mt19937_64 rng(stream_seed(config.seed, index, kInputDomain));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t s = 0; s < projs.size(); ++s) {
    const double z = normal(rng);
    const auto a = prepared_amplitudes(k, is_superposition(k) ? config.phase_sigma_rad * z : 0.0);
    ComplexVector v(2);
    v << a[0], a[1];
    const double p = std::norm(projs[s].ket.dot(v));
    run.records.push_back({s, poisson((signal * p + background) * config.acquisition_s, rng), config.acquisition_s});
  }
  return run;
}

Eigen::Matrix4d simulate_truth_table(CnotBasis basis, const NoiseConfig& config, bool exact) {
  config.validate();
  const double signal = coincidence_rate_estimate(config, kGateSuccessProbability);
  const double background = background_rate(config, 4);
  std::array<ComplexVector, 4> outcomes;
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 2; ++t) {
      outcomes[static_cast<std::size_t>(2 * c + t)] =
          tensor_product(ket(cnot_encoding(basis, true, c)), ket(cnot_encoding(basis, false, t)));
    }
  }
  Eigen::Matrix4d table;
  for (int row = 0; row < 4; ++row) {
    const TomographyInput input{cnot_encoding(basis, true, row / 2), cnot_encoding(basis, false, row % 2)};
    if (exact) {
      const DensityMatrix truth = expected_gate_output(input, config);
      for (int k = 0; k < 4; ++k) {
        const auto& v = outcomes[static_cast<std::size_t>(k)];
        table(row, k) = v.dot(truth.matrix() * v).real();
      }
    } else {
      std::mt19937_64 rng(stream_seed(config.seed, static_cast<std::uint64_t>(row),
                                      kTableDomain + 16 * static_cast<std::uint64_t>(basis)));
      for (int k = 0; k < 4; ++k) {
        const NoiseDraw d = draw_noise(input, config, rng);
        const ComplexVector psi = gate_realisation(input, d.phase_a, d.phase_b, d.setting);
        const double p = std::norm(outcomes[static_cast<std::size_t>(k)].dot(psi));
        table(row, k) = static_cast<double>(poisson((signal * p + background) * config.acquisition_s, rng));
      }
    }
    const double total = table.row(row).sum();
    if (total > 0.0) {
      table.row(row) /= total;
    } else {
      table.row(row).setConstant(0.25);
    }
  }
  return table;
}

}  // namespace tbq
