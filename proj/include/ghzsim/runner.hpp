/*
 * Copyright 2026 The ghzsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Experiment dispatch and serialization for the command-line tool.

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <locale>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ghzsim/config.hpp"
#include "ghzsim/detection.hpp"
#include "ghzsim/ghz_experiments.hpp"
#include "ghzsim/io.hpp"
#include "ghzsim/rate_engine.hpp"

namespace ghzsim {

struct RunOutput {
  std::string contents;  // serialized artifact
  std::string summary;   // one line, no trailing newline
};

/// Multiplies by a global phase so the first term's amplitude is real and
/// positive, which makes dumps comparable across conventions.
inline StateVector with_fixed_global_phase(const StateVector& s) {
  if (s.empty()) return s;
  const Amplitude a = s.terms().front().amplitude();
  if (std::abs(a) == 0.0) return s;
  return scaled(s, std::abs(a) / a);
}

/// "H_T V_1 V_2 H_3"; packets are given only in the JSON dump.
inline std::string term_modes(const KetTerm& t) {
  std::string out;
  for (const auto& p : t.photons()) {
    if (!out.empty()) out += ' ';
    out += to_string(p.mode);
  }
  return out;
}

namespace detail {

using nlohmann::ordered_json;

// Numbers go through format_double so JSON and CSV agree digit for digit.
inline ordered_json number(double v) { return ordered_json::parse(io::format_double(v)); }

inline ordered_json finite_or_string(double v) {
  return std::isfinite(v) ? number(v) : ordered_json(io::format_double(v));
}

inline std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

inline std::string state_csv(const StateVector& s) {
  std::string out = io::csv_row({"term", "modes", "amplitude_re", "amplitude_im"});
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& t = s.terms()[i];
    out += io::csv_row({std::to_string(i), term_modes(t), io::format_double(t.amplitude().real()),
                        io::format_double(t.amplitude().imag())});
  }
  return out;
}

inline ordered_json state_json(const StateVector& s) {
  ordered_json terms = ordered_json::array();
  for (const auto& t : s.terms()) {
    ordered_json photons = ordered_json::array();
    for (const auto& p : t.photons()) {
      photons.push_back({{"path", p.mode.path},
                         {"pol", std::string(1, to_char(p.mode.pol))},
                         {"center_fs", number(p.packet.center_fs)},
                         {"sigma_fs", number(p.packet.sigma_fs)}});
    }
    terms.push_back({{"modes", term_modes(t)},
                     {"amplitude_re", number(t.amplitude().real())},
                     {"amplitude_im", number(t.amplitude().imag())},
                     {"photons", photons}});
  }
  return terms;
}

inline std::string short_number(double v, int precision = 4) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(precision);
  os << v;
  return os.str();
}

inline RunOutput run_evolve(const ExperimentConfig& cfg) {
  const auto result = ghz_postselected_state(cfg.ghz.params);
  if (!(result.probability > 0.0)) throw UndefinedConditional("evolve: no fourfold events");
  const StateVector state = with_fixed_global_phase(without_origin_tags(result.conditional));
  const double fid = fidelity(normalized(state), ghz_reference_state(cfg.ghz.params.coherence_sigma_fs));
  RunOutput out;
  if (cfg.output.format == OutputFormat::Csv) {
    out.contents = state_csv(state);
  } else {
    out.contents = dump_json({{"experiment", "evolve"},
                              {"postselect_probability", number(result.probability)},
                              {"ghz_fidelity", number(fid)},
                              {"terms", state_json(state)}});
  }
  out.summary = "evolve: " + std::to_string(state.size()) + " terms, post-selection probability " +
                short_number(result.probability) + ", GHZ fidelity " + short_number(fid, 12);
  return out;
}

inline RunOutput run_histogram(const ExperimentConfig& cfg) {
  const auto h = term_histogram(cfg.ghz.params);
  RunOutput out;
  if (cfg.output.format == OutputFormat::Csv) {
    out.contents = io::csv_row({"combination", "probability"});
    for (std::size_t k = 0; k < 8; ++k) {
      out.contents += io::csv_row({h.labels[k], io::format_double(h.probabilities[k])});
    }
  } else {
    ordered_json rows = ordered_json::array();
    for (std::size_t k = 0; k < 8; ++k) {
      rows.push_back({{"combination", h.labels[k]}, {"probability", number(h.probabilities[k])}});
    }
    out.contents = dump_json({{"experiment", "histogram"},
                              {"noise_w", number(cfg.ghz.params.noise_w)},
                              {"desired_to_undesired_sum_ratio", finite_or_string(h.desired_to_undesired_sum_ratio)},
                              {"desired_to_undesired_mean_ratio",
                               finite_or_string(h.desired_to_undesired_mean_ratio)},
                              {"histogram", rows}});
  }
  out.summary = "histogram: desired:undesired = " + short_number(h.desired_to_undesired_sum_ratio) +
                ":1 (summed), " + short_number(h.desired_to_undesired_mean_ratio) + ":1 (per combination)";
  return out;
}

inline RunOutput run_scan(const ExperimentConfig& cfg, bool control) {
  const double theta1 = cfg.ghz.theta1_deg.value_or(control ? 0.0 : 45.0);
  const double theta2 = cfg.ghz.theta2_deg.value_or(-45.0);
  const auto records = delay_scan(cfg.ghz.params, cfg.scan.delays(), theta1, theta2);
  const double vis = visibility(records);
  RunOutput out;
  if (cfg.output.format == OutputFormat::Csv) {
    out.contents = io::csv_row({"delay_fs", "p_plus45", "p_minus45"});
    for (const auto& r : records) {
      out.contents += io::csv_row(
          {io::format_double(r.delay_fs), io::format_double(r.p_plus45), io::format_double(r.p_minus45)});
    }
  } else {
    ordered_json rows = ordered_json::array();
    for (const auto& r : records) {
      rows.push_back({{"delay_fs", number(r.delay_fs)},
                      {"p_plus45", number(r.p_plus45)},
                      {"p_minus45", number(r.p_minus45)}});
    }
    out.contents = dump_json({{"experiment", control ? "control-scan" : "delay-scan"},
                              {"theta1_deg", number(theta1)},
                              {"theta2_deg", number(theta2)},
                              {"visibility", number(vis)},
                              {"records", rows}});
  }
  out.summary = std::string(control ? "control-scan" : "delay-scan") + ": " + std::to_string(records.size()) +
                " points, D1 " + short_number(theta1) + " deg, D2 " + short_number(theta2) +
                " deg, visibility " + short_number(vis);
  return out;
}

inline RunOutput run_entanglement_check(const ExperimentConfig& cfg) {
  const double theta1 = cfg.ghz.theta1_deg.value_or(45.0);
  const auto result = ghz_postselected_state(cfg.ghz.params);
  if (!(result.probability > 0.0)) throw UndefinedConditional("entanglement-check: no fourfold events");
  const auto check = entangled_entanglement_check(without_origin_tags(result.conditional), theta1);
  const StateVector state = with_fixed_global_phase(check.conditional);
  RunOutput out;
  if (cfg.output.format == OutputFormat::Csv) {
    out.contents = state_csv(state);
    out.contents += io::csv_row({"fidelity", "", io::format_double(check.fidelity), ""});
  } else {
    out.contents = dump_json({{"experiment", "entanglement-check"},
                              {"theta1_deg", number(theta1)},
                              {"fidelity", number(check.fidelity)},
                              {"terms", state_json(state)}});
  }
  out.summary = "entanglement-check: photon 1 at " + short_number(theta1) + " deg, fidelity " +
                short_number(check.fidelity, 12);
  return out;
}

struct RateRow {
  std::string quantity;
  double value;
  std::string unit;
};

inline RunOutput run_rates(const ExperimentConfig& cfg) {
  const auto& r = cfg.rates;
  RateParams p = make_rate_params(r.pulse_rate_hz, r.pair_mean, r.efficiency);
  switch (r.calibrate) {
    case Calibration::None: break;
    case Calibration::MultiPairGain: p = calibrate_multi_pair_gain(p, r.target_fourfold_per_pulse); break;
    case Calibration::PairMean: p = calibrate_pair_mean(p, r.target_fourfold_per_pulse); break;
  }
  const double per_pulse = fourfold_prob_per_pulse(p);
  const double double_pp = fourfold_double_prob_per_pulse(p);
  const double triple_pp = fourfold_triple_prob_per_pulse(p);
  const double per_second = per_pulse * p.pulse_rate;
  std::vector<RateRow> rows = {
      {"pulse_rate", p.pulse_rate, "1/s"},
      {"pair_mean", p.pair_mean, "pairs/pulse"},
      {"efficiency", p.efficiency, "1"},
      {"multi_pair_gain", p.multi_pair_gain, "1"},
      {"postselect_prob_double", p.postselect_prob_double, "1"},
      {"postselect_prob_triple", p.postselect_prob_triple, "1"},
      {"fourfold_prob_per_pulse", per_pulse, "1/pulse"},
      {"fourfold_double_prob_per_pulse", double_pp, "1/pulse"},
      {"fourfold_triple_prob_per_pulse", triple_pp, "1/pulse"},
      {"fourfold_rate", per_second, "1/s"},
      {"fourfold_interval", per_second > 0.0 ? 1.0 / per_second : INFINITY, "s"},
      {"triple_double_ratio", double_pp > 0.0 ? triple_pp / double_pp : INFINITY, "1"},
      {"twofold_rate", twofold_prob_per_pulse(p) * p.pulse_rate, "1/s"},
  };
  if (r.duration_s > 0.0) {
    const auto counts = simulate_counts(p, r.duration_s, cfg.seed);
    const auto pulses = static_cast<double>(counts.pulses);
    rows.push_back({"mc_duration", counts.duration_s, "s"});
    rows.push_back({"mc_pulses", pulses, "pulses"});
    rows.push_back({"mc_fourfold_double", static_cast<double>(counts.fourfold_double), "counts"});
    rows.push_back({"mc_fourfold_triple", static_cast<double>(counts.fourfold_triple), "counts"});
    rows.push_back({"mc_fourfold_total", static_cast<double>(counts.fourfold_double + counts.fourfold_triple),
                    "counts"});
    rows.push_back({"expected_fourfold_total", per_pulse * pulses, "counts"});
    rows.push_back({"mc_twofolds", static_cast<double>(counts.twofolds), "counts"});
    rows.push_back({"mc_singles", static_cast<double>(counts.singles), "counts"});
  }

  RunOutput out;
  if (cfg.output.format == OutputFormat::Csv) {
    out.contents = io::csv_row({"quantity", "value", "unit"});
    for (const auto& row : rows) out.contents += io::csv_row({row.quantity, io::format_double(row.value), row.unit});
  } else {
    ordered_json list = ordered_json::array();
    for (const auto& row : rows) {
      list.push_back({{"quantity", row.quantity}, {"value", finite_or_string(row.value)}, {"unit", row.unit}});
    }
    out.contents = dump_json({{"experiment", "rates"}, {"calibration", to_string(r.calibrate)}, {"rates", list}});
  }
  out.summary = "rates: " + short_number(per_second, 3) + " fourfolds/s, one per " +
                short_number(per_second > 0.0 ? 1.0 / per_second : INFINITY, 3) + " s";
  return out;
}

}  // namespace detail

/// Runs the configured experiment without touching the filesystem.
inline RunOutput run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::Evolve: return detail::run_evolve(cfg);
    case Experiment::Histogram: return detail::run_histogram(cfg);
    case Experiment::DelayScan: return detail::run_scan(cfg, false);
    case Experiment::ControlScan: return detail::run_scan(cfg, true);
    case Experiment::EntanglementCheck: return detail::run_entanglement_check(cfg);
    case Experiment::Rates: return detail::run_rates(cfg);
  }
  throw InvalidParameter("run_experiment: unknown experiment");
}

/// Runs the experiment and writes its artifact atomically. Returns the
/// summary line with the output path appended.
inline std::string run(const ExperimentConfig& cfg) {
  const RunOutput out = run_experiment(cfg);
  const std::string path = cfg.output.path.empty() ? default_output_path(cfg) : cfg.output.path;
  io::write_file_atomic(path, out.contents);
  return out.summary + " -> " + path;
}

}  // namespace ghzsim
