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

// Experiment configuration: a strict JSON document. Unknown keys are errors,
// every key is optional except "experiment", and units are fixed by the key
// names (fs, nm, Hz, s). See README.md for the schema.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ghzsim/ghz_experiments.hpp"
#include "ghzsim/rate_engine.hpp"

namespace ghzsim {

enum class Experiment { Evolve, Histogram, DelayScan, ControlScan, EntanglementCheck, Rates };
enum class OutputFormat { Csv, Json };
enum class Calibration { None, MultiPairGain, PairMean };

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { MissingFile, Malformed, UnknownKey, OutOfRange, WrongType };

  ConfigError(Kind kind, std::string key, const std::string& message)
      : std::runtime_error(describe(kind) + (key.empty() ? "" : " at '" + key + "'") + ": " + message),
        kind_(kind),
        key_(std::move(key)) {}

  Kind kind() const noexcept { return kind_; }
  const std::string& key() const noexcept { return key_; }

 private:
  static std::string describe(Kind k) {
    switch (k) {
      case Kind::MissingFile: return "missing config file";
      case Kind::Malformed: return "malformed config";
      case Kind::UnknownKey: return "unknown config key";
      case Kind::OutOfRange: return "config value out of range";
      case Kind::WrongType: return "config value has wrong type";
    }
    return "config error";
  }

  Kind kind_;
  std::string key_;
};

struct GhzSection {
  GhzParams params;  // params.seed mirrors ExperimentConfig::seed
  std::optional<double> theta1_deg;
  std::optional<double> theta2_deg;

  bool operator==(const GhzSection&) const = default;
};

struct RatesSection {
  double pulse_rate_hz = 7.6e7;
  double pair_mean = 4e-4;
  double efficiency = 0.1;
  double target_fourfold_per_pulse = 1e-10;
  Calibration calibrate = Calibration::MultiPairGain;
  double duration_s = 600.0;

  bool operator==(const RatesSection&) const = default;
};

struct ScanSection {
  std::vector<double> delays_fs;  // explicit list; takes precedence when non-empty
  double start_fs = -1500.0;
  double stop_fs = 1500.0;
  int points = 41;

  std::vector<double> delays() const {
    return delays_fs.empty() ? linspace(start_fs, stop_fs, points) : delays_fs;
  }

  bool operator==(const ScanSection&) const = default;
};

struct OutputSection {
  OutputFormat format = OutputFormat::Csv;
  std::string path;  // empty: ghzsim-<experiment>.<csv|json>

  bool operator==(const OutputSection&) const = default;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::DelayScan;
  std::uint64_t seed = 1;
  GhzSection ghz;
  RatesSection rates;
  ScanSection scan;
  OutputSection output;

  bool operator==(const ExperimentConfig&) const = default;
};

// --------------------------------------------------------------------------
// Enum names

inline const std::vector<std::pair<Experiment, std::string>>& experiment_names() {
  static const std::vector<std::pair<Experiment, std::string>> names = {
      {Experiment::Evolve, "evolve"},
      {Experiment::Histogram, "histogram"},
      {Experiment::DelayScan, "delay-scan"},
      {Experiment::ControlScan, "control-scan"},
      {Experiment::EntanglementCheck, "entanglement-check"},
      {Experiment::Rates, "rates"}};
  return names;
}

inline std::string to_string(Experiment e) {
  for (const auto& [v, n] : experiment_names()) {
    if (v == e) return n;
  }
  return "?";
}

inline std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

inline std::string to_string(Calibration c) {
  switch (c) {
    case Calibration::None: return "none";
    case Calibration::MultiPairGain: return "multi-pair-gain";
    case Calibration::PairMean: return "pair-mean";
  }
  return "?";
}

inline std::string to_string(ElementConvention c) {
  return c == ElementConvention::Physical ? "physical" : "phase-absorbed";
}

inline std::optional<OutputFormat> parse_output_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  return std::nullopt;
}

inline std::string default_output_path(const ExperimentConfig& c) {
  return "ghzsim-" + to_string(c.experiment) + "." + to_string(c.output.format);
}

// --------------------------------------------------------------------------
// Parsing

namespace detail {

using nlohmann::json;

inline std::string join_key(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

inline void reject_unknown(const json& obj, const std::string& prefix,
                           std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(ConfigError::Kind::WrongType, prefix, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.contains(key)) throw ConfigError(ConfigError::Kind::UnknownKey, join_key(prefix, key), "not recognized");
  }
}

inline double get_number(const json& obj, const std::string& prefix, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(ConfigError::Kind::WrongType, join_key(prefix, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(ConfigError::Kind::OutOfRange, join_key(prefix, key), "must be finite");
  return d;
}

inline std::optional<double> get_optional_number(const json& obj, const std::string& prefix, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return get_number(obj, prefix, key, 0.0);
}

inline std::int64_t get_integer(const json& obj, const std::string& prefix, const char* key, std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError(ConfigError::Kind::WrongType, join_key(prefix, key), "expected an integer");
  }
  return v.get<std::int64_t>();
}

inline std::string get_string(const json& obj, const std::string& prefix, const char* key, std::string fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(ConfigError::Kind::WrongType, join_key(prefix, key), "expected a string");
  return v.get<std::string>();
}

inline void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(ConfigError::Kind::OutOfRange, key, message);
}

inline void parse_ghz(const json& obj, const std::string& prefix, GhzSection& out) {
  reject_unknown(obj, prefix,
                 {"phase_rad", "delay_fs", "pump_sigma_fs", "coherence_sigma_fs", "noise_w", "mc_samples",
                  "convention", "theta1_deg", "theta2_deg"});
  auto& p = out.params;
  p.phase_rad = get_number(obj, prefix, "phase_rad", p.phase_rad);
  p.delay_fs = get_number(obj, prefix, "delay_fs", p.delay_fs);
  p.pump_sigma_fs = get_number(obj, prefix, "pump_sigma_fs", p.pump_sigma_fs);
  require(p.pump_sigma_fs >= 0.0, join_key(prefix, "pump_sigma_fs"), "must be >= 0");
  p.coherence_sigma_fs = get_number(obj, prefix, "coherence_sigma_fs", p.coherence_sigma_fs);
  require(p.coherence_sigma_fs > 0.0, join_key(prefix, "coherence_sigma_fs"), "must be > 0");
  p.noise_w = get_number(obj, prefix, "noise_w", p.noise_w);
  require(p.noise_w >= 0.0 && p.noise_w <= 1.0, join_key(prefix, "noise_w"), "must lie in [0, 1]");
  const auto samples = get_integer(obj, prefix, "mc_samples", p.mc_samples);
  require(samples >= 1 && samples <= 10'000'000, join_key(prefix, "mc_samples"), "must lie in [1, 1e7]");
  p.mc_samples = static_cast<int>(samples);
  const auto conv = get_string(obj, prefix, "convention", to_string(p.convention));
  if (conv == "phase-absorbed") {
    p.convention = ElementConvention::PhaseAbsorbed;
  } else if (conv == "physical") {
    p.convention = ElementConvention::Physical;
  } else {
    throw ConfigError(ConfigError::Kind::OutOfRange, join_key(prefix, "convention"),
                      "expected 'phase-absorbed' or 'physical'");
  }
  out.theta1_deg = get_optional_number(obj, prefix, "theta1_deg");
  out.theta2_deg = get_optional_number(obj, prefix, "theta2_deg");
}

inline void parse_rates(const json& obj, const std::string& prefix, RatesSection& out) {
  reject_unknown(obj, prefix,
                 {"pulse_rate_hz", "pair_mean", "efficiency", "target_fourfold_per_pulse", "calibrate",
                  "duration_s"});
  out.pulse_rate_hz = get_number(obj, prefix, "pulse_rate_hz", out.pulse_rate_hz);
  require(out.pulse_rate_hz > 0.0, join_key(prefix, "pulse_rate_hz"), "must be > 0");
  out.pair_mean = get_number(obj, prefix, "pair_mean", out.pair_mean);
  require(out.pair_mean >= 0.0, join_key(prefix, "pair_mean"), "must be >= 0");
  out.efficiency = get_number(obj, prefix, "efficiency", out.efficiency);
  require(out.efficiency >= 0.0 && out.efficiency <= 1.0, join_key(prefix, "efficiency"), "must lie in [0, 1]");
  out.target_fourfold_per_pulse =
      get_number(obj, prefix, "target_fourfold_per_pulse", out.target_fourfold_per_pulse);
  require(out.target_fourfold_per_pulse > 0.0 && out.target_fourfold_per_pulse < 1.0,
          join_key(prefix, "target_fourfold_per_pulse"), "must lie in (0, 1)");
  const auto cal = get_string(obj, prefix, "calibrate", to_string(out.calibrate));
  if (cal == "none") {
    out.calibrate = Calibration::None;
  } else if (cal == "multi-pair-gain") {
    out.calibrate = Calibration::MultiPairGain;
  } else if (cal == "pair-mean") {
    out.calibrate = Calibration::PairMean;
  } else {
    throw ConfigError(ConfigError::Kind::OutOfRange, join_key(prefix, "calibrate"),
                      "expected 'none', 'multi-pair-gain' or 'pair-mean'");
  }
  out.duration_s = get_number(obj, prefix, "duration_s", out.duration_s);
  require(out.duration_s >= 0.0, join_key(prefix, "duration_s"), "must be >= 0 (0 skips Monte Carlo)");
}

inline void parse_scan(const json& obj, const std::string& prefix, ScanSection& out) {
  reject_unknown(obj, prefix, {"delays_fs", "start_fs", "stop_fs", "points"});
  if (obj.contains("delays_fs")) {
    const auto& list = obj.at("delays_fs");
    if (!list.is_array()) {
      throw ConfigError(ConfigError::Kind::WrongType, join_key(prefix, "delays_fs"), "expected an array");
    }
    out.delays_fs.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string key = join_key(prefix, "delays_fs") + "[" + std::to_string(i) + "]";
      if (!list[i].is_number()) throw ConfigError(ConfigError::Kind::WrongType, key, "expected a number");
      const double d = list[i].get<double>();
      require(std::isfinite(d), key, "must be finite");
      out.delays_fs.push_back(d);
    }
    require(!out.delays_fs.empty(), join_key(prefix, "delays_fs"), "must not be empty");
  }
  out.start_fs = get_number(obj, prefix, "start_fs", out.start_fs);
  out.stop_fs = get_number(obj, prefix, "stop_fs", out.stop_fs);
  const auto points = get_integer(obj, prefix, "points", out.points);
  require(points >= 1 && points <= 100'000, join_key(prefix, "points"), "must lie in [1, 100000]");
  out.points = static_cast<int>(points);
}

}  // namespace detail

/// Parses and validates a configuration document, filling defaults.
inline ExperimentConfig parse_config(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(ConfigError::Kind::Malformed, "", e.what());
  }
  detail::reject_unknown(doc, "", {"experiment", "seed", "params", "output", "scan"});

  ExperimentConfig cfg;
  if (!doc.contains("experiment")) {
    throw ConfigError(ConfigError::Kind::OutOfRange, "experiment", "required key is missing");
  }
  const auto name = detail::get_string(doc, "", "experiment", "");
  bool found = false;
  for (const auto& [value, n] : experiment_names()) {
    if (n == name) {
      cfg.experiment = value;
      found = true;
    }
  }
  if (!found) throw ConfigError(ConfigError::Kind::OutOfRange, "experiment", "unknown experiment '" + name + "'");

  if (doc.contains("seed")) {
    const auto& v = doc.at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError(ConfigError::Kind::OutOfRange, "seed", "expected a non-negative integer");
    }
    cfg.seed = v.get<std::uint64_t>();
  }
  cfg.ghz.params.seed = cfg.seed;

  if (doc.contains("params")) {
    const auto& params = doc.at("params");
    detail::reject_unknown(params, "params", {"ghz", "rates"});
    if (params.contains("ghz")) detail::parse_ghz(params.at("ghz"), "params.ghz", cfg.ghz);
    if (params.contains("rates")) detail::parse_rates(params.at("rates"), "params.rates", cfg.rates);
  }
  if (doc.contains("scan")) detail::parse_scan(doc.at("scan"), "scan", cfg.scan);
  if (doc.contains("output")) {
    const auto& out = doc.at("output");
    detail::reject_unknown(out, "output", {"format", "path"});
    const auto fmt = detail::get_string(out, "output", "format", to_string(cfg.output.format));
    const auto parsed = parse_output_format(fmt);
    if (!parsed) throw ConfigError(ConfigError::Kind::OutOfRange, "output.format", "expected 'csv' or 'json'");
    cfg.output.format = *parsed;
    cfg.output.path = detail::get_string(out, "output", "path", cfg.output.path);
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(ConfigError::Kind::MissingFile, "", "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

/// Full document with every default spelled out; parse_config of the result
/// gives back an equal config.
inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  using nlohmann::json;
  json ghz = {{"phase_rad", c.ghz.params.phase_rad},
              {"delay_fs", c.ghz.params.delay_fs},
              {"pump_sigma_fs", c.ghz.params.pump_sigma_fs},
              {"coherence_sigma_fs", c.ghz.params.coherence_sigma_fs},
              {"noise_w", c.ghz.params.noise_w},
              {"mc_samples", c.ghz.params.mc_samples},
              {"convention", to_string(c.ghz.params.convention)}};
  if (c.ghz.theta1_deg) ghz["theta1_deg"] = *c.ghz.theta1_deg;
  if (c.ghz.theta2_deg) ghz["theta2_deg"] = *c.ghz.theta2_deg;
  json rates = {{"pulse_rate_hz", c.rates.pulse_rate_hz},
                {"pair_mean", c.rates.pair_mean},
                {"efficiency", c.rates.efficiency},
                {"target_fourfold_per_pulse", c.rates.target_fourfold_per_pulse},
                {"calibrate", to_string(c.rates.calibrate)},
                {"duration_s", c.rates.duration_s}};
  json scan = {{"start_fs", c.scan.start_fs}, {"stop_fs", c.scan.stop_fs}, {"points", c.scan.points}};
  if (!c.scan.delays_fs.empty()) scan["delays_fs"] = c.scan.delays_fs;
  json output = {{"format", to_string(c.output.format)}};
  if (!c.output.path.empty()) output["path"] = c.output.path;
  return json{{"experiment", to_string(c.experiment)},
              {"seed", c.seed},
              {"params", {{"ghz", ghz}, {"rates", rates}}},
              {"scan", scan},
              {"output", output}};
}

}  // namespace ghzsim
