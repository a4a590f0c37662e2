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

// Polarization analysis and one-photon-per-output post-selection.
//
// Analyzer angles are measured from the vertical: a polarizer at theta
// transmits sin(theta)|H> + cos(theta)|V>, so 0 deg passes V, 90 deg passes H
// and +/-45 deg pass (H +/- V)/sqrt2 up to sign. After projection a photon's
// polarization is recorded in the analyzer frame: Polarization::H stands for
// "along the transmission axis".

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ghzsim/error.hpp"
#include "ghzsim/mode_algebra.hpp"
#include "ghzsim/optical_elements.hpp"

namespace ghzsim {

/// Folds an angle into [0, 180).
inline double normalize_angle_deg(double deg) {
  double a = std::fmod(deg, 180.0);
  if (a < 0.0) a += 180.0;
  if (a >= 180.0) a -= 180.0;
  return a;
}

struct AnalyzerSetting {
  std::string path;
  std::optional<double> angle_deg;  // nullopt: no polarizer, both polarizations detected

  static AnalyzerSetting pass_through(std::string path) { return {std::move(path), std::nullopt}; }
  static AnalyzerSetting polarizer(std::string path, double angle_deg) {
    return {std::move(path), normalize_angle_deg(angle_deg)};
  }
};

/// Exactly one photon on each listed path, none anywhere else.
class DetectionPattern {
 public:
  DetectionPattern() = default;
  explicit DetectionPattern(std::vector<AnalyzerSetting> settings) : settings_(std::move(settings)) {
    std::set<std::string> seen;
    for (auto& s : settings_) {
      if (!seen.insert(s.path).second) {
        throw InvalidParameter("DetectionPattern: path '" + s.path + "' listed twice");
      }
      if (s.angle_deg) s.angle_deg = normalize_angle_deg(*s.angle_deg);
    }
  }

  const std::vector<AnalyzerSetting>& settings() const noexcept { return settings_; }

  const AnalyzerSetting* find(const std::string& path) const {
    for (const auto& s : settings_) {
      if (s.path == path) return &s;
    }
    return nullptr;
  }

 private:
  std::vector<AnalyzerSetting> settings_;
};

struct PostselectResult {
  double probability = 0.0;
  StateVector conditional;  // normalized; empty when probability is 0
};

/// Unnormalized projection of `s` onto the pattern: terms without exactly one
/// photon per listed path are dropped, analyzed photons are projected onto
/// their analyzer axis.
inline StateVector project_onto_pattern(const StateVector& s, const DetectionPattern& pattern) {
  std::vector<KetTerm> kept;
  for (const auto& term : s.terms()) {
    std::map<std::string, int> counts;
    for (const auto& p : term.photons()) ++counts[p.mode.path];
    bool match = counts.size() == pattern.settings().size();
    for (const auto& setting : pattern.settings()) {
      auto it = counts.find(setting.path);
      if (it == counts.end() || it->second != 1) match = false;
    }
    if (!match) continue;

    Amplitude amp = term.amplitude();
    std::vector<Photon> photons = term.photons();
    for (auto& p : photons) {
      const auto* setting = pattern.find(p.mode.path);
      if (setting == nullptr || !setting->angle_deg) continue;
      const auto [h, v] = analyzer_axis(*setting->angle_deg);
      amp *= (p.mode.pol == Polarization::H) ? h : v;
      p.mode.pol = Polarization::H;
    }
    kept.emplace_back(amp, std::move(photons));
  }
  return StateVector(std::move(kept));
}

/// Probability of the detection pattern, ||P psi||^2 / <psi|psi>, and the
/// renormalized conditional state. Overlaps use full wavepacket inner
/// products, so partial distinguishability lowers interference by itself.
inline PostselectResult postselect(const StateVector& s, const DetectionPattern& pattern) {
  const double total = norm_squared(s);
  if (!(total > 0.0)) return {};
  StateVector projected = project_onto_pattern(s, pattern);
  const double kept = norm_squared(projected);
  if (!(kept > 0.0)) return {};
  return {kept / total, scaled(projected, 1.0 / std::sqrt(kept))};
}

inline double pattern_probability(const StateVector& s, const std::vector<AnalyzerSetting>& settings) {
  return postselect(s, DetectionPattern(settings)).probability;
}

/// Fourfold pattern T / D1 / D2 / D3 used throughout the GHZ experiments.
inline DetectionPattern fourfold_pattern(std::optional<double> theta1_deg,
                                         std::optional<double> theta2_deg,
                                         std::optional<double> theta3_deg) {
  auto setting = [](std::string path, std::optional<double> angle) {
    return angle ? AnalyzerSetting::polarizer(std::move(path), *angle)
                 : AnalyzerSetting::pass_through(std::move(path));
  };
  return DetectionPattern({AnalyzerSetting::pass_through("T"), setting("1", theta1_deg),
                           setting("2", theta2_deg), setting("3", theta3_deg)});
}

struct D3Probabilities {
  double p_plus45 = 0.0;
  double p_minus45 = 0.0;
};

/// Joint (unconditioned) probabilities of the fourfold pattern with D3 at
/// +45 and -45 deg.
inline D3Probabilities d3_joint_probabilities(const StateVector& s, double theta1_deg,
                                              double theta2_deg) {
  return {postselect(s, fourfold_pattern(theta1_deg, theta2_deg, 45.0)).probability,
          postselect(s, fourfold_pattern(theta1_deg, theta2_deg, -45.0)).probability};
}

/// Renormalizes a pair of joint probabilities over the two D3 outcomes.
inline D3Probabilities condition_on_d3(const D3Probabilities& joint) {
  const double sum = joint.p_plus45 + joint.p_minus45;
  if (!(sum > 0.0)) {
    throw UndefinedConditional("conditional_d3: conditioning event has probability zero");
  }
  return {joint.p_plus45 / sum, joint.p_minus45 / sum};
}

/// D3 analyzer statistics conditioned on the trigger and on D1/D2 firing
/// behind polarizers at theta1/theta2.
inline D3Probabilities conditional_d3(const StateVector& s, double theta1_deg, double theta2_deg) {
  return condition_on_d3(d3_joint_probabilities(s, theta1_deg, theta2_deg));
}

inline constexpr double kNormalizationTol = 1e-9;

/// |<reference|s>|^2 for normalized states.
inline double fidelity(const StateVector& s, const StateVector& reference) {
  if (std::abs(norm_squared(s) - 1.0) > kNormalizationTol ||
      std::abs(norm_squared(reference) - 1.0) > kNormalizationTol) {
    throw InvalidParameter("fidelity: both states must be normalized");
  }
  return std::norm(state_inner_product(reference, s));
}

/// Removes the photons on `paths` from every term. They must be in one common
/// product state across all terms (same modes and packets, tags aside);
/// otherwise the remainder is not a pure state and InvalidParameter is thrown.
inline StateVector drop_paths(const StateVector& s, const std::set<std::string>& paths) {
  std::vector<KetTerm> out;
  std::optional<std::vector<std::pair<ModeLabel, WavePacket>>> common;
  for (const auto& term : s.terms()) {
    std::vector<std::pair<ModeLabel, WavePacket>> dropped;
    std::vector<Photon> kept;
    for (const auto& p : term.photons()) {
      if (paths.contains(p.mode.path)) {
        dropped.emplace_back(p.mode, p.packet);
      } else {
        kept.push_back(p);
      }
    }
    if (!common) {
      common = dropped;
    } else if (*common != dropped) {
      throw InvalidParameter("drop_paths: dropped photons differ between terms");
    }
    out.emplace_back(term.amplitude(), std::move(kept));
  }
  // The dropped factor contributes a constant norm; renormalize it away.
  return normalized(StateVector(std::move(out)));
}

/// Probability distribution of photon numbers on `paths` (last entry counts
/// photons anywhere else), normalized by <psi|psi>.
inline std::map<std::vector<unsigned>, double> occupation_distribution(
    const StateVector& s, const std::vector<std::string>& paths) {
  std::map<std::vector<unsigned>, std::vector<KetTerm>> groups;
  for (const auto& term : s.terms()) {
    std::vector<unsigned> counts(paths.size() + 1, 0);
    for (const auto& p : term.photons()) {
      std::size_t k = 0;
      while (k < paths.size() && paths[k] != p.mode.path) ++k;
      ++counts[k];
    }
    groups[counts].push_back(term);
  }
  const double total = norm_squared(s);
  std::map<std::vector<unsigned>, double> dist;
  if (!(total > 0.0)) return dist;
  for (auto& [counts, terms] : groups) {
    const double p = norm_squared(StateVector(std::move(terms))) / total;
    if (p > 0.0) dist[counts] = p;
  }
  return dist;
}

}  // namespace ghzsim
