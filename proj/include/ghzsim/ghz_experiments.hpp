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

// Scripted three-photon GHZ experiments: circuit construction, the eight-term
// H/V histogram, delay scans of the D3 analysis, the two-photon
// "entangled entanglement" check, and small physical helpers.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ghzsim/detection.hpp"
#include "ghzsim/error.hpp"
#include "ghzsim/mode_algebra.hpp"
#include "ghzsim/optical_elements.hpp"
#include "ghzsim/photon_sources.hpp"
#include "ghzsim/random.hpp"

namespace ghzsim {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// tau_c = lambda^2 / (c dlambda), in femtoseconds.
inline double coherence_time_from_filter(double lambda_nm, double dlambda_nm) {
  if (!(lambda_nm > 0.0) || !(dlambda_nm > 0.0) || !std::isfinite(lambda_nm) ||
      !std::isfinite(dlambda_nm)) {
    throw InvalidParameter("coherence_time_from_filter: wavelengths must be positive");
  }
  const double lambda_m = lambda_nm * 1e-9;
  const double dlambda_m = dlambda_nm * 1e-9;
  return lambda_m * lambda_m / (kSpeedOfLight * dlambda_m) * 1e15;
}

/// Packet sigma for a given coherence time (sigma = tau_c / 2).
inline double packet_sigma_from_coherence_time(double tau_c_fs) {
  if (!(tau_c_fs > 0.0)) throw InvalidParameter("coherence time must be positive");
  return tau_c_fs / 2.0;
}

struct GhzParams {
  double phase_rad = std::numbers::pi;
  double delay_fs = 0.0;                          // path-a delay
  double pump_sigma_fs = 200.0 / kFwhmPerSigma;   // emission-time jitter per pair
  double coherence_sigma_fs = 500.0 / 2.0;        // packet sigma
  double noise_w = 0.0;                           // histogram white-noise weight
  int mc_samples = 256;
  std::uint64_t seed = 1;
  ElementConvention convention = ElementConvention::PhaseAbsorbed;

  void validate() const {
    if (!std::isfinite(phase_rad) || !std::isfinite(delay_fs)) {
      throw InvalidParameter("GhzParams: phase and delay must be finite");
    }
    if (!(pump_sigma_fs >= 0.0) || !std::isfinite(pump_sigma_fs)) {
      throw InvalidParameter("GhzParams: pump_sigma must be >= 0");
    }
    if (!(coherence_sigma_fs > 0.0) || !std::isfinite(coherence_sigma_fs)) {
      throw InvalidParameter("GhzParams: coherence_sigma must be > 0");
    }
    if (!(noise_w >= 0.0 && noise_w <= 1.0)) {
      throw InvalidParameter("GhzParams: noise_w must lie in [0, 1]");
    }
    if (mc_samples < 1) throw InvalidParameter("GhzParams: mc_samples must be >= 1");
  }

  SourceParams source() const {
    SourceParams s;
    s.phase_rad = phase_rad;
    s.packet_sigma_fs = coherence_sigma_fs;
    s.pump_sigma_fs = pump_sigma_fs;
    return s;
  }

  bool operator==(const GhzParams&) const = default;
};

/// PBS -> HWP(22.5) -> BS -> PBS built from individual elements. With
/// PhaseAbsorbed elements and the rotation wave-plate convention the chain
/// composes to ghz_reference_preset(); Physical uses i-reflections and a
/// Jones wave plate.
inline Circuit ghz_element_chain(ElementConvention conv) {
  const auto plate = conv == ElementConvention::Physical ? WavePlateConvention::Jones
                                                         : WavePlateConvention::Rotation;
  Circuit c;
  c.stages.emplace_back(pbs_map({"a", "a_vac", "T", "c"}, conv));
  c.stages.emplace_back(hwp_map(22.5, "c", plate));
  c.stages.emplace_back(bs_map({"b", "b_vac", "3", "d"}, conv));
  c.stages.emplace_back(pbs_map({"c", "d", "2", "1"}, conv));
  return c;
}

/// [delay on path a, preset] for PhaseAbsorbed; the explicit element chain
/// after the delay for Physical.
inline Circuit build_ghz_circuit(const GhzParams& params) {
  params.validate();
  Circuit c;
  c.stages.emplace_back(DelayStage{"a", params.delay_fs});
  if (params.convention == ElementConvention::PhaseAbsorbed) {
    c.stages.emplace_back(ghz_reference_preset());
  } else {
    auto chain = ghz_element_chain(ElementConvention::Physical);
    c.stages.insert(c.stages.end(), chain.stages.begin(), chain.stages.end());
  }
  return c;
}

/// Two pairs emitted at the given times and sent through the GHZ circuit.
inline StateVector evolve_double_pair(const GhzParams& params, double t0_first_fs,
                                      double t0_second_fs) {
  return evolve(double_pair(params.source(), t0_first_fs, t0_second_fs), build_ghz_circuit(params));
}

/// (1/sqrt2) |H>_T (|H H V>_123 + |V V H>_123), every packet (0, sigma).
inline StateVector ghz_reference_state(double packet_sigma_fs = kDefaultPacketSigmaFs) {
  const WavePacket w{0.0, packet_sigma_fs};
  const double r = 1.0 / std::numbers::sqrt2;
  using P = Polarization;
  return StateVector({
      KetTerm{r, {make_photon("T", P::H, w), make_photon("1", P::H, w), make_photon("2", P::H, w),
                  make_photon("3", P::V, w)}},
      KetTerm{r, {make_photon("T", P::H, w), make_photon("1", P::V, w), make_photon("2", P::V, w),
                  make_photon("3", P::H, w)}},
  });
}

/// Post-selected fourfold state (no analyzers) for pairs emitted at t=0.
inline PostselectResult ghz_postselected_state(const GhzParams& params) {
  return postselect(evolve_double_pair(params, 0.0, 0.0), fourfold_pattern({}, {}, {}));
}

// --------------------------------------------------------------------------
// H/V histogram

struct TermHistogram {
  std::array<std::string, 8> labels;
  std::array<double, 8> probabilities{};
  double desired_to_undesired_sum_ratio = 0.0;    // (HHV + VVH) : (other six)
  double desired_to_undesired_mean_ratio = 0.0;   // per-combination reading
};

inline constexpr std::array<const char*, 8> kHistogramLabels = {
    "H1H2H3", "H1H2V3", "H1V2H3", "H1V2V3", "V1H2H3", "V1H2V3", "V1V2H3", "V1V2V3"};
inline constexpr std::size_t kDesiredHHV = 1;
inline constexpr std::size_t kDesiredVVH = 6;

/// H/V analysis of D1 D2 D3 conditioned on the trigger, mixed with white
/// noise: p = (1 - w) p_ideal + w / 8.
inline TermHistogram term_histogram(const GhzParams& params) {
  params.validate();
  const StateVector state = evolve_double_pair(params, 0.0, 0.0);
  constexpr double kH = 90.0;
  constexpr double kV = 0.0;
  std::array<double, 8> ideal{};
  double sum = 0.0;
  for (std::size_t k = 0; k < 8; ++k) {
    const double a1 = (k & 4) ? kV : kH;
    const double a2 = (k & 2) ? kV : kH;
    const double a3 = (k & 1) ? kV : kH;
    ideal[k] = postselect(state, fourfold_pattern(a1, a2, a3)).probability;
    sum += ideal[k];
  }
  if (!(sum > 0.0)) throw UndefinedConditional("term_histogram: no fourfold events");

  TermHistogram h;
  double desired = 0.0;
  double undesired = 0.0;
  for (std::size_t k = 0; k < 8; ++k) {
    h.labels[k] = kHistogramLabels[k];
    h.probabilities[k] = (1.0 - params.noise_w) * ideal[k] / sum + params.noise_w / 8.0;
    (k == kDesiredHHV || k == kDesiredVVH ? desired : undesired) += h.probabilities[k];
  }
  const double inf = std::numeric_limits<double>::infinity();
  h.desired_to_undesired_sum_ratio = undesired > 0.0 ? desired / undesired : inf;
  h.desired_to_undesired_mean_ratio = undesired > 0.0 ? (desired / 2.0) / (undesired / 6.0) : inf;
  return h;
}

/// Noise weight giving a desired:undesired summed ratio of `ratio`:
/// (1 - 3w/4) / (3w/4) = ratio.
inline double noise_weight_for_ratio(double ratio) {
  if (!(ratio > 0.0)) throw InvalidParameter("noise_weight_for_ratio: ratio must be positive");
  return 4.0 / (3.0 * (ratio + 1.0));
}

// --------------------------------------------------------------------------
// Delay scans

struct ScanRecord {
  double delay_fs = 0.0;
  double p_plus45 = 0.0;
  double p_minus45 = 0.0;
  double visibility_contribution = 0.0;  // p_minus45 - p_plus45

  bool operator==(const ScanRecord&) const = default;
};

inline constexpr int kMcBatchSize = 64;

/// Standard-normal emission-time draws (z1, z2) for both pairs. Batch b uses
/// substream (seed, b), so the draws do not depend on how batches are run.
inline std::vector<std::pair<double, double>> emission_time_draws(std::uint64_t seed, int samples) {
  std::vector<std::pair<double, double>> draws;
  draws.reserve(static_cast<std::size_t>(samples));
  for (int b = 0; b * kMcBatchSize < samples; ++b) {
    RngStream rng = make_substream(seed, static_cast<std::uint64_t>(b));
    std::normal_distribution<double> normal(0.0, 1.0);
    const int n = std::min(kMcBatchSize, samples - b * kMcBatchSize);
    for (int i = 0; i < n; ++i) {
      const double z1 = normal(rng);
      const double z2 = normal(rng);
      draws.emplace_back(z1, z2);
    }
  }
  return draws;
}

/// Joint D3 probabilities averaged over emission times. With pump_sigma 0
/// this is one pure-state evaluation at t = 0.
inline D3Probabilities averaged_d3_joint(const GhzParams& params, double theta1_deg,
                                         double theta2_deg,
                                         const std::vector<std::pair<double, double>>& draws) {
  if (params.pump_sigma_fs == 0.0) {
    return d3_joint_probabilities(evolve_double_pair(params, 0.0, 0.0), theta1_deg, theta2_deg);
  }
  D3Probabilities acc;
  for (const auto& [z1, z2] : draws) {
    const auto p = d3_joint_probabilities(
        evolve_double_pair(params, params.pump_sigma_fs * z1, params.pump_sigma_fs * z2),
        theta1_deg, theta2_deg);
    acc.p_plus45 += p.p_plus45;
    acc.p_minus45 += p.p_minus45;
  }
  const double n = static_cast<double>(draws.size());
  return {acc.p_plus45 / n, acc.p_minus45 / n};
}

/// D3 +/-45 statistics conditioned on T, D1 at theta1 and D2 at theta2, for
/// each delay of path a. Fourfold probabilities are averaged over the pairs'
/// emission times (independent Gaussians of width pump_sigma) and then
/// renormalized over the two D3 outcomes. Every delay point reuses the same
/// draws.
inline std::vector<ScanRecord> delay_scan(const GhzParams& params, const std::vector<double>& delays_fs,
                                          double theta1_deg, double theta2_deg) {
  params.validate();
  const auto draws = params.pump_sigma_fs > 0.0 ? emission_time_draws(params.seed, params.mc_samples)
                                                : std::vector<std::pair<double, double>>{};
  std::vector<ScanRecord> records;
  records.reserve(delays_fs.size());
  for (double delay : delays_fs) {
    GhzParams p = params;
    p.delay_fs = delay;
    const auto cond = condition_on_d3(averaged_d3_joint(p, theta1_deg, theta2_deg, draws));
    records.push_back({delay, cond.p_plus45, cond.p_minus45, cond.p_minus45 - cond.p_plus45});
  }
  return records;
}

/// `points` evenly spaced values from start to stop inclusive.
inline std::vector<double> linspace(double start, double stop, int points) {
  if (points < 1) throw InvalidParameter("linspace: points must be >= 1");
  if (points == 1) return {start};
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] = start + (stop - start) * i / (points - 1);
  }
  return out;
}

/// Two-curve contrast at the record closest to zero delay:
/// V = (p_-45 - p_+45) / (p_-45 + p_+45).
inline double visibility(const std::vector<ScanRecord>& records) {
  if (records.empty()) throw InvalidParameter("visibility: no scan records");
  const auto it = std::min_element(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::abs(a.delay_fs) < std::abs(b.delay_fs);
  });
  const double sum = it->p_minus45 + it->p_plus45;
  if (!(sum > 0.0)) throw InvalidParameter("visibility: zero counts at zero delay");
  return (it->p_minus45 - it->p_plus45) / sum;
}

// --------------------------------------------------------------------------
// Entangled entanglement

struct EntanglementCheck {
  StateVector conditional;  // photons on paths 2 and 3
  double fidelity = 0.0;    // against (|+45,+45> - |-45,-45>)/sqrt2
};

/// (1/sqrt2)(|+45>_2 |+45>_3 - |-45>_2 |-45>_3), which equals
/// (1/sqrt2)(|H>_2 |V>_3 + |V>_2 |H>_3).
inline StateVector rotated_basis_bell_state(const WavePacket& packet2, const WavePacket& packet3) {
  const double r = 1.0 / std::numbers::sqrt2;
  using P = Polarization;
  std::vector<KetTerm> terms;
  for (const double sign : {1.0, -1.0}) {
    // |sign 45> = (|H> + sign |V>) / sqrt2
    const std::array<std::pair<P, double>, 2> diag{{{P::H, r}, {P::V, sign * r}}};
    for (const auto& [pol2, c2] : diag) {
      for (const auto& [pol3, c3] : diag) {
        terms.emplace_back(sign * r * c2 * c3, std::vector<Photon>{make_photon("2", pol2, packet2),
                                                                   make_photon("3", pol3, packet3)});
      }
    }
  }
  return StateVector(std::move(terms));
}

/// Projects the photon on path 1 onto a polarizer at theta1, discards every
/// path other than 2 and 3, and compares the renormalized two-photon state
/// with the rotated-basis Bell state. Other paths present in `state` (e.g. T)
/// are detected without analyzer.
inline EntanglementCheck entangled_entanglement_check(const StateVector& state, double theta1_deg) {
  std::set<std::string> paths;
  for (const auto& t : state.terms()) {
    for (const auto& p : t.photons()) paths.insert(p.mode.path);
  }
  if (!paths.contains("1") || !paths.contains("2") || !paths.contains("3")) {
    throw InvalidParameter("entangled_entanglement_check: state needs photons on paths 1, 2, 3");
  }
  std::vector<AnalyzerSetting> settings;
  for (const auto& path : paths) {
    settings.push_back(path == "1" ? AnalyzerSetting::polarizer(path, theta1_deg)
                                   : AnalyzerSetting::pass_through(path));
  }
  const auto result = postselect(state, DetectionPattern(std::move(settings)));
  if (!(result.probability > 0.0)) {
    throw UndefinedConditional("entangled_entanglement_check: projection probability is zero");
  }
  std::set<std::string> dropped = paths;
  dropped.erase("2");
  dropped.erase("3");
  EntanglementCheck out;
  out.conditional = drop_paths(result.conditional, dropped);

  WavePacket w2;
  WavePacket w3;
  for (const auto& p : out.conditional.terms().front().photons()) {
    (p.mode.path == "2" ? w2 : w3) = p.packet;
  }
  out.fidelity = fidelity(out.conditional, rotated_basis_bell_state(w2, w3));
  return out;
}

}  // namespace ghzsim
