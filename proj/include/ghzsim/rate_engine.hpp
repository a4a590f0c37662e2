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

// Coincidence-rate estimates for the GHZ setup: Poisson pair emission per
// pump pulse, routing through the ideal circuit, per-photon detection
// efficiency, and fourfold post-selection. Pair numbers above three are
// ignored by both the analytic and the Monte Carlo estimates.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "ghzsim/detection.hpp"
#include "ghzsim/error.hpp"
#include "ghzsim/mode_algebra.hpp"
#include "ghzsim/optical_elements.hpp"
#include "ghzsim/photon_sources.hpp"
#include "ghzsim/random.hpp"

namespace ghzsim {

inline constexpr unsigned kMaxPairs = 3;
inline constexpr std::size_t kDetectors = 4;  // T, D1, D2, D3

using Occupation = std::array<unsigned, kDetectors>;

struct OutcomeDistribution {
  std::vector<Occupation> occupations;
  std::vector<double> probabilities;
};

/// Photon-number distribution over (T, 1, 2, 3) for k pairs emitted
/// simultaneously into the ideal circuit. Photons that leave through no
/// detector port are not counted.
inline OutcomeDistribution circuit_outcomes(unsigned pairs) {
  const StateVector out =
      apply_mode_map(multi_pair(SourceParams{}, std::vector<double>(pairs, 0.0)), ghz_reference_preset());
  OutcomeDistribution dist;
  for (const auto& [counts, p] : occupation_distribution(out, {"T", "1", "2", "3"})) {
    dist.occupations.push_back({counts[0], counts[1], counts[2], counts[3]});
    dist.probabilities.push_back(p);
  }
  return dist;
}

/// Outcome distributions for 0..kMaxPairs pairs, computed once.
inline const std::array<OutcomeDistribution, kMaxPairs + 1>& ideal_circuit_outcomes() {
  static const auto table = [] {
    std::array<OutcomeDistribution, kMaxPairs + 1> t;
    for (unsigned k = 0; k <= kMaxPairs; ++k) t[k] = circuit_outcomes(k);
    return t;
  }();
  return table;
}

/// Probability that each detector registers exactly one of the photons that
/// reach it, each photon being detected independently with `efficiency`.
inline double one_detected_per_detector(const Occupation& occ, double efficiency) {
  double p = 1.0;
  for (unsigned n : occ) {
    if (n == 0) return 0.0;
    p *= n * efficiency * std::pow(1.0 - efficiency, static_cast<double>(n - 1));
  }
  return p;
}

/// Fourfold probability for k emitted pairs including photon loss.
inline double fourfold_given_pairs(unsigned pairs, double efficiency) {
  const auto& dist = ideal_circuit_outcomes().at(pairs);
  double p = 0.0;
  for (std::size_t i = 0; i < dist.occupations.size(); ++i) {
    p += dist.probabilities[i] * one_detected_per_detector(dist.occupations[i], efficiency);
  }
  return p;
}

/// Probability that a double-pair emission through the ideal circuit gives
/// one photon per detector port (before losses), from post-selection.
inline double ideal_double_pair_postselect_probability() {
  static const double p = postselect(apply_mode_map(double_pair(SourceParams{}, 0.0, 0.0),
                                                    ghz_reference_preset()),
                                     fourfold_pattern({}, {}, {}))
                              .probability;
  return p;
}

struct RateParams {
  double pulse_rate = 7.6e7;  // pulses per second
  double pair_mean = 4e-4;    // pairs per pulse
  double efficiency = 0.1;    // per-photon collection and detection
  double postselect_prob_double = 0.0;
  double postselect_prob_triple = 0.0;  // includes losses, see fourfold_given_pairs
  // Calibration factor on the two- and three-pair emission probabilities.
  // Absorbs coupling factors the pair mean and efficiency do not capture.
  double multi_pair_gain = 1.0;

  void validate() const {
    if (!(pulse_rate >= 0.0) || !std::isfinite(pulse_rate)) {
      throw InvalidParameter("RateParams: pulse_rate must be >= 0");
    }
    if (!(pair_mean >= 0.0) || !std::isfinite(pair_mean)) {
      throw InvalidParameter("RateParams: pair_mean must be >= 0");
    }
    for (double p : {efficiency, postselect_prob_double, postselect_prob_triple}) {
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("RateParams: probabilities must lie in [0, 1]");
    }
    if (!(multi_pair_gain > 0.0) || !std::isfinite(multi_pair_gain)) {
      throw InvalidParameter("RateParams: multi_pair_gain must be > 0");
    }
  }
};

/// Probability that a pulse creates `pairs` pairs: Poisson, with the
/// multi-pair terms scaled by the calibration gain.
inline double pair_number_probability(const RateParams& p, unsigned pairs) {
  const double poisson = poisson_pmf(pairs, p.pair_mean);
  return pairs >= 2 ? p.multi_pair_gain * poisson : poisson;
}

/// Fills the post-selection probabilities from the ideal circuit.
inline RateParams make_rate_params(double pulse_rate, double pair_mean, double efficiency) {
  RateParams p{pulse_rate, pair_mean, efficiency, 0.0, 0.0, 1.0};
  p.validate();
  p.postselect_prob_double = ideal_double_pair_postselect_probability();
  p.postselect_prob_triple = fourfold_given_pairs(3, efficiency);
  return p;
}

inline double fourfold_double_prob_per_pulse(const RateParams& p) {
  p.validate();
  return pair_number_probability(p, 2) * p.postselect_prob_double * std::pow(p.efficiency, 4);
}

inline double fourfold_triple_prob_per_pulse(const RateParams& p) {
  p.validate();
  return pair_number_probability(p, 3) * p.postselect_prob_triple;
}

/// P(2) p_double eta^4 + P(3) p_triple(eta), multi-pair terms scaled by the gain.
inline double fourfold_prob_per_pulse(const RateParams& p) {
  return fourfold_double_prob_per_pulse(p) + fourfold_triple_prob_per_pulse(p);
}

/// Distribution of detector firing patterns (bit k set: detector k fired)
/// for k pairs, threshold detection with per-photon efficiency.
inline std::array<double, 16> firing_distribution(unsigned pairs, double efficiency) {
  std::array<double, 16> out{};
  const auto& dist = ideal_circuit_outcomes().at(pairs);
  for (std::size_t i = 0; i < dist.occupations.size(); ++i) {
    for (unsigned mask = 0; mask < 16; ++mask) {
      double p = dist.probabilities[i];
      for (std::size_t d = 0; d < kDetectors; ++d) {
        const double silent = std::pow(1.0 - efficiency, dist.occupations[i][d]);
        p *= (mask >> d & 1u) ? 1.0 - silent : silent;
      }
      out[mask] += p;
    }
  }
  return out;
}

/// Per-pulse probability that at least `min_detectors` detectors fire.
inline double coincidence_prob_per_pulse(const RateParams& p, unsigned min_detectors) {
  p.validate();
  double total = 0.0;
  for (unsigned k = 1; k <= kMaxPairs; ++k) {
    const auto dist = firing_distribution(k, p.efficiency);
    for (unsigned mask = 0; mask < 16; ++mask) {
      if (static_cast<unsigned>(std::popcount(mask)) >= min_detectors) {
        total += pair_number_probability(p, k) * dist[mask];
      }
    }
  }
  return total;
}

inline double twofold_prob_per_pulse(const RateParams& p) { return coincidence_prob_per_pulse(p, 2); }

/// Smallest pair_mean in [0, 1] whose fourfold probability per pulse reaches
/// `target`, by bisection (the probability is increasing there).
inline RateParams calibrate_pair_mean(RateParams p, double target) {
  if (!(target > 0.0)) throw InvalidParameter("calibrate_pair_mean: target must be positive");
  double lo = 0.0;
  double hi = 1.0;
  p.pair_mean = hi;
  if (fourfold_prob_per_pulse(p) < target) {
    throw InvalidParameter("calibrate_pair_mean: target unreachable with pair_mean <= 1");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    p.pair_mean = 0.5 * (lo + hi);
    (fourfold_prob_per_pulse(p) < target ? lo : hi) = p.pair_mean;
  }
  p.pair_mean = hi;
  return p;
}

/// Multi-pair gain that brings the fourfold probability per pulse to
/// `target` at fixed pair mean and efficiency (the probability is linear in
/// the gain).
inline RateParams calibrate_multi_pair_gain(RateParams p, double target) {
  if (!(target > 0.0)) throw InvalidParameter("calibrate_multi_pair_gain: target must be positive");
  p.multi_pair_gain = 1.0;
  const double base = fourfold_prob_per_pulse(p);
  if (!(base > 0.0)) {
    throw InvalidParameter("calibrate_multi_pair_gain: fourfold probability is zero");
  }
  p.multi_pair_gain = target / base;
  p.validate();
  return p;
}

struct CountReport {
  double duration_s = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t pulses = 0;
  std::array<std::uint64_t, kMaxPairs + 1> pulses_with_pairs{};  // index = pair number
  std::uint64_t singles = 0;    // pulses with at least one detector firing
  std::uint64_t twofolds = 0;   // pulses with at least two detectors firing
  std::uint64_t fourfold_double = 0;
  std::uint64_t fourfold_triple = 0;

  bool operator==(const CountReport&) const = default;
};

namespace detail {

// Substream indices; one per independent part of the simulation.
inline constexpr std::uint64_t kStreamPairCounts = 0;
inline constexpr std::uint64_t kStreamSinglePair = 1;
inline constexpr std::uint64_t kStreamMultiPairBase = 2;

template <typename URBG>
std::uint64_t binomial(std::uint64_t n, double p, URBG& rng) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  std::binomial_distribution<std::uint64_t> dist(n, p);
  return dist(rng);
}

}  // namespace detail

/// Monte Carlo fourfold counting over `duration_s` of pump pulses.
///
/// Pulses are thinned by pair number first (binomial splitting of the pulse
/// count). Single-pair pulses can never give a fourfold and are tallied in
/// aggregate by multinomial sampling of their firing patterns. Every pulse
/// with two or three pairs is simulated on its own: an output occupation is
/// drawn from the circuit's outcome distribution, then each photon is
/// detected with probability `efficiency`.
inline CountReport simulate_counts(const RateParams& params, double duration_s, std::uint64_t seed) {
  params.validate();
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw InvalidParameter("simulate_counts: duration must be positive");
  }
  double emission_mass = 0.0;
  for (unsigned k = 1; k <= kMaxPairs; ++k) emission_mass += pair_number_probability(params, k);
  if (emission_mass > 1.0) {
    throw InvalidParameter("simulate_counts: pair-number probabilities exceed 1 (gain too large)");
  }
  CountReport report;
  report.duration_s = duration_s;
  report.seed = seed;
  report.pulses = static_cast<std::uint64_t>(std::llround(params.pulse_rate * duration_s));

  {
    RngStream rng = make_substream(seed, detail::kStreamPairCounts);
    std::uint64_t remaining = report.pulses;
    double mass_left = 1.0;
    for (unsigned k = 1; k <= kMaxPairs; ++k) {
      const double pk = pair_number_probability(params, k);
      const double q = mass_left > 0.0 ? std::min(1.0, pk / mass_left) : 0.0;
      report.pulses_with_pairs[k] = detail::binomial(remaining, q, rng);
      remaining -= report.pulses_with_pairs[k];
      mass_left -= pk;
    }
    report.pulses_with_pairs[0] = remaining;  // includes the > 3 pair tail, treated as silent
  }

  const auto tally_mask = [&report](unsigned mask, std::uint64_t count) {
    const auto fired = static_cast<unsigned>(std::popcount(mask));
    if (fired >= 1) report.singles += count;
    if (fired >= 2) report.twofolds += count;
  };

  {
    // Multinomial over the 16 firing patterns via sequential binomials.
    RngStream rng = make_substream(seed, detail::kStreamSinglePair);
    const auto dist = firing_distribution(1, params.efficiency);
    unsigned last = 0;
    for (unsigned mask = 0; mask < 16; ++mask) {
      if (dist[mask] > 0.0) last = mask;
    }
    std::uint64_t remaining = report.pulses_with_pairs[1];
    double mass_left = 1.0;
    for (unsigned mask = 0; mask <= last && remaining > 0; ++mask) {
      const double q = mass_left > 0.0 ? std::min(1.0, dist[mask] / mass_left) : 0.0;
      const std::uint64_t n = (mask == last) ? remaining : detail::binomial(remaining, q, rng);
      tally_mask(mask, n);
      remaining -= n;
      mass_left -= dist[mask];
    }
  }

  for (unsigned k = 2; k <= kMaxPairs; ++k) {
    RngStream rng = make_substream(seed, detail::kStreamMultiPairBase + k);
    const auto& outcomes = ideal_circuit_outcomes().at(k);
    std::discrete_distribution<std::size_t> route(outcomes.probabilities.begin(),
                                                  outcomes.probabilities.end());
    std::bernoulli_distribution detect(params.efficiency);
    for (std::uint64_t pulse = 0; pulse < report.pulses_with_pairs[k]; ++pulse) {
      const Occupation& occ = outcomes.occupations[route(rng)];
      unsigned mask = 0;
      bool one_each = true;
      for (std::size_t d = 0; d < kDetectors; ++d) {
        unsigned detected = 0;
        for (unsigned photon = 0; photon < occ[d]; ++photon) detected += detect(rng) ? 1u : 0u;
        if (detected > 0) mask |= 1u << d;
        if (detected != 1) one_each = false;
      }
      tally_mask(mask, 1);
      if (one_each) (k == 2 ? report.fourfold_double : report.fourfold_triple) += 1;
    }
  }
  return report;
}

}  // namespace ghzsim
