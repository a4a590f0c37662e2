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

// Down-conversion pair sources.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ghzsim/error.hpp"
#include "ghzsim/mode_algebra.hpp"

namespace ghzsim {

/// FWHM -> standard deviation for a Gaussian intensity profile.
inline constexpr double kFwhmPerSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)

struct SourceParams {
  double phase_rad = std::numbers::pi;  // pi gives the singlet-like minus sign
  double pair_mean = 4e-4;              // mean pairs per pulse
  double packet_sigma_fs = kDefaultPacketSigmaFs;
  double pump_sigma_fs = 200.0 / kFwhmPerSigma;  // 200 fs FWHM pump; 0 disables jitter

  void validate() const {
    if (!std::isfinite(phase_rad)) throw InvalidParameter("SourceParams: phase must be finite");
    if (!(pair_mean >= 0.0) || !std::isfinite(pair_mean)) {
      throw InvalidParameter("SourceParams: pair_mean must be >= 0");
    }
    if (!(packet_sigma_fs > 0.0) || !std::isfinite(packet_sigma_fs)) {
      throw InvalidParameter("SourceParams: packet_sigma must be > 0");
    }
    if (!(pump_sigma_fs >= 0.0) || !std::isfinite(pump_sigma_fs)) {
      throw InvalidParameter("SourceParams: pump_sigma must be >= 0");
    }
  }

  bool operator==(const SourceParams&) const = default;
};

/// (1/sqrt2)(|H>_a |V>_b + e^{i phase} |V>_a |H>_b); both photons share the
/// packet centered at t0.
inline StateVector spdc_pair(const std::string& path_a, const std::string& path_b,
                             const SourceParams& params, double t0_fs,
                             const std::string& origin = {}) {
  params.validate();
  const WavePacket packet{t0_fs, params.packet_sigma_fs};
  const double r = 1.0 / std::numbers::sqrt2;
  using P = Polarization;
  return StateVector({
      KetTerm{r, {make_photon(path_a, P::H, packet, origin), make_photon(path_b, P::V, packet, origin)}},
      KetTerm{r * std::polar(1.0, params.phase_rad),
              {make_photon(path_a, P::V, packet, origin), make_photon(path_b, P::H, packet, origin)}},
  });
}

inline const std::string kUnprimed = "unprimed";
inline const std::string kPrimed = "primed";

/// Two independent pairs into arms a and b, emitted at the given times.
/// Amplitudes are exactly those of the product of two spdc_pair states. The
/// bosonic norm is 1 + s^2 + s^4 with s the packet overlap between the pairs,
/// so it is 1 only when the pairs are distinguishable.
inline StateVector double_pair(const SourceParams& params, double t0_first_fs,
                               double t0_second_fs) {
  return tensor_product(spdc_pair("a", "b", params, t0_first_fs, kUnprimed),
                        spdc_pair("a", "b", params, t0_second_fs, kPrimed));
}

/// k independent pairs into arms a and b, tagged "pair-1", "pair-2", ...
inline StateVector multi_pair(const SourceParams& params, const std::vector<double>& t0s_fs) {
  StateVector state = StateVector::vacuum();
  for (std::size_t i = 0; i < t0s_fs.size(); ++i) {
    state = tensor_product(
        state, spdc_pair("a", "b", params, t0s_fs[i], "pair-" + std::to_string(i + 1)));
  }
  return state;
}

inline double poisson_pmf(unsigned n, double mean) {
  if (!(mean >= 0.0)) throw InvalidParameter("poisson_pmf: mean must be >= 0");
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
}

/// Poisson-distributed number of pairs created by one pump pulse.
template <typename URBG>
unsigned sample_pair_count(double pair_mean, URBG& rng) {
  if (!(pair_mean >= 0.0) || !std::isfinite(pair_mean)) {
    throw InvalidParameter("sample_pair_count: pair_mean must be >= 0");
  }
  if (pair_mean == 0.0) return 0;
  std::poisson_distribution<unsigned> dist(pair_mean);
  return dist(rng);
}

}  // namespace ghzsim
