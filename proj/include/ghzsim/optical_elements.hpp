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

// Linear optical elements as substitution rules on creation operators.
//
// Two conventions coexist. PhaseAbsorbed uses real, all-positive amplitudes
// on the ports the GHZ apparatus uses, so chaining the elements reproduces
// ghz_reference_preset() exactly. Physical uses unitary beamsplitters with an
// i on reflection and standard Jones-matrix wave plates, for exploring how
// hardware phase conventions change the post-selected state.

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ghzsim/error.hpp"
#include "ghzsim/mode_algebra.hpp"

namespace ghzsim {

enum class ElementConvention { PhaseAbsorbed, Physical };
enum class WavePlateConvention { Jones, Rotation };

/// Maps input modes to linear combinations of output modes. Undeclared modes
/// pass through unchanged.
class ModeMap {
 public:
  using Outputs = std::vector<std::pair<ModeLabel, Amplitude>>;

  ModeMap() = default;

  ModeMap& add(ModeLabel input, Outputs outputs) {
    if (entries_.contains(input)) {
      throw InvalidParameter("ModeMap: input mode " + to_string(input) + " declared twice");
    }
    entries_.emplace(std::move(input), std::move(outputs));
    return *this;
  }

  const std::map<ModeLabel, Outputs>& entries() const noexcept { return entries_; }

  bool declares(const ModeLabel& m) const { return entries_.contains(m); }

  const Outputs* find(const ModeLabel& m) const {
    auto it = entries_.find(m);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::vector<ModeLabel> declared_inputs() const {
    std::vector<ModeLabel> out;
    out.reserve(entries_.size());
    for (const auto& [in, _] : entries_) out.push_back(in);
    return out;
  }

  std::set<ModeLabel> output_modes() const {
    std::set<ModeLabel> out;
    for (const auto& [_, outs] : entries_) {
      for (const auto& [m, amp] : outs) {
        if (std::abs(amp) > 0.0) out.insert(m);
      }
    }
    return out;
  }

 private:
  std::map<ModeLabel, Outputs> entries_;
};

/// Shifts the packet center of every photon currently on `path`.
struct DelayStage {
  std::string path;
  double delta_fs = 0.0;
};

using CircuitStage = std::variant<ModeMap, DelayStage>;

struct Circuit {
  std::vector<CircuitStage> stages;
};

// --------------------------------------------------------------------------
// Application

inline StateVector apply_mode_map(const StateVector& s, const ModeMap& m) {
  std::vector<KetTerm> out;
  for (const auto& term : s.terms()) {
    // Expand prod_k (sum_j c_kj a^dagger_kj) one photon at a time.
    std::vector<std::pair<Amplitude, std::vector<Photon>>> partial{{term.amplitude(), {}}};
    for (const auto& photon : term.photons()) {
      const auto* outputs = m.find(photon.mode);
      std::vector<std::pair<Amplitude, std::vector<Photon>>> next;
      if (outputs == nullptr) {
        next = std::move(partial);
        for (auto& [amp, photons] : next) photons.push_back(photon);
      } else {
        next.reserve(partial.size() * outputs->size());
        for (const auto& [amp, photons] : partial) {
          for (const auto& [mode, coeff] : *outputs) {
            if (coeff == Amplitude{0.0, 0.0}) continue;
            auto extended = photons;
            extended.push_back(Photon{mode, photon.packet, photon.origin});
            next.emplace_back(amp * coeff, std::move(extended));
          }
        }
      }
      partial = std::move(next);
    }
    for (auto& [amp, photons] : partial) out.emplace_back(amp, std::move(photons));
  }
  return StateVector(std::move(out));
}

inline StateVector apply_delay(const StateVector& s, const DelayStage& d) {
  if (d.delta_fs == 0.0) return s;
  std::vector<KetTerm> out;
  out.reserve(s.size());
  for (const auto& term : s.terms()) {
    std::vector<Photon> photons = term.photons();
    for (auto& p : photons) {
      if (p.mode.path == d.path) p.packet = p.packet.shifted(d.delta_fs);
    }
    out.emplace_back(term.amplitude(), std::move(photons));
  }
  return StateVector(std::move(out));
}

inline StateVector evolve(const StateVector& s, const Circuit& c) {
  StateVector state = s;
  for (const auto& stage : c.stages) {
    state = std::visit(
        [&state](const auto& st) -> StateVector {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, ModeMap>) {
            return apply_mode_map(state, st);
          } else {
            return apply_delay(state, st);
          }
        },
        stage);
  }
  return state;
}

/// `second` applied after `first`. Declared inputs are the union of the
/// first map's inputs and those inputs of the second it does not touch.
inline ModeMap compose(const ModeMap& first, const ModeMap& second) {
  ModeMap out;
  for (const auto& [in, outs] : first.entries()) {
    std::map<ModeLabel, Amplitude> acc;
    for (const auto& [mid, c1] : outs) {
      if (const auto* outs2 = second.find(mid)) {
        for (const auto& [fin, c2] : *outs2) acc[fin] += c1 * c2;
      } else {
        acc[mid] += c1;
      }
    }
    ModeMap::Outputs list;
    for (const auto& [m, c] : acc) {
      if (std::abs(c) > 0.0) list.emplace_back(m, c);
    }
    out.add(in, std::move(list));
  }
  for (const auto& [in, outs] : second.entries()) {
    if (!first.declares(in)) out.add(in, outs);
  }
  return out;
}

// --------------------------------------------------------------------------
// Isometry

struct IsometryViolation {
  ModeLabel column_a;
  ModeLabel column_b;
  Amplitude inner_product;  // expected 1 when a == b, else 0
};

struct IsometryReport {
  bool isometric = true;
  std::vector<IsometryViolation> violations;
};

inline IsometryReport check_isometry(const ModeMap& m, double tol = 1e-12) {
  // Merge repeated output modes so each column is a sparse vector.
  std::vector<std::pair<ModeLabel, std::map<ModeLabel, Amplitude>>> columns;
  for (const auto& [in, outs] : m.entries()) {
    std::map<ModeLabel, Amplitude> col;
    for (const auto& [mode, c] : outs) col[mode] += c;
    columns.emplace_back(in, std::move(col));
  }
  IsometryReport report;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (std::size_t j = i; j < columns.size(); ++j) {
      Amplitude dot{0.0, 0.0};
      for (const auto& [mode, c] : columns[j].second) {
        const auto& col_i = columns[i].second;
        if (auto it = col_i.find(mode); it != col_i.end()) dot += std::conj(it->second) * c;
      }
      const Amplitude expected = (i == j) ? Amplitude{1.0, 0.0} : Amplitude{0.0, 0.0};
      if (std::abs(dot - expected) > tol) {
        report.isometric = false;
        report.violations.push_back({columns[i].first, columns[j].first, dot});
      }
    }
  }
  return report;
}

// --------------------------------------------------------------------------
// Element library

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// The four substitution rules of the three-photon GHZ apparatus with every
/// element phase absorbed:
///   H_a -> H_T,  V_b -> (V_2 + V_3)/sqrt2,
///   V_a -> (V_1 + H_2)/sqrt2,  H_b -> (H_1 + H_3)/sqrt2.
inline ModeMap ghz_reference_preset() {
  const double r = 1.0 / std::numbers::sqrt2;
  using P = Polarization;
  ModeMap m;
  m.add({"a", P::H}, {{{"T", P::H}, 1.0}});
  m.add({"b", P::V}, {{{"2", P::V}, r}, {{"3", P::V}, r}});
  m.add({"a", P::V}, {{{"1", P::V}, r}, {{"2", P::H}, r}});
  m.add({"b", P::H}, {{{"1", P::H}, r}, {{"3", P::H}, r}});
  return m;
}

/// Half-wave plate at angle theta on one path.
/// Jones:    H -> cos2t H + sin2t V,  V -> sin2t H - cos2t V.
/// Rotation: H -> cos2t H - sin2t V,  V -> sin2t H + cos2t V.
inline ModeMap hwp_map(double theta_deg, const std::string& path, WavePlateConvention conv) {
  const double c = std::cos(2.0 * deg_to_rad(theta_deg));
  const double s = std::sin(2.0 * deg_to_rad(theta_deg));
  using P = Polarization;
  const ModeLabel h{path, P::H};
  const ModeLabel v{path, P::V};
  ModeMap m;
  if (conv == WavePlateConvention::Jones) {
    m.add(h, {{h, c}, {v, s}});
    m.add(v, {{h, s}, {v, -c}});
  } else {
    m.add(h, {{h, c}, {v, -s}});
    m.add(v, {{h, s}, {v, c}});
  }
  return m;
}

/// Two-input, two-output port assignment. A photon entering `in1` is
/// transmitted to `out1` and reflected to `out2`; `in2` the other way round.
struct BeamSplitterPorts {
  std::string in1;
  std::string in2;
  std::string out1;
  std::string out2;

  void validate() const {
    const std::set<std::string> ins{in1, in2};
    const std::set<std::string> outs{out1, out2};
    if (ins.size() != 2 || outs.size() != 2) {
      throw InvalidParameter("beamsplitter ports must be distinct");
    }
  }
};

/// 50/50 polarization-independent beamsplitter.
/// Physical: in1 -> (out1 + i out2)/sqrt2, in2 -> (i out1 + out2)/sqrt2.
/// Absorbed: in1 -> (out1 + out2)/sqrt2,   in2 -> (out1 - out2)/sqrt2.
inline ModeMap bs_map(const BeamSplitterPorts& ports, ElementConvention conv) {
  ports.validate();
  const double r = 1.0 / std::numbers::sqrt2;
  ModeMap m;
  for (auto pol : {Polarization::H, Polarization::V}) {
    const ModeLabel o1{ports.out1, pol};
    const ModeLabel o2{ports.out2, pol};
    if (conv == ElementConvention::Physical) {
      m.add({ports.in1, pol}, {{o1, r}, {o2, Amplitude{0.0, r}}});
      m.add({ports.in2, pol}, {{o1, Amplitude{0.0, r}}, {o2, r}});
    } else {
      m.add({ports.in1, pol}, {{o1, r}, {o2, r}});
      m.add({ports.in2, pol}, {{o1, r}, {o2, -r}});
    }
  }
  return m;
}

/// Polarizing beamsplitter: H transmitted, V reflected.
/// in1: H -> out1, V -> rho out2;  in2: H -> out2, V -> rho out1,
/// with rho = 1 (phase-absorbed) or i (physical).
inline ModeMap pbs_map(const BeamSplitterPorts& ports, ElementConvention conv) {
  ports.validate();
  const Amplitude rho = conv == ElementConvention::Physical ? Amplitude{0.0, 1.0}
                                                            : Amplitude{1.0, 0.0};
  using P = Polarization;
  ModeMap m;
  m.add({ports.in1, P::H}, {{{ports.out1, P::H}, 1.0}});
  m.add({ports.in1, P::V}, {{{ports.out2, P::V}, rho}});
  m.add({ports.in2, P::H}, {{{ports.out2, P::H}, 1.0}});
  m.add({ports.in2, P::V}, {{{ports.out1, P::V}, rho}});
  return m;
}

/// Transmission axis of a linear polarizer at `angle_deg`, measured from the
/// vertical: |theta> = sin(theta)|H> + cos(theta)|V>. Returns (H, V) components.
inline std::pair<double, double> analyzer_axis(double angle_deg) {
  const double t = deg_to_rad(angle_deg);
  return {std::sin(t), std::cos(t)};
}

/// Polarizer on one path written as a mode map, i.e. the projector
/// |theta><theta|. Not isometric; detection applies analyzers directly.
inline ModeMap analyzer_projection_map(const std::string& path, double angle_deg) {
  const auto [h, v] = analyzer_axis(angle_deg);
  using P = Polarization;
  const ModeLabel mh{path, P::H};
  const ModeLabel mv{path, P::V};
  ModeMap m;
  m.add(mh, {{mh, h * h}, {mv, h * v}});
  m.add(mv, {{mh, v * h}, {mv, v * v}});
  return m;
}

}  // namespace ghzsim
