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

// Multi-photon states on labeled optical modes with Gaussian temporal
// wavepackets. A KetTerm is a product of creation operators acting on the
// vacuum (not a normalized Fock state), so two photons in the same mode and
// packet give <term|term> = 2. Inner products are permanents of the
// single-photon overlap matrix, which is where bosonic interference and
// partial distinguishability come from.

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ghzsim/error.hpp"
#include "ghzsim/permanent.hpp"

namespace ghzsim {

using Amplitude = std::complex<double>;

inline constexpr double kDefaultPruneEps = 1e-12;
inline constexpr std::size_t kMaxPhotons = 8;
inline constexpr double kDefaultPacketSigmaFs = 250.0;

enum class Polarization : unsigned char { H = 0, V = 1 };

inline char to_char(Polarization p) { return p == Polarization::H ? 'H' : 'V'; }

struct ModeLabel {
  std::string path;
  Polarization pol = Polarization::H;

  auto operator<=>(const ModeLabel&) const = default;
  bool operator==(const ModeLabel&) const = default;
};

/// e.g. "H_T", "V_3".
inline std::string to_string(const ModeLabel& m) {
  return std::string(1, to_char(m.pol)) + "_" + m.path;
}

/// Gaussian temporal amplitude psi(t) ~ exp(-(t - center)^2 / (4 sigma^2)).
/// sigma is the standard deviation of |psi|^2, in femtoseconds.
struct WavePacket {
  double center_fs = 0.0;
  double sigma_fs = kDefaultPacketSigmaFs;

  auto operator<=>(const WavePacket&) const = default;
  bool operator==(const WavePacket&) const = default;

  void validate() const {
    if (!(sigma_fs > 0.0) || !std::isfinite(sigma_fs) || !std::isfinite(center_fs)) {
      throw InvalidParameter("WavePacket: width must be positive and finite");
    }
  }

  WavePacket shifted(double delta_fs) const { return {center_fs + delta_fs, sigma_fs}; }
};

/// Overlap integral of two normalized real Gaussian amplitudes:
///   sqrt(2 s1 s2 / (s1^2 + s2^2)) * exp(-(c1 - c2)^2 / (4 (s1^2 + s2^2))).
/// Real under the no-carrier convention; exactly 1 for identical packets.
inline Amplitude wavepacket_overlap(const WavePacket& w1, const WavePacket& w2) {
  w1.validate();
  w2.validate();
  if (w1 == w2) return {1.0, 0.0};
  const double s1 = w1.sigma_fs;
  const double s2 = w2.sigma_fs;
  const double sum_sq = s1 * s1 + s2 * s2;
  const double d = w1.center_fs - w2.center_fs;
  const double prefactor = (s1 == s2) ? 1.0 : std::sqrt(2.0 * s1 * s2 / sum_sq);
  return {prefactor * std::exp(-d * d / (4.0 * sum_sq)), 0.0};
}

/// One photon. `origin` is bookkeeping only (which pair emitted it); it takes
/// part in the canonical ordering but never in any overlap.
struct Photon {
  ModeLabel mode;
  WavePacket packet;
  std::string origin;

  // Member order gives the canonical order (path, pol, center, width, origin).
  auto operator<=>(const Photon&) const = default;
  bool operator==(const Photon&) const = default;
};

inline Photon make_photon(std::string path, Polarization pol, WavePacket packet = {},
                          std::string origin = {}) {
  return Photon{ModeLabel{std::move(path), pol}, packet, std::move(origin)};
}

/// Single-photon overlap: mode delta times packet overlap.
inline Amplitude photon_overlap(const Photon& a, const Photon& b) {
  if (a.mode != b.mode) return {0.0, 0.0};
  return wavepacket_overlap(a.packet, b.packet);
}

/// amplitude * prod_k a^dagger(photon_k) |0>, photons kept sorted.
class KetTerm {
 public:
  KetTerm() = default;
  KetTerm(Amplitude amplitude, std::vector<Photon> photons)
      : amplitude_(amplitude), photons_(std::move(photons)) {
    if (photons_.size() > kMaxPhotons) {
      throw InvalidParameter("KetTerm: at most 8 photons are supported");
    }
    for (const auto& p : photons_) p.packet.validate();
    std::sort(photons_.begin(), photons_.end());
  }

  Amplitude amplitude() const noexcept { return amplitude_; }
  const std::vector<Photon>& photons() const noexcept { return photons_; }
  std::size_t photon_count() const noexcept { return photons_.size(); }

  KetTerm with_amplitude(Amplitude a) const {
    KetTerm t = *this;
    t.amplitude_ = a;
    return t;
  }

 private:
  Amplitude amplitude_{1.0, 0.0};
  std::vector<Photon> photons_;
};

/// <t1|t2> = conj(a1) a2 perm(G), G[i][j] = <photon1_i|photon2_j>.
inline Amplitude term_inner_product(const KetTerm& t1, const KetTerm& t2) {
  const auto& p1 = t1.photons();
  const auto& p2 = t2.photons();
  if (p1.size() != p2.size()) return {0.0, 0.0};
  const std::size_t n = p1.size();
  // Photons are sorted by mode first, so differing mode multisets show up
  // here; no perfect matching of equal modes exists and the permanent is 0.
  for (std::size_t i = 0; i < n; ++i) {
    if (p1[i].mode != p2[i].mode) return {0.0, 0.0};
  }
  Matrix<Amplitude> gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) gram(i, j) = photon_overlap(p1[i], p2[j]);
  }
  return std::conj(t1.amplitude()) * t2.amplitude() * permanent(gram);
}

class StateVector;
inline StateVector canonicalize(std::vector<KetTerm> terms, double prune_eps = kDefaultPruneEps);

/// Linear combination of KetTerms, always held in canonical form: terms
/// sorted by photon list, duplicates merged, tiny amplitudes pruned.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::vector<KetTerm> terms, double prune_eps = kDefaultPruneEps) {
    *this = canonicalize(std::move(terms), prune_eps);
  }

  static StateVector vacuum() { return StateVector({KetTerm{{1.0, 0.0}, {}}}); }

  const std::vector<KetTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  friend StateVector canonicalize(std::vector<KetTerm> terms, double prune_eps);

 private:
  std::vector<KetTerm> terms_;
};

inline StateVector canonicalize(std::vector<KetTerm> terms, double prune_eps) {
  // KetTerm construction already sorted each photon list.
  std::stable_sort(terms.begin(), terms.end(), [](const KetTerm& a, const KetTerm& b) {
    return a.photons() < b.photons();
  });
  StateVector out;
  for (auto& t : terms) {
    if (!out.terms_.empty() && out.terms_.back().photons() == t.photons()) {
      auto& last = out.terms_.back();
      last = last.with_amplitude(last.amplitude() + t.amplitude());
    } else {
      out.terms_.push_back(std::move(t));
    }
  }
  std::erase_if(out.terms_, [prune_eps](const KetTerm& t) {
    return std::abs(t.amplitude()) < prune_eps;
  });
  return out;
}

inline StateVector canonicalize(const StateVector& s, double prune_eps = kDefaultPruneEps) {
  return canonicalize(s.terms(), prune_eps);
}

/// Conjugate-linear in the first argument.
inline Amplitude state_inner_product(const StateVector& s1, const StateVector& s2) {
  Amplitude total{0.0, 0.0};
  for (const auto& a : s1.terms()) {
    for (const auto& b : s2.terms()) total += term_inner_product(a, b);
  }
  return total;
}

inline double norm_squared(const StateVector& s) { return state_inner_product(s, s).real(); }

inline StateVector scaled(const StateVector& s, Amplitude factor) {
  std::vector<KetTerm> terms;
  terms.reserve(s.size());
  for (const auto& t : s.terms()) terms.push_back(t.with_amplitude(t.amplitude() * factor));
  return StateVector(std::move(terms));
}

inline StateVector operator+(const StateVector& a, const StateVector& b) {
  std::vector<KetTerm> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return StateVector(std::move(terms));
}

inline StateVector operator*(Amplitude factor, const StateVector& s) { return scaled(s, factor); }

/// Rescales to unit norm; a zero state is returned unchanged.
inline StateVector normalized(const StateVector& s) {
  const double n2 = norm_squared(s);
  if (!(n2 > 0.0)) return s;
  return scaled(s, 1.0 / std::sqrt(n2));
}

/// Product of creation-operator strings; photons of both factors are joined.
inline StateVector tensor_product(const StateVector& a, const StateVector& b) {
  std::vector<KetTerm> terms;
  terms.reserve(a.size() * b.size());
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      std::vector<Photon> photons = ta.photons();
      photons.insert(photons.end(), tb.photons().begin(), tb.photons().end());
      terms.emplace_back(ta.amplitude() * tb.amplitude(), std::move(photons));
    }
  }
  return StateVector(std::move(terms));
}

/// Clears every origin tag. Terms that differed only by tag merge.
inline StateVector without_origin_tags(const StateVector& s) {
  std::vector<KetTerm> terms;
  terms.reserve(s.size());
  for (const auto& t : s.terms()) {
    std::vector<Photon> photons = t.photons();
    for (auto& p : photons) p.origin.clear();
    terms.emplace_back(t.amplitude(), std::move(photons));
  }
  return StateVector(std::move(terms));
}

/// True when both states hold the same canonical terms with amplitudes
/// within `tol`.
inline bool approx_equal(const StateVector& a, const StateVector& b, double tol = 1e-9) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.terms()[i].photons() != b.terms()[i].photons()) return false;
    if (std::abs(a.terms()[i].amplitude() - b.terms()[i].amplitude()) > tol) return false;
  }
  return true;
}

}  // namespace ghzsim
