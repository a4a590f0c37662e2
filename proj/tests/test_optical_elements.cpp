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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ghzsim/ghz_experiments.hpp"
#include "ghzsim/optical_elements.hpp"

namespace {

using namespace ghzsim;
using P = Polarization;

const double r = 1.0 / std::numbers::sqrt2;

StateVector ket(std::vector<Photon> photons, Amplitude a = 1.0) {
  return StateVector({KetTerm(a, std::move(photons))});
}

StateVector single(const std::string& path, P pol) { return ket({make_photon(path, pol)}); }

TEST(ReferencePreset, HorizontalOnAGoesToTrigger) {
  EXPECT_TRUE(approx_equal(apply_mode_map(single("a", P::H), ghz_reference_preset()), single("T", P::H)));
}

TEST(ReferencePreset, VerticalOnASplitsIntoV1AndH2) {
  const StateVector expected = r * single("1", P::V) + r * single("2", P::H);
  EXPECT_TRUE(approx_equal(apply_mode_map(single("a", P::V), ghz_reference_preset()), expected));
}

TEST(ReferencePreset, HbVbExpandsIntoFourTerms) {
  const StateVector in = ket({make_photon("b", P::H), make_photon("b", P::V)});
  const StateVector out = apply_mode_map(in, ghz_reference_preset());
  // (1/2)(H1 + H3)(V2 + V3)
  std::vector<KetTerm> terms;
  for (const char* h : {"1", "3"}) {
    for (const char* v : {"2", "3"}) terms.emplace_back(0.5, std::vector{make_photon(h, P::H), make_photon(v, P::V)});
  }
  EXPECT_EQ(out.size(), 4u);
  EXPECT_TRUE(approx_equal(out, StateVector(terms)));
}

TEST(ReferencePreset, DeclaredInputsAndOutputs) {
  const ModeMap m = ghz_reference_preset();
  const std::vector<ModeLabel> inputs{{"a", P::H}, {"a", P::V}, {"b", P::H}, {"b", P::V}};
  EXPECT_EQ(m.declared_inputs(), inputs);
  const std::set<ModeLabel> outputs{{"T", P::H}, {"1", P::H}, {"1", P::V}, {"2", P::H},
                                    {"2", P::V}, {"3", P::H}, {"3", P::V}};
  EXPECT_EQ(m.output_modes(), outputs);
  EXPECT_TRUE(check_isometry(m).isometric);
}

TEST(ModeMap, DuplicateInputRejected) {
  ModeMap m;
  m.add({"a", P::H}, {{{"b", P::H}, 1.0}});
  EXPECT_THROW(m.add({"a", P::H}, {{{"c", P::H}, 1.0}}), InvalidParameter);
}

TEST(ModeMap, UndeclaredModesPassThrough) {
  const StateVector in = ket({make_photon("x", P::V, {3.0, 100.0}, "tag")});
  EXPECT_TRUE(approx_equal(apply_mode_map(in, ghz_reference_preset()), in));
}

TEST(ModeMap, PacketsAndTagsCarriedThrough) {
  const StateVector out = apply_mode_map(ket({make_photon("a", P::H, {42.0, 99.0}, "primed")}),
                                         ghz_reference_preset());
  ASSERT_EQ(out.size(), 1u);
  const Photon& p = out.terms()[0].photons()[0];
  EXPECT_EQ(p.packet, (WavePacket{42.0, 99.0}));
  EXPECT_EQ(p.origin, "primed");
}

TEST(HalfWavePlate, JonesAtZeroFlipsVerticalSign) {
  const ModeMap m = hwp_map(0.0, "c", WavePlateConvention::Jones);
  EXPECT_TRUE(approx_equal(apply_mode_map(single("c", P::H), m), single("c", P::H)));
  EXPECT_TRUE(approx_equal(apply_mode_map(single("c", P::V), m), scaled(single("c", P::V), -1.0)));
}

TEST(HalfWavePlate, RotationAt22point5TakesVToDiagonal) {
  const ModeMap m = hwp_map(22.5, "c", WavePlateConvention::Rotation);
  const StateVector expected = r * single("c", P::H) + r * single("c", P::V);
  EXPECT_TRUE(approx_equal(apply_mode_map(single("c", P::V), m), expected, 1e-15));
}

TEST(HalfWavePlate, JonesAt45SwapsPolarizations) {
  const ModeMap m = hwp_map(45.0, "c", WavePlateConvention::Jones);
  EXPECT_TRUE(approx_equal(apply_mode_map(single("c", P::H), m), single("c", P::V), 1e-15));
  EXPECT_TRUE(approx_equal(apply_mode_map(single("c", P::V), m), single("c", P::H), 1e-15));
}

TEST(BeamSplitter, PhysicalSinglePhotonIsTransmittedPlusIReflected) {
  const ModeMap m = bs_map({"x", "y", "u", "w"}, ElementConvention::Physical);
  const StateVector expected = r * single("u", P::H) + Amplitude(0.0, r) * single("w", P::H);
  EXPECT_TRUE(approx_equal(apply_mode_map(single("x", P::H), m), expected));
}

TEST(BeamSplitter, IdenticalPhotonsBunch) {
  // Brute-force expansion of (t u + i r w)(i r u + t w): the u w coefficient is
  // t^2 + (i r)^2 = 0 for a balanced splitter.
  const ModeMap m = bs_map({"x", "y", "u", "w"}, ElementConvention::Physical);
  const StateVector out = apply_mode_map(ket({make_photon("x", P::H), make_photon("y", P::H)}), m);
  for (const auto& t : out.terms()) {
    EXPECT_EQ(t.photons()[0].mode.path, t.photons()[1].mode.path) << "coincidence term survived";
  }
  EXPECT_NEAR(norm_squared(out), 1.0, 1e-12);
}

TEST(BeamSplitter, DistinguishablePhotonsDoNotBunch) {
  const ModeMap m = bs_map({"x", "y", "u", "w"}, ElementConvention::Physical);
  const StateVector out = apply_mode_map(
      ket({make_photon("x", P::H, {0.0, 250.0}), make_photon("y", P::H, {1e5, 250.0})}), m);
  double coincidence = 0.0;
  for (const auto& t : out.terms()) {
    if (t.photons()[0].mode.path != t.photons()[1].mode.path) coincidence += std::norm(t.amplitude());
  }
  EXPECT_NEAR(coincidence, 0.5, 1e-12);
}

TEST(BeamSplitter, DuplicatePortsRejected) {
  EXPECT_THROW(bs_map({"x", "x", "u", "w"}, ElementConvention::Physical), InvalidParameter);
  EXPECT_THROW(pbs_map({"x", "y", "u", "u"}, ElementConvention::PhaseAbsorbed), InvalidParameter);
}

TEST(PolarizingBeamSplitter, TransmitsHReflectsV) {
  const ModeMap m = pbs_map({"a", "a_vac", "T", "c"}, ElementConvention::PhaseAbsorbed);
  EXPECT_TRUE(approx_equal(apply_mode_map(single("a", P::H), m), single("T", P::H)));
  EXPECT_TRUE(approx_equal(apply_mode_map(single("a", P::V), m), single("c", P::V)));
  const ModeMap phys = pbs_map({"a", "a_vac", "T", "c"}, ElementConvention::Physical);
  EXPECT_TRUE(approx_equal(apply_mode_map(single("a", P::V), phys), Amplitude(0.0, 1.0) * single("c", P::V)));
}

TEST(Delay, ZeroIsIdentity) {
  const StateVector s = ket({make_photon("a", P::H), make_photon("b", P::V)});
  EXPECT_TRUE(approx_equal(apply_delay(s, {"a", 0.0}), s, 0.0));
}

TEST(Delay, ShiftThenUnshiftRestoresExactly) {
  const StateVector s = ket({make_photon("a", P::H, {12.5, 250.0}), make_photon("b", P::V)});
  const StateVector back = apply_delay(apply_delay(s, {"a", 300.0}), {"a", -300.0});
  EXPECT_EQ(back.terms()[0].photons(), s.terms()[0].photons());
}

TEST(Delay, OnlyTheDelayedPathMoves) {
  const StateVector out = apply_delay(ket({make_photon("a", P::H), make_photon("b", P::V)}), {"a", 300.0});
  const auto& photons = out.terms()[0].photons();
  EXPECT_EQ(photons[0].mode.path, "a");
  EXPECT_EQ(photons[0].packet.center_fs, 300.0);
  EXPECT_EQ(photons[1].packet.center_fs, 0.0);
}

TEST(Isometry, ShippedElementsAreIsometric) {
  for (auto conv : {ElementConvention::PhaseAbsorbed, ElementConvention::Physical}) {
    EXPECT_TRUE(check_isometry(bs_map({"x", "y", "u", "w"}, conv)).isometric);
    EXPECT_TRUE(check_isometry(pbs_map({"x", "y", "u", "w"}, conv)).isometric);
  }
  for (auto plate : {WavePlateConvention::Jones, WavePlateConvention::Rotation}) {
    for (double theta : {0.0, 10.0, 22.5, 45.0, 67.0}) EXPECT_TRUE(check_isometry(hwp_map(theta, "c", plate)).isometric);
  }
}

TEST(Isometry, AnalyzerProjectionIsNot) {
  const auto report = check_isometry(analyzer_projection_map("1", 45.0));
  EXPECT_FALSE(report.isometric);
  EXPECT_FALSE(report.violations.empty());
}

TEST(Isometry, ReportNamesOffendingColumns) {
  ModeMap m;
  m.add({"a", P::H}, {{{"u", P::H}, 1.0}});
  m.add({"b", P::H}, {{{"u", P::H}, 1.0}});
  const auto report = check_isometry(m);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].column_a, (ModeLabel{"a", P::H}));
  EXPECT_EQ(report.violations[0].column_b, (ModeLabel{"b", P::H}));
}

TEST(Compose, ElementChainEqualsReferencePreset) {
  const Circuit chain = ghz_element_chain(ElementConvention::PhaseAbsorbed);
  ModeMap composed;
  for (const auto& stage : chain.stages) composed = compose(composed, std::get<ModeMap>(stage));
  const ModeMap preset = ghz_reference_preset();
  for (const auto& in : preset.declared_inputs()) {
    const StateVector s = single(in.path, in.pol);
    EXPECT_TRUE(approx_equal(apply_mode_map(s, composed), apply_mode_map(s, preset), 1e-12)) << to_string(in);
  }
}

TEST(Compose, SequentialApplicationEqualsComposedMap) {
  const ModeMap first = bs_map({"x", "y", "u", "w"}, ElementConvention::Physical);
  const ModeMap second = hwp_map(22.5, "u", WavePlateConvention::Jones);
  const ModeMap both = compose(first, second);
  const StateVector s = ket({make_photon("x", P::H), make_photon("y", P::V)}) +
                        Amplitude(0.3, 0.2) * ket({make_photon("x", P::V), make_photon("x", P::H)});
  EXPECT_TRUE(approx_equal(apply_mode_map(apply_mode_map(s, first), second), apply_mode_map(s, both), 1e-12));
}

TEST(ApplyModeMap, IsLinear) {
  const ModeMap m = bs_map({"x", "y", "u", "w"}, ElementConvention::Physical);
  const StateVector s1 = ket({make_photon("x", P::H), make_photon("y", P::V)});
  const StateVector s2 = ket({make_photon("y", P::H), make_photon("y", P::H)});
  const Amplitude a{0.6, -0.2};
  const Amplitude b{-1.1, 0.4};
  EXPECT_TRUE(approx_equal(apply_mode_map(a * s1 + b * s2, m), a * apply_mode_map(s1, m) + b * apply_mode_map(s2, m),
                           1e-12));
}

TEST(Delay, CommutesWithMapsThatKeepThePath) {
  const ModeMap plate = hwp_map(30.0, "a", WavePlateConvention::Jones);
  const StateVector s = ket({make_photon("a", P::H), make_photon("b", P::V)}) +
                        0.5 * ket({make_photon("a", P::V), make_photon("a", P::V)});
  const DelayStage d{"a", 150.0};
  EXPECT_TRUE(approx_equal(apply_delay(apply_mode_map(s, plate), d), apply_mode_map(apply_delay(s, d), plate), 1e-12));
}

TEST(GhzCircuit, PhaseAbsorbedHasTwoStages) {
  const Circuit c = build_ghz_circuit(GhzParams{});
  ASSERT_EQ(c.stages.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<DelayStage>(c.stages[0]));
  EXPECT_TRUE(check_isometry(std::get<ModeMap>(c.stages[1])).isometric);
}

TEST(GhzCircuit, PhysicalChainStagesAreIsometric) {
  GhzParams p;
  p.convention = ElementConvention::Physical;
  for (const auto& stage : build_ghz_circuit(p).stages) {
    if (const auto* m = std::get_if<ModeMap>(&stage)) {
      EXPECT_TRUE(check_isometry(*m).isometric);
    }
  }
}

}  // namespace
