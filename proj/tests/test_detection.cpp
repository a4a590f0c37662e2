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

#include "ghzsim/detection.hpp"
#include "ghzsim/ghz_experiments.hpp"
#include "oracles.hpp"

namespace {

using namespace ghzsim;
using P = Polarization;

const double r = 1.0 / std::numbers::sqrt2;

StateVector ghz() { return ghz_reference_state(); }

StateVector evolved(double t1, double t2, double delay = 0.0) {
  GhzParams p;
  p.delay_fs = delay;
  return evolve_double_pair(p, t1, t2);
}

TEST(Analyzer, AngleIsMeasuredFromVertical) {
  const auto [h0, v0] = analyzer_axis(0.0);
  EXPECT_NEAR(h0, 0.0, 1e-15);
  EXPECT_NEAR(v0, 1.0, 1e-15);
  const auto [h90, v90] = analyzer_axis(90.0);
  EXPECT_NEAR(h90, 1.0, 1e-15);
  EXPECT_NEAR(v90, 0.0, 1e-15);
}

TEST(Analyzer, AnglesFoldIntoHalfTurn) {
  EXPECT_EQ(normalize_angle_deg(-45.0), 135.0);
  EXPECT_EQ(normalize_angle_deg(180.0), 0.0);
  EXPECT_EQ(normalize_angle_deg(405.0), 45.0);
  EXPECT_EQ(*AnalyzerSetting::polarizer("1", -45.0).angle_deg, 135.0);
}

TEST(DetectionPattern, DuplicatePathsRejected) {
  EXPECT_THROW(DetectionPattern({AnalyzerSetting::pass_through("1"), AnalyzerSetting::polarizer("1", 0.0)}),
               InvalidParameter);
}

TEST(Postselect, DoublePairThroughCircuitGivesGhz) {
  const auto result = postselect(evolved(0.0, 0.0), fourfold_pattern({}, {}, {}));
  EXPECT_NEAR(result.probability, 1.0 / 12.0, 1e-12);
  EXPECT_NEAR(fidelity(without_origin_tags(result.conditional), ghz()), 1.0, 1e-12);
}

TEST(Postselect, SeparatedPairsMatchExpansionOracle) {
  const auto expansion = oracle::double_pair_fourfold_expansion();
  ASSERT_EQ(expansion.size(), 4u);
  const StateVector projected = project_onto_pattern(evolved(0.0, 1e6), fourfold_pattern({}, {}, {}));
  ASSERT_EQ(projected.size(), 4u);
  double oracle_prob = 0.0;
  for (const auto& [photons, amp] : expansion) {
    oracle_prob += std::norm(amp);
    bool found = false;
    for (const auto& t : projected.terms()) {
      std::vector<oracle::Tagged> key;
      for (const auto& p : t.photons()) {
        key.emplace_back(p.mode.path, to_char(p.mode.pol), p.origin == kUnprimed ? 1 : 2);
      }
      std::sort(key.begin(), key.end());
      if (key == photons) {
        found = true;
        EXPECT_LT(std::abs(t.amplitude() - amp), 1e-12);
      }
    }
    EXPECT_TRUE(found);
  }
  const auto result = postselect(evolved(0.0, 1e6), fourfold_pattern({}, {}, {}));
  EXPECT_NEAR(result.probability, oracle_prob, 1e-12);
  EXPECT_NEAR(result.probability, 1.0 / 8.0, 1e-12);
}

TEST(Postselect, VacuumGivesZeroAndEmpty) {
  const auto result = postselect(StateVector::vacuum(), fourfold_pattern({}, {}, {}));
  EXPECT_EQ(result.probability, 0.0);
  EXPECT_TRUE(result.conditional.empty());
}

TEST(Postselect, ExtraPhotonsElsewhereAreRejected) {
  const StateVector s({KetTerm(1.0, {make_photon("T", P::H), make_photon("1", P::H), make_photon("2", P::H),
                                     make_photon("3", P::H), make_photon("x", P::H)})});
  EXPECT_EQ(postselect(s, fourfold_pattern({}, {}, {})).probability, 0.0);
}

TEST(PatternProbability, GhzDiagonalSettings) {
  const auto settings = [](double t3) {
    return std::vector<AnalyzerSetting>{AnalyzerSetting::pass_through("T"), AnalyzerSetting::polarizer("1", 45.0),
                                        AnalyzerSetting::polarizer("2", -45.0), AnalyzerSetting::polarizer("3", t3)};
  };
  EXPECT_NEAR(pattern_probability(ghz(), settings(-45.0)), 0.25, 1e-12);
  EXPECT_NEAR(pattern_probability(ghz(), settings(45.0)), 0.0, 1e-12);
}

TEST(PatternProbability, VerticalD1RemovesCorrelation) {
  const auto p = [](double t3) {
    return pattern_probability(ghz(), {AnalyzerSetting::pass_through("T"), AnalyzerSetting::polarizer("1", 0.0),
                                       AnalyzerSetting::polarizer("2", -45.0), AnalyzerSetting::polarizer("3", t3)});
  };
  EXPECT_NEAR(p(-45.0), p(45.0), 1e-12);
  EXPECT_GT(p(45.0), 0.0);
}

TEST(PatternProbability, CompleteAnalyzerOutcomesSumToPassThrough) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> angle(0.0, 180.0);
  const StateVector s = evolved(0.0, 180.0, 90.0);
  for (int rep = 0; rep < 50; ++rep) {
    const double a1 = angle(rng);
    const double a2 = angle(rng);
    const double a3 = angle(rng);
    const double pass = postselect(s, fourfold_pattern(a1, a2, {})).probability;
    const double split = postselect(s, fourfold_pattern(a1, a2, a3)).probability +
                         postselect(s, fourfold_pattern(a1, a2, a3 + 90.0)).probability;
    EXPECT_NEAR(pass, split, 1e-12);
    EXPECT_GE(pass, 0.0);
    EXPECT_LE(pass, 1.0);
  }
}

TEST(Postselect, InvariantUnderGlobalPhaseAndRetagging) {
  const StateVector s = evolved(0.0, 120.0, 200.0);
  const auto pattern = fourfold_pattern(45.0, -45.0, 45.0);
  const double base = postselect(s, pattern).probability;
  EXPECT_NEAR(postselect(scaled(s, std::polar(1.0, 1.234)), pattern).probability, base, 1e-14);
  EXPECT_NEAR(postselect(without_origin_tags(s), pattern).probability, base, 1e-14);
}

TEST(ConditionalD3, IdealGhzDiagonalSettings) {
  const auto d3 = conditional_d3(ghz(), 45.0, -45.0);
  EXPECT_NEAR(d3.p_plus45, 0.0, 1e-12);
  EXPECT_NEAR(d3.p_minus45, 1.0, 1e-12);
}

TEST(ConditionalD3, VerticalD1GivesHalfHalf) {
  const auto d3 = conditional_d3(ghz(), 0.0, -45.0);
  EXPECT_NEAR(d3.p_plus45, 0.5, 1e-12);
  EXPECT_NEAR(d3.p_minus45, 0.5, 1e-12);
}

TEST(ConditionalD3, DistinguishablePairsGiveHalfHalf) {
  const auto d3 = conditional_d3(evolved(0.0, 0.0, 1e6), 45.0, -45.0);
  EXPECT_NEAR(d3.p_plus45, 0.5, 1e-12);
  EXPECT_NEAR(d3.p_minus45, 0.5, 1e-12);
}

TEST(ConditionalD3, ZeroConditioningThrows) {
  // D1 horizontal and D2 vertical never fire together on the GHZ state.
  EXPECT_THROW(conditional_d3(ghz(), 90.0, 0.0), UndefinedConditional);
}

TEST(Fidelity, IdenticalAndOrthogonalStates) {
  const StateVector hhv({KetTerm(1.0, {make_photon("1", P::H), make_photon("2", P::H), make_photon("3", P::V)})});
  const StateVector vvh({KetTerm(1.0, {make_photon("1", P::V), make_photon("2", P::V), make_photon("3", P::H)})});
  EXPECT_NEAR(fidelity(hhv, hhv), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(hhv, vvh), 0.0, 1e-15);
}

TEST(Fidelity, UnnormalizedInputRejected) {
  const StateVector s({KetTerm(2.0, {make_photon("1", P::H)})});
  EXPECT_THROW(fidelity(s, s), InvalidParameter);
}

TEST(DropPaths, RemovesCommonFactor) {
  const StateVector s({KetTerm(r, {make_photon("T", P::H), make_photon("2", P::H), make_photon("3", P::V)}),
                       KetTerm(r, {make_photon("T", P::H), make_photon("2", P::V), make_photon("3", P::H)})});
  const StateVector reduced = drop_paths(s, {"T"});
  EXPECT_EQ(reduced.size(), 2u);
  EXPECT_NEAR(norm_squared(reduced), 1.0, 1e-12);
  const StateVector mixed({KetTerm(r, {make_photon("T", P::H), make_photon("2", P::H)}),
                           KetTerm(r, {make_photon("T", P::V), make_photon("2", P::V)})});
  EXPECT_THROW(drop_paths(mixed, {"T"}), InvalidParameter);
}

TEST(OccupationDistribution, SumsToOneForIsometricCircuits) {
  const StateVector out = evolved(0.0, 0.0);
  double total = 0.0;
  for (const auto& [counts, p] : occupation_distribution(out, {"T", "1", "2", "3"})) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(DelayDependence, ContrastNonIncreasingInAbsoluteDelay) {
  double previous = 2.0;
  for (double d = 0.0; d <= 2500.0; d += 50.0) {
    const auto d3 = conditional_d3(evolved(0.0, 0.0, d), 45.0, -45.0);
    const double contrast = std::abs(d3.p_minus45 - d3.p_plus45);
    EXPECT_LE(contrast, previous + 1e-12) << d;
    previous = contrast;
  }
}

}  // namespace
