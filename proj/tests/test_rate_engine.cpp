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
#include <random>

#include "ghzsim/rate_engine.hpp"
#include "oracles.hpp"

namespace {

using namespace ghzsim;

RateParams reference_params() { return make_rate_params(7.6e7, 4e-4, 0.1); }

TEST(Outcomes, DistributionsAreNormalized) {
  for (unsigned k = 0; k <= kMaxPairs; ++k) {
    double total = 0.0;
    for (double p : ideal_circuit_outcomes()[k].probabilities) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12) << k;
  }
}

TEST(Outcomes, PhotonNumberIsConserved) {
  for (unsigned k = 0; k <= kMaxPairs; ++k) {
    for (const auto& occ : ideal_circuit_outcomes()[k].occupations) {
      EXPECT_EQ(occ[0] + occ[1] + occ[2] + occ[3], 2 * k);
    }
  }
}

TEST(Outcomes, DoublePairFourfoldFromPostselection) {
  EXPECT_NEAR(ideal_double_pair_postselect_probability(), 1.0 / 12.0, 1e-12);
  EXPECT_NEAR(fourfold_given_pairs(2, 1.0), ideal_double_pair_postselect_probability(), 1e-12);
}

TEST(Outcomes, ExactlyOneEachMatchesSubsetEnumeration) {
  for (double eta : {0.05, 0.1, 0.5, 0.9}) {
    for (unsigned k = 1; k <= kMaxPairs; ++k) {
      const auto& dist = ideal_circuit_outcomes()[k];
      double oracle_total = 0.0;
      for (std::size_t i = 0; i < dist.occupations.size(); ++i) {
        const auto& o = dist.occupations[i];
        const double direct = one_detected_per_detector(o, eta);
        const double brute = oracle::exactly_one_each_by_subsets({o[0], o[1], o[2], o[3]}, eta);
        EXPECT_NEAR(direct, brute, 1e-15);
        oracle_total += dist.probabilities[i] * brute;
      }
      EXPECT_NEAR(fourfold_given_pairs(k, eta), oracle_total, 1e-15);
    }
  }
}

TEST(Outcomes, SinglePairNeverGivesFourfold) { EXPECT_EQ(fourfold_given_pairs(1, 0.5), 0.0); }

TEST(FourfoldRate, ZeroEfficiencyGivesZero) {
  RateParams p = make_rate_params(7.6e7, 4e-4, 0.0);
  EXPECT_EQ(fourfold_prob_per_pulse(p), 0.0);
}

TEST(FourfoldRate, DoublingPairMeanQuadruplesDoubleTerm) {
  const RateParams a = make_rate_params(7.6e7, 4e-4, 0.1);
  const RateParams b = make_rate_params(7.6e7, 8e-4, 0.1);
  EXPECT_NEAR(fourfold_double_prob_per_pulse(b) / fourfold_double_prob_per_pulse(a), 4.0, 4.0 * 1e-3);
}

TEST(FourfoldRate, MonotoneInPairMeanAndEfficiency) {
  double previous = 0.0;
  for (double mu = 1e-4; mu < 0.1; mu *= 1.5) {
    const double p = fourfold_prob_per_pulse(make_rate_params(7.6e7, mu, 0.1));
    EXPECT_GT(p, previous);
    previous = p;
  }
  previous = 0.0;
  for (double eta = 0.05; eta <= 1.0; eta += 0.05) {
    const double p = fourfold_prob_per_pulse(make_rate_params(7.6e7, 4e-4, eta));
    EXPECT_GT(p, previous);
    previous = p;
  }
}

TEST(FourfoldRate, VanishesFasterThanTwofold) {
  const double r1 = fourfold_prob_per_pulse(make_rate_params(7.6e7, 1e-3, 0.1)) /
                    twofold_prob_per_pulse(make_rate_params(7.6e7, 1e-3, 0.1));
  const double r2 = fourfold_prob_per_pulse(make_rate_params(7.6e7, 1e-4, 0.1)) /
                    twofold_prob_per_pulse(make_rate_params(7.6e7, 1e-4, 0.1));
  EXPECT_LT(r2, r1 / 5.0);
}

TEST(FiringDistribution, SumsToOne) {
  for (unsigned k = 0; k <= kMaxPairs; ++k) {
    double total = 0.0;
    for (double p : firing_distribution(k, 0.3)) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Calibration, MultiPairGainHitsTarget) {
  const RateParams p = calibrate_multi_pair_gain(reference_params(), 1e-10);
  EXPECT_NEAR(fourfold_prob_per_pulse(p), 1e-10, 1e-22);
  EXPECT_EQ(p.pair_mean, 4e-4);
  EXPECT_GT(p.multi_pair_gain, 1.0);
}

TEST(Calibration, PairMeanHitsTarget) {
  const RateParams p = calibrate_pair_mean(reference_params(), 1e-10);
  EXPECT_NEAR(fourfold_prob_per_pulse(p), 1e-10, 1e-13);
  EXPECT_EQ(p.multi_pair_gain, 1.0);
}

TEST(Calibration, RejectsBadTargets) {
  EXPECT_THROW(calibrate_multi_pair_gain(reference_params(), 0.0), InvalidParameter);
  EXPECT_THROW(calibrate_pair_mean(reference_params(), 0.5), InvalidParameter);
}

TEST(RateParams, Validation) {
  EXPECT_THROW(make_rate_params(7.6e7, -1.0, 0.1), InvalidParameter);
  EXPECT_THROW(make_rate_params(7.6e7, 4e-4, 1.5), InvalidParameter);
  EXPECT_THROW(make_rate_params(-1.0, 4e-4, 0.1), InvalidParameter);
}

TEST(SimulateCounts, SameSeedSameReport) {
  const RateParams p = calibrate_multi_pair_gain(reference_params(), 1e-10);
  EXPECT_EQ(simulate_counts(p, 10.0, 3), simulate_counts(p, 10.0, 3));
  EXPECT_NE(simulate_counts(p, 10.0, 3), simulate_counts(p, 10.0, 4));
}

TEST(SimulateCounts, RejectsBadInputs) {
  EXPECT_THROW(simulate_counts(reference_params(), 0.0, 1), InvalidParameter);
  RateParams p = reference_params();
  p.multi_pair_gain = 1e9;
  EXPECT_THROW(simulate_counts(p, 1.0, 1), InvalidParameter);
}

// Poisson z-score of an observed count against its expectation.
double z_score(double observed, double expected) { return (observed - expected) / std::sqrt(expected); }

TEST(SimulateCounts, AgreesWithAnalyticRatesOnRandomParameters) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> mu(0.05, 0.1);
  std::uniform_real_distribution<double> eta(0.5, 0.9);
  for (int rep = 0; rep < 8; ++rep) {
    const RateParams p = make_rate_params(1e6, mu(rng), eta(rng));
    const double duration = 10.0;
    const auto report = simulate_counts(p, duration, 100 + rep);
    const double pulses = static_cast<double>(report.pulses);
    const double expected_double = fourfold_double_prob_per_pulse(p) * pulses;
    const double expected_triple = fourfold_triple_prob_per_pulse(p) * pulses;
    const double expected_twofold = twofold_prob_per_pulse(p) * pulses;
    ASSERT_GT(expected_double, 30.0);
    EXPECT_LT(std::abs(z_score(static_cast<double>(report.fourfold_double), expected_double)), 3.0);
    if (expected_triple > 5.0) {
      EXPECT_LT(std::abs(z_score(static_cast<double>(report.fourfold_triple), expected_triple)), 3.0);
    }
    EXPECT_LT(std::abs(z_score(static_cast<double>(report.twofolds), expected_twofold)), 3.0);
    for (unsigned k = 1; k <= kMaxPairs; ++k) {
      const double expected = pair_number_probability(p, k) * pulses;
      EXPECT_LT(std::abs(z_score(static_cast<double>(report.pulses_with_pairs[k]), expected)), 3.5);
    }
  }
}

}  // namespace
