// Copyright 2026 The railsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "railsim/oracle.h"

#include <cmath>

#include "gtest/gtest.h"

#include "railsim/errors.h"
#include "test_util.h"

using namespace railsim;
using railsim::testing::random_detectors;
using railsim::testing::random_ensemble;
using railsim::testing::random_state;
using railsim::testing::test_rng;
using railsim::testing::uniform01;
using railsim::testing::uniform_int;

namespace {

double max_deviation(const OutcomeDistribution &a, const OutcomeDistribution &b) {
    double d = 0;
    for (const auto &[p, v] : a.probs()) {
        d = std::max(d, std::abs(v - b.probability(p)));
    }
    for (const auto &[p, v] : b.probs()) {
        d = std::max(d, std::abs(v - a.probability(p)));
    }
    return d;
}

}  // namespace

TEST(oracle_distribution, agrees_with_fast_path_property) {
    auto &rng = test_rng();
    for (int k = 0; k < 600; k++) {
        auto e = random_ensemble(rng);
        auto dets = random_detectors(rng);
        auto fast = outcome_distribution(e, dets);
        auto slow = oracle_distribution(e, dets);
        ASSERT_LT(max_deviation(fast, slow), 1e-12) << k;
        double total = 0;
        for (const auto &[p, v] : slow.probs()) {
            ASSERT_GE(v, -1e-15);
            total += v;
        }
        ASSERT_NEAR(total, 1, 1e-12);
    }
}

TEST(oracle_distribution, unit_efficiency_counts_are_deterministic) {
    FockBasisState b({{ModeLabel{1, 0, 0}, 2}, {ModeLabel{2, 1, 0}, 1}});
    std::vector<DetectorSpec> dets = {{ModeLabel{1, 0, 0}, 1, DetectorKind::PhotonNumberResolving},
                                      {ModeLabel{2, 1, 0}, 1, DetectorKind::PhotonNumberResolving}};
    auto d = oracle_distribution(PureState::basis(b), dets);
    ASSERT_EQ(d.probs().size(), 1u);
    EXPECT_NEAR(d.probability({2, 1}), 1, 1e-15);
}

TEST(oracle_distribution, limits) {
    FockBasisState big({{ModeLabel{1, 0, 0}, kOracleMaxPhotons + 1}});
    EXPECT_THROW(oracle_distribution(PureState::basis(big), {{ModeLabel{1, 0, 0}, 0.5}}), DomainError);
    FockBasisState env({{ModeLabel{kEnvironmentBase + 1, 0, 0}, 1}});
    EXPECT_THROW(oracle_distribution(PureState::basis(env), {{ModeLabel{1, 0, 0}, 0.5}}), ConfigError);
}

TEST(oracle_event_probability, agrees_with_fast_path) {
    auto &rng = test_rng();
    for (int k = 0; k < 100; k++) {
        auto e = random_ensemble(rng);
        auto dets = random_detectors(rng);
        Herald h;
        for (size_t d = 0; d < dets.size(); d++) {
            if (uniform01(rng) < 0.6) {
                int lo = uniform_int(rng, 0, 2);
                h.push_back({(int)d, lo, lo + uniform_int(rng, 0, 2)});
            }
        }
        ASSERT_NEAR(oracle_event_probability(e, dets, h), event_probability(e, dets, h), 1e-12);
    }
}

TEST(oracle_condition, agrees_with_fast_path) {
    auto &rng = test_rng();
    ModeLabel keep{4, 0, 0};
    int checked = 0;
    for (int k = 0; k < 400; k++) {
        auto base = random_state(rng, 3, 3, 1, 5);
        std::map<FockBasisState, Amplitude> terms;
        for (const auto &[s, a] : base.terms()) {
            terms[uniform01(rng) < 0.5 ? s.with(keep, 1) : s] += a;
        }
        PureState s = PureState(terms).normalized();
        auto dets = random_detectors(rng);
        Herald h = {click(0)};
        ConditionResult fast, slow;
        try {
            fast = condition(s, dets, h, keep);
        } catch (const ImpossibleHerald &) {
            EXPECT_THROW(oracle_condition(s, dets, h, keep), ImpossibleHerald);
            continue;
        }
        slow = oracle_condition(s, dets, h, keep);
        checked++;
        ASSERT_NEAR(fast.probability, slow.probability, 1e-12);
        for (int i = 0; i < 2; i++) {
            for (int j = 0; j < 2; j++) {
                ASSERT_NEAR(std::abs(fast.state.rho[i][j] - slow.state.rho[i][j]), 0, 1e-12);
            }
        }
    }
    EXPECT_GT(checked, 150);
}

TEST(oracle, loss_commutes_with_passive_elements) {
    auto &rng = test_rng();
    for (int k = 0; k < 100; k++) {
        auto s = random_state(rng, 3, 2, 1);
        double eta = uniform01(rng);
        Circuit passive = {PhaseShift{1, 2 * M_PI * uniform01(rng)}, BeamSplitter{1, 2, uniform01(rng)},
                           PhaseShift{2, 2 * M_PI * uniform01(rng)}, Delay{1, 1}};
        Circuit loss;
        for (int port : {1, 2}) {
            loss.push_back(BeamSplitter{port, kEnvironmentBase + port, eta});
        }
        auto before = run_circuit(run_circuit(s, loss), passive);
        auto after = run_circuit(run_circuit(s, passive), loss);
        std::vector<DetectorSpec> dets;
        for (int port : {1, 2}) {
            for (int bin = 0; bin <= 2; bin++) {
                dets.push_back({ModeLabel{port, bin, 0}, 1.0, DetectorKind::PhotonNumberResolving});
            }
        }
        auto a = outcome_distribution(before, dets);
        auto b = outcome_distribution(after, dets);
        ASSERT_LT(max_deviation(a, b), 1e-12);
        for (auto &d : dets) {
            d.efficiency = eta;
        }
        ASSERT_LT(max_deviation(a, outcome_distribution(run_circuit(s, passive), dets)), 1e-12);
    }
}

TEST(verify_formula, registered_suites_pass) {
    auto ids = registered_formulas();
    EXPECT_EQ(ids.size(), 9u);
    for (const auto &id : ids) {
        auto r = verify_formula(id);
        EXPECT_TRUE(r.passed) << report_table({r});
        EXPECT_GT(r.points, 0);
        EXPECT_LT(r.fast_path_deviation, 1e-12) << id;
    }
}

TEST(verify_formula, deterministic_report) {
    auto a = report_table({verify_formula("probe_V_limit", 1), verify_formula("teleport_P4", 1)});
    auto b = report_table({verify_formula("probe_V_limit", 4), verify_formula("teleport_P4", 3)});
    EXPECT_EQ(a, b);
    EXPECT_THROW(verify_formula("nope"), ConfigError);
}
