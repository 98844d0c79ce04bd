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


#include "railsim/protocols.h"

#include <cmath>

#include "gtest/gtest.h"

#include "railsim/analytics.h"
#include "railsim/errors.h"

using namespace railsim;

namespace {

double vis(const ProtocolSpec &spec, const std::string &label, int points = 64) {
    return fringe_scan(spec, uniform_grid(points)).at(label).fit.visibility;
}

std::vector<ProtocolSpec> teleport_specs() {
    std::vector<ProtocolSpec> out;
    for (double alpha : {0.3, 0.6, 0.85}) {
        out.push_back(ideal_teleportation(alpha));
        out.push_back(threshold_teleportation(alpha));
        auto exact = threshold_teleportation(alpha);
        exact.loss_model = LossModel::Exact;
        exact.etas = {{1, 0.4}, {2, 0.7}, {3, 0.9}, {4, 0.7}};
        exact.qubit.delta = 0.7;
        out.push_back(exact);
        auto noisy = threshold_teleportation(alpha);
        noisy.noise = {0.95, 0.9, 0.85};
        noisy.transmittances = {{"BS12", 0.45}, {"BS34", 0.4}, {"BS13", 0.55}};
        out.push_back(noisy);
    }
    return out;
}

}  // namespace

TEST(uniform_grid, spacing) {
    auto g = uniform_grid(64);
    ASSERT_EQ(g.size(), 64u);
    EXPECT_EQ(g[0], 0.0);
    EXPECT_NEAR(g[63], 2 * M_PI * 63 / 64, 1e-15);
}

TEST(fringe_visibility, cosine_fit_and_fallback) {
    auto g = uniform_grid(64);
    std::vector<double> cosine, flat, square;
    for (double p : g) {
        cosine.push_back(0.4 * (1 + 0.7 * std::cos(p + 1.1)));
        flat.push_back(0.2);
        square.push_back(p < M_PI ? 0.9 : 0.1);
    }
    auto f = fringe_visibility(g, cosine);
    EXPECT_TRUE(f.used_fit);
    EXPECT_NEAR(f.visibility, 0.7, 1e-12);
    EXPECT_NEAR(f.mean, 0.4, 1e-12);
    EXPECT_NEAR(f.phase_of_max, 2 * M_PI - 1.1, 1e-12);

    EXPECT_NEAR(fringe_visibility(g, flat).visibility, 0, 1e-15);

    auto s = fringe_visibility(g, square);
    EXPECT_FALSE(s.used_fit);
    EXPECT_NEAR(s.visibility, 0.8, 1e-15);
}

TEST(fringe_scan, grid_validation) {
    auto spec = threshold_teleportation(0.5);
    EXPECT_THROW(fringe_scan(spec, uniform_grid(7)), ConfigError);
    auto g = uniform_grid(16);
    g.back() = 7.0;
    EXPECT_THROW(fringe_scan(spec, g), ConfigError);
    std::vector<double> clustered;
    for (int k = 0; k < 10; k++) {
        clustered.push_back(0.1 * k);
    }
    EXPECT_THROW(fringe_scan(spec, clustered), ConfigError);
}

TEST(fringe_scan, vacuum_has_no_signal) {
    ProtocolSpec spec;
    spec.kind = ProtocolKind::CharacterizationMZI;
    spec.qubit.alpha = 1;
    EXPECT_THROW(fringe_scan(spec, uniform_grid(16)), NoSignal);
}

TEST(build_protocol, configuration_errors) {
    auto spec = threshold_teleportation(0.5);
    spec.transmittances["BS9"] = 0.5;
    EXPECT_THROW(build_protocol(spec, 0), ConfigError);
    spec = threshold_teleportation(0.5);
    spec.etas[9] = 0.5;
    EXPECT_THROW(build_protocol(spec, 0), ConfigError);
    spec = threshold_teleportation(1.5);
    EXPECT_THROW(build_protocol(spec, 0), DomainError);
    ProtocolSpec swap;
    swap.kind = ProtocolKind::Swapping;
    EXPECT_THROW(build_protocol(swap, 0, Stage::AliceStage), ConfigError);
    EXPECT_THROW(alice_herald(spec, 1), ConfigError);
}

TEST(bell_mzi, cos_squared_fringe) {
    ProtocolSpec spec;
    spec.kind = ProtocolKind::BellStateMZI;
    auto r = fringe_scan(spec, uniform_grid(32));
    const auto &d1 = r.at("D1");
    for (size_t k = 0; k < r.grid.size(); k++) {
        double c = std::cos(r.grid[k] / 2);
        EXPECT_NEAR(d1.values[k], c * c, 1e-12);
    }
    EXPECT_NEAR(d1.fit.visibility, 1, 1e-12);
}

TEST(characterization_mzi, high_loss_visibility) {
    for (double a2 : {0.1, 0.5, 0.9}) {
        ProtocolSpec spec;
        spec.kind = ProtocolKind::CharacterizationMZI;
        spec.qubit.alpha = std::sqrt(a2);
        spec.loss_model = LossModel::HighLossLimit;
        EXPECT_NEAR(vis(spec, "D1"), a2, 1e-12);
        spec.noise = {0.98, std::sqrt(0.9055), std::sqrt(0.9055)};
        EXPECT_NEAR(vis(spec, "D1"), 0.98 * 0.98 * std::sqrt(0.9055) * a2, 1e-12);
    }
}

TEST(teleportation, ideal_visibility_equals_input) {
    for (double a2 : {0.05, 0.3, 0.5, 0.77, 0.95}) {
        EXPECT_NEAR(vis(ideal_teleportation(std::sqrt(a2)), "P12"), a2, 1e-9);
    }
}

TEST(teleportation, threshold_visibility) {
    for (double a2 : {0.05, 0.3, 0.5, 0.77, 0.95}) {
        EXPECT_NEAR(vis(threshold_teleportation(std::sqrt(a2)), "P12"), 2 * a2 / (3 - a2), 1e-9);
    }
}

TEST(teleportation, noisy_visibility_matches_model) {
    SourceParams src{0.98, 0.9055, 0.8987};
    for (double a2 : {0.2, 0.5, 0.8}) {
        auto spec = threshold_teleportation(std::sqrt(a2));
        spec.noise = {src.lambda, src.v_hom_alice, src.v_hom_bob};
        double V = src.lambda * src.lambda * std::sqrt(src.v_hom_alice) * a2;
        EXPECT_NEAR(vis(spec, "P12"), teleported_visibility_model(V, src), 1e-9);
    }
}

TEST(teleportation, heralds_agree_up_to_pi_shift) {
    for (const auto &spec : teleport_specs()) {
        auto r = fringe_scan(spec, uniform_grid(64));
        const auto &p12 = r.at("P12");
        const auto &p14 = r.at("P14");
        const auto &p32 = r.at("P32");
        const auto &p34 = r.at("P34");
        EXPECT_NEAR(p12.fit.visibility, p14.fit.visibility, 1e-9);
        EXPECT_NEAR(p32.fit.visibility, p34.fit.visibility, 1e-9);
        double scale12 = p12.fit.mean, scale14 = p14.fit.mean;
        for (size_t k = 0; k < 64; k++) {
            EXPECT_NEAR(p12.values[k] / scale12, p14.values[(k + 32) % 64] / scale14, 1e-9);
        }
    }
}

TEST(teleportation, asymmetric_bell_measurement_splits_heralds) {
    auto spec = threshold_teleportation(0.6);
    spec.transmittances = {{"BS24", 0.55}};
    auto r = fringe_scan(spec, uniform_grid(64));
    EXPECT_GT(std::abs(r.at("P12").fit.visibility - r.at("P14").fit.visibility), 1e-3);

    spec = threshold_teleportation(0.6);
    spec.loss_model = LossModel::Exact;
    spec.etas = {{2, 0.7}, {4, 0.5}};
    r = fringe_scan(spec, uniform_grid(64));
    EXPECT_GT(std::abs(r.at("P12").fit.visibility - r.at("P14").fit.visibility), 1e-3);
}

TEST(teleportation, visibility_invariant_under_common_loss_scaling) {
    for (double alpha : {0.3, 0.7}) {
        for (auto base : {threshold_teleportation(alpha), ideal_teleportation(alpha)}) {
            std::vector<double> ref;
            for (double c : {1.0, 0.5, 0.1, 0.01}) {
                auto spec = base;
                spec.etas = {{1, 0.8 * c}, {2, 0.6 * c}, {3, 0.9 * c}, {4, 0.7 * c}};
                auto r = fringe_scan(spec, uniform_grid(64));
                std::vector<double> v;
                for (const auto &h : r.heralds) {
                    v.push_back(h.fit.visibility);
                }
                if (ref.empty()) {
                    ref = v;
                }
                for (size_t k = 0; k < v.size(); k++) {
                    EXPECT_NEAR(v[k], ref[k], 1e-12);
                }
            }
        }
    }
}

TEST(teleportation, limit_matches_small_efficiency) {
    for (double alpha : {0.3, 0.6, 0.9}) {
        auto limit = threshold_teleportation(alpha);
        auto numeric = limit;
        numeric.loss_model = LossModel::Exact;
        numeric.etas = {{1, 1e-3}, {2, 1e-3}, {3, 1e-3}, {4, 1e-3}};
        EXPECT_NEAR(vis(limit, "P12"), vis(numeric, "P12"), 1e-3);
    }
}

TEST(conditioning_contrast, unconditioned_fringe_vanishes) {
    for (double alpha : {0.1, 0.4, M_SQRT1_2, 0.9}) {
        for (auto spec : {threshold_teleportation(alpha), ideal_teleportation(alpha)}) {
            auto grid = uniform_grid(64);
            auto c = conditioning_contrast(spec, grid);
            EXPECT_NEAR(c.unconditioned, 0, 1e-9);
            EXPECT_GT(c.conditioned, 1e-3);
            EXPECT_NEAR(c.conditioned, fringe_scan(spec, grid).at("P12").fit.visibility, 1e-12);
        }
    }
    auto c = conditioning_contrast(threshold_teleportation(1.0), uniform_grid(64));
    EXPECT_EQ(c.conditioned, 0);
    EXPECT_NEAR(c.unconditioned, 0, 1e-12);
}

TEST(swapping, balanced_visibilities) {
    ProtocolSpec spec;
    spec.kind = ProtocolKind::Swapping;
    auto r = fringe_scan(spec, uniform_grid(64));
    for (const char *label : {"CC12", "CC13", "CC42", "CC43"}) {
        EXPECT_NEAR(r.at(label).fit.visibility, 1, 1e-9) << label;
    }
    spec.noise = {1, std::sqrt(0.902), std::sqrt(0.902)};
    r = fringe_scan(spec, uniform_grid(64));
    for (const char *label : {"CC12", "CC13", "CC42", "CC43"}) {
        EXPECT_NEAR(r.at(label).fit.visibility, 0.902, 1e-9) << label;
    }
}

TEST(swapping, complementary_pairs_are_phase_opposed) {
    ProtocolSpec spec;
    spec.kind = ProtocolKind::Swapping;
    spec.transmittances = {{"BS2", 0.4}, {"BS3", 0.6}, {"BS4", 0.55}, {"BS5", 0.62}};
    auto r = fringe_scan(spec, uniform_grid(64));
    double d = std::remainder(r.at("CC12").fit.phase_of_max - r.at("CC13").fit.phase_of_max, 2 * M_PI);
    EXPECT_NEAR(std::abs(d), M_PI, 1e-9);
    d = std::remainder(r.at("CC42").fit.phase_of_max - r.at("CC43").fit.phase_of_max, 2 * M_PI);
    EXPECT_NEAR(std::abs(d), M_PI, 1e-9);
}

TEST(swapping, matches_closed_form) {
    SwapParams p{0.4, 0.6, 0.45, 0.38, 0.9};
    ProtocolSpec spec;
    spec.kind = ProtocolKind::Swapping;
    spec.noise = {1, std::sqrt(p.m), std::sqrt(p.m)};
    spec.transmittances = {{"BS1", 0.3}, {"BS2", 1 - p.R2}, {"BS3", 1 - p.R3}, {"BS4", 1 - p.R4},
                           {"BS5", 1 - p.R5}};
    auto r = fringe_scan(spec, uniform_grid(64));
    auto v = swap_visibilities(p);
    for (size_t k = 0; k < 4; k++) {
        auto name = swap_pair_name(kSwapPairs[k]);
        EXPECT_NEAR(r.at(name).fit.visibility, v[k], 1e-9) << name;
        for (size_t j = 0; j < r.grid.size(); j++) {
            EXPECT_NEAR(r.at(name).values[j], swap_coincidence_probability(kSwapPairs[k], 1.0, p, 0.7, r.grid[j]),
                        1e-12);
        }
    }
}

TEST(FringeScanResult, serialization_and_lookup) {
    auto r = fringe_scan(threshold_teleportation(0.5), uniform_grid(8));
    auto csv = r.to_csv();
    EXPECT_EQ(csv.rfind("herald,phase,probability\nP12,0,", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 4 * 8);
    EXPECT_NE(r.summary().find("P12 -> "), std::string::npos);
    EXPECT_THROW(r.at("nope"), ConfigError);
}

TEST(fringe_scan, independent_of_worker_count) {
    auto spec = threshold_teleportation(0.45);
    spec.loss_model = LossModel::Exact;
    auto grid = uniform_grid(48);
    auto one = fringe_scan(spec, grid, 1).to_csv();
    EXPECT_EQ(fringe_scan(spec, grid, 4).to_csv(), one);
    EXPECT_EQ(fringe_scan(spec, grid, 8).to_csv(), one);
}
