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

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "railsim/analytics.h"
#include "railsim/errors.h"
#include "railsim/parallel.h"
#include "railsim/protocols.h"
#include "railsim/text.h"

namespace railsim {

namespace {

void check_oracle_input(const Ensemble &state, const std::vector<DetectorSpec> &detectors) {
    validate_detectors(detectors);
    for (const auto &c : state.components()) {
        if (c.state.max_photons() > kOracleMaxPhotons) {
            throw DomainError("oracle photon limit of " + std::to_string(kOracleMaxPhotons) + " exceeded");
        }
        for (const auto &m : c.state.modes()) {
            if (m.spatial >= kEnvironmentBase) {
                throw ConfigError("state uses a reserved environment mode");
            }
        }
    }
}

/// Loss beam splitters for the listed detectors.
Circuit loss_circuit(const std::vector<DetectorSpec> &detectors, const std::vector<int> &which) {
    Circuit c;
    for (int d : which) {
        const auto &det = detectors[d];
        c.push_back(BeamSplitter{det.mode.spatial, kEnvironmentBase + d, det.efficiency, +1, det.mode.time_bin});
    }
    return c;
}

std::vector<int> raw_counts(const FockBasisState &basis, const std::vector<DetectorSpec> &detectors) {
    std::vector<int> counts(detectors.size(), 0);
    for (const auto &[m, n] : basis.occupations()) {
        for (size_t d = 0; d < detectors.size(); d++) {
            if (m.spatial == detectors[d].mode.spatial && m.time_bin == detectors[d].mode.time_bin) {
                counts[d] += n;
            }
        }
    }
    return counts;
}

int outcome_of(const DetectorSpec &det, int count) {
    return det.kind == DetectorKind::Threshold ? (count > 0 ? 1 : 0) : count;
}

bool herald_holds(const std::vector<DetectorSpec> &detectors, const std::vector<int> &counts, const Herald &h) {
    for (const auto &c : h) {
        int o = outcome_of(detectors[c.detector], counts[c.detector]);
        if (o < c.min || o > c.max) {
            return false;
        }
    }
    return true;
}

std::vector<int> herald_detectors(const Herald &h) {
    std::vector<int> out;
    for (const auto &c : h) {
        out.push_back(c.detector);
    }
    return out;
}

}  // namespace

OutcomeDistribution oracle_distribution(const Ensemble &state, const std::vector<DetectorSpec> &detectors) {
    check_oracle_input(state, detectors);
    std::vector<int> all(detectors.size());
    for (size_t d = 0; d < detectors.size(); d++) {
        all[d] = (int)d;
    }
    auto lossy = run_circuit(state, loss_circuit(detectors, all));
    std::map<DetectionPattern, double> probs;
    for (const auto &comp : lossy.components()) {
        for (const auto &[basis, amp] : comp.state.terms()) {
            auto counts = raw_counts(basis, detectors);
            DetectionPattern pat(detectors.size());
            for (size_t d = 0; d < detectors.size(); d++) {
                pat[d] = outcome_of(detectors[d], counts[d]);
            }
            probs[pat] += comp.weight * std::norm(amp);
        }
    }
    return OutcomeDistribution(detectors, std::move(probs));
}

double oracle_event_probability(const Ensemble &state, const std::vector<DetectorSpec> &detectors, const Herald &event) {
    check_oracle_input(state, detectors);
    validate_herald(detectors, event);
    auto lossy = run_circuit(state, loss_circuit(detectors, herald_detectors(event)));
    double p = 0;
    for (const auto &comp : lossy.components()) {
        for (const auto &[basis, amp] : comp.state.terms()) {
            if (herald_holds(detectors, raw_counts(basis, detectors), event)) {
                p += comp.weight * std::norm(amp);
            }
        }
    }
    return p;
}

ConditionResult oracle_condition(
    const Ensemble &state, const std::vector<DetectorSpec> &detectors, const Herald &herald, const ModeLabel &keep) {
    check_oracle_input(state, detectors);
    validate_herald(detectors, herald);
    ModeLabel principal{keep.spatial, keep.time_bin, 0};
    auto lossy = run_circuit(state, loss_circuit(detectors, herald_detectors(herald)));
    std::array<std::array<Amplitude, 2>, 2> m{};
    for (const auto &comp : lossy.components()) {
        std::map<FockBasisState, std::array<Amplitude, 2>> groups;
        for (const auto &[basis, amp] : comp.state.terms()) {
            if (!herald_holds(detectors, raw_counts(basis, detectors), herald)) {
                continue;
            }
            int k = basis.occupation(principal);
            if (k > 1) {
                throw DomainError("kept mode carries more than one photon in a heralded term");
            }
            groups[basis.with(principal, 0)][k] += amp;
        }
        for (const auto &[rest, v] : groups) {
            for (int i = 0; i < 2; i++) {
                for (int j = 0; j < 2; j++) {
                    m[i][j] += comp.weight * v[i] * std::conj(v[j]);
                }
            }
        }
    }
    double p = m[0][0].real() + m[1][1].real();
    if (p < 1e-15) {
        throw ImpossibleHerald("herald probability below 1e-15");
    }
    ConditionResult out{p, 0, {}};
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            out.state.rho[i][j] = m[i][j] / p;
        }
    }
    return out;
}

namespace {

constexpr int kPhasePoints = 16;
const std::vector<double> kLimitEtas = {1e-2, 1e-3, 1e-4};

struct PointResult {
    double deviation = 0;
    double raw = 0;
    double fast = 0;
    double limit = 0;
    std::string where;
};

std::string kv(const std::string &k, double v) {
    return k + "=" + format_double(v);
}

std::vector<double> phase_grid() {
    return uniform_grid(kPhasePoints);
}

double minmax_visibility(const std::vector<double> &p) {
    double hi = *std::max_element(p.begin(), p.end());
    double lo = *std::min_element(p.begin(), p.end());
    return hi + lo > 0 ? (hi - lo) / (hi + lo) : 0.0;
}

/// Oracle and fast-path probabilities of one event over the phase grid.
struct FringePair {
    std::vector<double> oracle;
    std::vector<double> fast;
};

FringePair fringe_of(const ProtocolSpec &spec, const std::string &label) {
    FringePair out;
    for (double phi : phase_grid()) {
        auto setup = build_protocol(spec, phi);
        auto state = run_circuit(setup.input, setup.circuit);
        const RelevantEvent *ev = nullptr;
        for (const auto &e : setup.events) {
            if (e.label == label) {
                ev = &e;
            }
        }
        Herald joint = ev->given;
        joint.insert(joint.end(), ev->event.begin(), ev->event.end());
        out.oracle.push_back(oracle_event_probability(state, setup.detectors, joint));
        out.fast.push_back(event_probability(state, setup.detectors, joint));
    }
    return out;
}

/// Closed-form limit checked by Richardson extrapolation over kLimitEtas.
PointResult limit_point(const std::function<ProtocolSpec(double)> &spec_at_eta, const std::string &label,
                        double expected, const std::string &where) {
    std::vector<double> vs;
    PointResult r;
    r.where = where;
    for (double eta : kLimitEtas) {
        auto f = fringe_of(spec_at_eta(eta), label);
        double vo = minmax_visibility(f.oracle);
        double vf = minmax_visibility(f.fast);
        vs.push_back(vo);
        r.fast = std::max(r.fast, std::abs(vo - vf));
        for (size_t k = 0; k < f.oracle.size(); k++) {
            r.fast = std::max(r.fast, std::abs(f.oracle[k] - f.fast[k]));
        }
    }
    double h = vs.back();
    double h10 = vs[vs.size() - 2];
    double extrapolated = h - (h10 - h) / 9;
    r.deviation = std::abs(extrapolated - expected);
    r.raw = std::abs(h - expected);
    auto limit_spec = spec_at_eta(1);
    limit_spec.loss_model = LossModel::HighLossLimit;
    r.limit = std::abs(fringe_scan(limit_spec, phase_grid()).at(label).fit.visibility - expected);
    return r;
}

double rho_deviation(const QubitDensity &a, const std::array<std::array<Amplitude, 2>, 2> &b) {
    double d = 0;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            d = std::max(d, std::abs(a.rho[i][j] - b[i][j]));
        }
    }
    return d;
}

double rho_deviation(const QubitDensity &a, const QubitDensity &b) {
    return rho_deviation(a, b.rho);
}

struct Suite {
    std::string grid;
    double threshold = 0;
    bool is_limit = false;
    std::vector<std::function<PointResult()>> points;
};

const std::vector<double> kAlphaSq5 = {0, 0.25, 0.5, 0.75, 1};
const std::vector<double> kAlphaSq9 = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

ProtocolSpec mzi_spec(double a2, double eta) {
    ProtocolSpec s;
    s.kind = ProtocolKind::CharacterizationMZI;
    s.qubit.alpha = std::sqrt(a2);
    s.etas = {{1, eta}, {2, eta}};
    return s;
}

ProtocolSpec teleport_spec(double a2, const std::array<double, 4> &etas) {
    ProtocolSpec s;
    s.kind = ProtocolKind::Teleportation;
    s.qubit.alpha = std::sqrt(a2);
    s.etas = {{1, etas[0]}, {2, etas[1]}, {3, etas[2]}, {4, etas[3]}};
    return s;
}

struct SwapCase {
    double R1;
    SwapParams p;
    double x;  // per-photon overlap, m = x * x
};

const std::vector<SwapCase> kSwapCases = {
    {0.5, {0.5, 0.5, 0.5, 0.5, 1}, 1},
    {0.5, {0.5, 0.5, 0.5, 0.5, 0.81}, 0.9},
    {0.3, {0.4, 0.6, 0.45, 0.35, 1}, 1},
    {0.3, {0.4, 0.6, 0.45, 0.35, 0.64}, 0.8},
    {0.5, {0.2, 0.7, 0.56, 0.62, 1}, 1},
    {0.65, {0.44, 0.52, 0.44, 0.38, 0.9025}, 0.95},
};

ProtocolSpec swap_spec(const SwapCase &c) {
    ProtocolSpec s;
    s.kind = ProtocolKind::Swapping;
    s.noise.x_a = c.x;
    s.noise.x_b = c.x;
    s.transmittances = {{"BS1", 1 - c.R1}, {"BS2", 1 - c.p.R2}, {"BS3", 1 - c.p.R3}, {"BS4", 1 - c.p.R4},
                        {"BS5", 1 - c.p.R5}};
    return s;
}

std::string swap_where(const SwapCase &c) {
    return kv("R1", c.R1) + " " + kv("R2", c.p.R2) + " " + kv("R3", c.p.R3) + " " + kv("R4", c.p.R4) + " " +
           kv("R5", c.p.R5) + " " + kv("m", c.p.m);
}

Suite make_suite(const std::string &id) {
    Suite s;
    auto phases = phase_grid();
    if (id == "probe_P") {
        s.grid = "alpha^2 in {0,0.25,0.5,0.75,1} x eta in {0.01,0.5,1} x 16 phases";
        s.threshold = 1e-12;
        for (double a2 : kAlphaSq5) {
            for (double eta : {0.01, 0.5, 1.0}) {
                for (double phi : phases) {
                    s.points.push_back([=]() {
                        auto setup = build_protocol(mzi_spec(a2, eta), phi);
                        auto state = run_circuit(setup.input, setup.circuit);
                        double po = oracle_event_probability(state, setup.detectors, {click(0)});
                        double pf = event_probability(state, setup.detectors, {click(0)});
                        PointResult r;
                        r.deviation = std::abs(po - probe_click_probability(std::sqrt(a2), eta, phi));
                        r.fast = std::abs(po - pf);
                        r.where = kv("alpha_sq", a2) + " " + kv("eta", eta) + " " + kv("phi", phi);
                        return r;
                    });
                }
            }
        }
    } else if (id == "probe_V_limit") {
        s.grid = "alpha^2 in {0.1..0.9} x eta in {1e-2,1e-3,1e-4} x 16 phases";
        s.threshold = 1e-3;
        s.is_limit = true;
        for (double a2 : kAlphaSq9) {
            s.points.push_back([=]() {
                return limit_point([=](double eta) { return mzi_spec(a2, eta); }, "D1", a2, kv("alpha_sq", a2));
            });
        }
    } else if (id == "teleport_P4") {
        s.grid = "alpha^2 in {0,0.25,0.5,0.75,1} x 3 efficiency sets x 16 phases x 4 pairs";
        s.threshold = 1e-12;
        const std::vector<std::array<double, 4>> eta_sets = {{1, 1, 1, 1}, {0.3, 0.7, 0.5, 0.9}, {0.05, 0.2, 0.6, 0.4}};
        for (double a2 : kAlphaSq5) {
            for (const auto &etas : eta_sets) {
                for (double phi : phases) {
                    s.points.push_back([=]() {
                        auto spec = teleport_spec(a2, etas);
                        auto setup = build_protocol(spec, phi);
                        auto state = run_circuit(setup.input, setup.circuit);
                        PointResult r;
                        for (auto pair : kTeleportPairs) {
                            int bob = (pair == TeleportPair::P12 || pair == TeleportPair::P14) ? 1 : 3;
                            int alice = (pair == TeleportPair::P12 || pair == TeleportPair::P32) ? 2 : 4;
                            Herald ev = {click(alice == 2 ? tele::kA2 : tele::kA4), click(bob == 1 ? tele::kB1 : tele::kB3)};
                            double po = oracle_event_probability(state, setup.detectors, ev);
                            double pf = event_probability(state, setup.detectors, ev);
                            double pa = teleport_coincidence_probability(
                                pair, std::sqrt(a2), phi, etas[bob - 1], etas[alice - 1]);
                            if (std::abs(po - pa) >= r.deviation) {
                                r.deviation = std::abs(po - pa);
                                r.where = teleport_pair_name(pair) + " " + kv("alpha_sq", a2) + " " +
                                          kv("eta_i", etas[bob - 1]) + " " + kv("eta_j", etas[alice - 1]) + " " +
                                          kv("delta", phi);
                            }
                            r.fast = std::max(r.fast, std::abs(po - pf));
                        }
                        return r;
                    });
                }
            }
        }
    } else if (id == "teleport_VT_threshold") {
        s.grid = "alpha^2 in {0.1..0.9} x eta in {1e-2,1e-3,1e-4} x 16 phases";
        s.threshold = 1e-3;
        s.is_limit = true;
        for (double a2 : kAlphaSq9) {
            s.points.push_back([=]() {
                return limit_point(
                    [=](double eta) { return teleport_spec(a2, {eta, eta, eta, eta}); }, "P12", 2 * a2 / (3 - a2),
                    kv("alpha_sq", a2));
            });
        }
    } else if (id == "swap_P4") {
        s.grid = "6 reflectivity/indistinguishability sets x 16 phases x 4 pairs";
        s.threshold = 1e-12;
        for (const auto &c : kSwapCases) {
            for (double phi : phases) {
                s.points.push_back([=]() {
                    auto setup = build_protocol(swap_spec(c), phi);
                    auto state = run_circuit(setup.input, setup.circuit);
                    PointResult r;
                    for (size_t k = 0; k < 4; k++) {
                        Herald ev = setup.events[k].event;
                        double po = oracle_event_probability(state, setup.detectors, ev);
                        double pf = event_probability(state, setup.detectors, ev);
                        double pa = swap_coincidence_probability(kSwapPairs[k], 1, c.p, c.R1, phi);
                        if (std::abs(po - pa) >= r.deviation) {
                            r.deviation = std::abs(po - pa);
                            r.where = swap_pair_name(kSwapPairs[k]) + " " + swap_where(c) + " " + kv("xi", phi);
                        }
                        r.fast = std::max(r.fast, std::abs(po - pf));
                    }
                    return r;
                });
            }
        }
    } else if (id == "swap_V4") {
        s.grid = "6 reflectivity/indistinguishability sets x 16 phases";
        s.threshold = 1e-10;
        for (const auto &c : kSwapCases) {
            s.points.push_back([=]() {
                auto expected = swap_visibilities(c.p);
                PointResult r;
                r.where = swap_where(c);
                for (size_t k = 0; k < 4; k++) {
                    auto f = fringe_of(swap_spec(c), swap_pair_name(kSwapPairs[k]));
                    double vo = minmax_visibility(f.oracle);
                    r.deviation = std::max(r.deviation, std::abs(vo - expected[k]));
                    r.fast = std::max(r.fast, std::abs(vo - minmax_visibility(f.fast)));
                }
                return r;
            });
        }
    } else if (id == "rho_T_ideal" || id == "rho_T_nonideal") {
        bool ideal = id == "rho_T_ideal";
        s.grid = "alpha^2 in {0,0.25,0.5,0.75,1} x delta in {0,1,2.5}";
        s.threshold = 1e-12;
        for (double a2 : kAlphaSq5) {
            for (double delta : {0.0, 1.0, 2.5}) {
                s.points.push_back([=]() {
                    ProtocolSpec spec;
                    spec.kind = ProtocolKind::Teleportation;
                    spec.qubit = {std::sqrt(a2), delta};
                    Herald herald;
                    if (ideal) {
                        spec.routing = Routing::Deterministic;
                        spec.detector_kind = DetectorKind::PhotonNumberResolving;
                        herald = {exactly(0, 1), exactly(1, 0)};
                    } else {
                        herald = {click(0)};
                    }
                    auto setup = build_protocol(spec, 0, Stage::AliceStage);
                    auto state = run_circuit(setup.input, setup.circuit);
                    ModeLabel keep{1, 1, 0};
                    auto ro = oracle_condition(state, setup.detectors, herald, keep);
                    auto rf = condition(state, setup.detectors, herald, keep);
                    double a = std::sqrt(a2);
                    Amplitude g = std::polar(std::sqrt(1 - a2), delta);
                    std::array<std::array<Amplitude, 2>, 2> expected;
                    if (ideal) {
                        expected = {{{a * a, a * std::conj(g)}, {a * g, std::norm(g)}}};
                    } else {
                        double n = a2 + 1.5 * std::norm(g);
                        expected = {{{(a2 + std::norm(g)) / n, a * std::conj(g) / std::sqrt(2.0) / n},
                                     {a * g / std::sqrt(2.0) / n, std::norm(g) / 2 / n}}};
                    }
                    PointResult r;
                    r.deviation = rho_deviation(ro.state, expected);
                    r.fast = std::max(rho_deviation(ro.state, rf.state), std::abs(ro.probability - rf.probability));
                    r.where = kv("alpha_sq", a2) + " " + kv("delta", delta);
                    return r;
                });
            }
        }
    } else if (id == "bell_mzi_cos2") {
        s.grid = "16 phases";
        s.threshold = 1e-12;
        for (double phi : phases) {
            s.points.push_back([=]() {
                ProtocolSpec spec;
                spec.kind = ProtocolKind::BellStateMZI;
                auto setup = build_protocol(spec, phi);
                auto state = run_circuit(setup.input, setup.circuit);
                double po = oracle_event_probability(state, setup.detectors, {click(0)});
                double pf = event_probability(state, setup.detectors, {click(0)});
                double c = std::cos(phi / 2);
                PointResult r;
                r.deviation = std::abs(po - c * c);
                r.fast = std::abs(po - pf);
                r.where = kv("phi", phi);
                return r;
            });
        }
    } else {
        throw ConfigError("unknown formula id '" + id + "'");
    }
    return s;
}

}  // namespace

std::vector<std::string> registered_formulas() {
    return {"probe_P", "probe_V_limit", "teleport_P4", "teleport_VT_threshold", "swap_P4",
            "swap_V4", "rho_T_ideal",   "rho_T_nonideal", "bell_mzi_cos2"};
}

OracleReport verify_formula(const std::string &id, int workers) {
    auto suite = make_suite(id);
    std::vector<PointResult> results(suite.points.size());
    parallel_for(suite.points.size(), workers, [&](size_t k) {
        results[k] = suite.points[k]();
    });
    OracleReport rep;
    rep.id = id;
    rep.grid = suite.grid;
    rep.points = (int)results.size();
    rep.threshold = suite.threshold;
    rep.is_limit = suite.is_limit;
    for (const auto &r : results) {
        if (rep.worst_point.empty() || r.deviation > rep.max_abs_deviation) {
            rep.max_abs_deviation = r.deviation;
            rep.worst_point = r.where;
        }
        rep.raw_deviation = std::max(rep.raw_deviation, r.raw);
        rep.fast_path_deviation = std::max(rep.fast_path_deviation, r.fast);
        rep.limit_path_deviation = std::max(rep.limit_path_deviation, r.limit);
    }
    rep.passed = rep.max_abs_deviation < rep.threshold && rep.fast_path_deviation < rep.fast_path_threshold;
    if (rep.is_limit) {
        rep.passed = rep.passed && rep.raw_deviation < rep.threshold && rep.limit_path_deviation < 1e-9;
    }
    return rep;
}

std::string report_table(const std::vector<OracleReport> &reports) {
    std::string out = "id                     points  max_abs_deviation        threshold                fast_path_deviation      "
                      "status  worst_point\n";
    for (const auto &r : reports) {
        auto pad = [](std::string s, size_t w) {
            if (s.size() < w) {
                s.append(w - s.size(), ' ');
            }
            return s;
        };
        out += pad(r.id, 23) + pad(std::to_string(r.points), 8) + pad(format_double(r.max_abs_deviation), 25) +
               pad(format_double(r.threshold), 25) + pad(format_double(r.fast_path_deviation), 25) +
               pad(r.passed ? "PASS" : "FAIL", 8) + r.worst_point + "\n";
        if (r.is_limit) {
            out += "    eta=1e-4 deviation " + format_double(r.raw_deviation) + ", symbolic limit path deviation " +
                   format_double(r.limit_path_deviation) + "\n";
        }
    }
    return out;
}

}  // namespace railsim
