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

#include <algorithm>
#include <set>

#include "railsim/errors.h"
#include "railsim/parallel.h"
#include "railsim/text.h"

namespace railsim {

namespace {

constexpr double kTwoPi = 2 * M_PI;

void check_spec(const ProtocolSpec &spec) {
    auto unit = [](double v, const std::string &name) {
        if (!(v >= 0 && v <= 1)) {
            throw DomainError(name + " must lie in [0,1], got " + format_double(v));
        }
    };
    unit(spec.qubit.alpha, "alpha");
    unit(spec.noise.lambda, "lambda");
    unit(spec.noise.x_a, "x_a");
    unit(spec.noise.x_b, "x_b");
    auto ids = beam_splitter_ids(spec.kind);
    for (const auto &[id, t] : spec.transmittances) {
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
            throw ConfigError("unknown beam splitter '" + id + "' for " + protocol_name(spec.kind));
        }
        unit(t, "transmittance of " + id);
    }
    int ports = (spec.kind == ProtocolKind::CharacterizationMZI || spec.kind == ProtocolKind::BellStateMZI) ? 2 : 4;
    for (const auto &[port, eta] : spec.etas) {
        if (port < 1 || port > ports) {
            throw ConfigError("no detector on port " + std::to_string(port) + " for " + protocol_name(spec.kind));
        }
        unit(eta, "efficiency of port " + std::to_string(port));
    }
}

double transmittance(const ProtocolSpec &spec, const std::string &id) {
    auto it = spec.transmittances.find(id);
    return it == spec.transmittances.end() ? 0.5 : it->second;
}

double port_eta(const ProtocolSpec &spec, int port) {
    auto it = spec.etas.find(port);
    return it == spec.etas.end() ? 1.0 : it->second;
}

DetectorSpec detector(const ProtocolSpec &spec, int port, int bin) {
    return DetectorSpec{ModeLabel{port, bin, 0}, port_eta(spec, port), spec.detector_kind, true};
}

Ensemble source(const ProtocolSpec &spec, double x, const ModeLabel &mode, int fict) {
    auto pure = make_distinguishable_qubit(spec.qubit.alpha, spec.qubit.delta, x, mode, fict);
    return apply_purity(pure, spec.noise.lambda, spec.qubit.alpha);
}

PureState photon(double x, const ModeLabel &mode, int fict) {
    return make_distinguishable_qubit(0, 0, x, mode, fict);
}

BeamSplitter bs(const ProtocolSpec &spec, const std::string &id, int a, int b) {
    return BeamSplitter{a, b, transmittance(spec, id), +1, std::nullopt};
}

ProtocolSetup build_mzi(const ProtocolSpec &spec, double phase) {
    ProtocolSetup out{source(spec, spec.noise.x_a, {1, 0, 0}, 1).tensor(source(spec, spec.noise.x_b, {2, 0, 0}, 2)),
                      {PhaseShift{2, phase, std::nullopt}, bs(spec, "BS", 1, 2)},
                      {detector(spec, 1, 0), detector(spec, 2, 0)},
                      {}};
    out.events = {{"D1", {click(0)}, {}}, {"D2", {click(1)}, {}}};
    return out;
}

ProtocolSetup build_bell_mzi(const ProtocolSpec &spec, double phase) {
    ProtocolSetup out{Ensemble(photon(1, {1, 0, 0}, 1)),
                      {bs(spec, "BS1", 1, 2), PhaseShift{2, phase, std::nullopt}, bs(spec, "BS2", 1, 2)},
                      {detector(spec, 1, 0), detector(spec, 2, 0)},
                      {}};
    out.events = {{"D1", {click(0)}, {}}, {"D2", {click(1)}, {}}};
    return out;
}

ProtocolSetup build_teleport(const ProtocolSpec &spec, double phase, Stage stage) {
    bool det = spec.routing == Routing::Deterministic;
    Ensemble input = source(spec, spec.noise.x_a, {det ? 4 : 3, 0, 0}, 1);
    input = input.tensor(Ensemble(photon(1, {1, 1, 0}, 3)));
    if (stage == Stage::Full) {
        input = input.tensor(source(spec, spec.noise.x_b, {3, 2, 0}, 2));
    }
    Circuit c;
    c.push_back(bs(spec, "BS12", 1, 2));
    if (!det) {
        c.push_back(bs(spec, "BS34", 3, 4));
    }
    c.push_back(Delay{4, 1});
    c.push_back(bs(spec, "BS24", 2, 4));
    if (stage == Stage::Full) {
        c.push_back(Delay{1, 1});
        c.push_back(PhaseShift{1, phase, std::nullopt});
        c.push_back(bs(spec, "BS13", 3, 1));
    }

    std::vector<DetectorSpec> dets = {
        detector(spec, 2, 1), detector(spec, 4, 1), detector(spec, 1, 2), detector(spec, 3, 2),
        detector(spec, 1, 0), detector(spec, 3, 0), detector(spec, 2, 3), detector(spec, 4, 3),
    };
    if (spec.lossless_herald) {
        for (int k : {tele::kA2, tele::kA4}) {
            dets[k].efficiency = 1;
            dets[k].scales_with_loss = false;
        }
    }
    if (stage == Stage::AliceStage) {
        // Bob's photon stays in (1, bin 1); only Alice's side is detected.
        dets = {dets[tele::kA2], dets[tele::kA4]};
        return {std::move(input), std::move(c), std::move(dets), {}};
    }
    ProtocolSetup out{std::move(input), std::move(c), std::move(dets), {}};
    for (int bob : {1, 3}) {
        for (int alice : {2, 4}) {
            out.events.push_back({"P" + std::to_string(bob) + std::to_string(alice),
                                  {click(bob == 1 ? tele::kB1 : tele::kB3)},
                                  alice_herald(spec, alice)});
        }
    }
    return out;
}

ProtocolSetup build_swap(const ProtocolSpec &spec, double phase) {
    Ensemble input = Ensemble(photon(spec.noise.x_a, {1, 1, 0}, 1)).tensor(Ensemble(photon(spec.noise.x_b, {1, 0, 0}, 2)));
    Circuit c = {
        bs(spec, "BS1", 1, 2), bs(spec, "BS2", 1, 4), bs(spec, "BS3", 2, 3),
        Delay{1, 1}, Delay{2, 1},
        PhaseShift{4, phase, std::nullopt},
        bs(spec, "BS4", 4, 1), bs(spec, "BS5", 2, 3),
    };
    std::vector<DetectorSpec> dets = {detector(spec, 1, 1), detector(spec, 2, 1), detector(spec, 3, 1), detector(spec, 4, 1)};
    ProtocolSetup out{std::move(input), std::move(c), std::move(dets), {}};
    out.events = {
        {"CC12", {click(0), click(1)}, {}},
        {"CC13", {click(0), click(2)}, {}},
        {"CC42", {click(3), click(1)}, {}},
        {"CC43", {click(3), click(2)}, {}},
    };
    return out;
}

}  // namespace

ProtocolSpec ideal_teleportation(double alpha) {
    ProtocolSpec s;
    s.kind = ProtocolKind::Teleportation;
    s.qubit.alpha = alpha;
    s.routing = Routing::Deterministic;
    s.detector_kind = DetectorKind::PhotonNumberResolving;
    s.loss_model = LossModel::HighLossLimit;
    s.lossless_herald = true;
    return s;
}

ProtocolSpec threshold_teleportation(double alpha) {
    ProtocolSpec s;
    s.kind = ProtocolKind::Teleportation;
    s.qubit.alpha = alpha;
    s.routing = Routing::Probabilistic;
    s.detector_kind = DetectorKind::Threshold;
    s.loss_model = LossModel::HighLossLimit;
    return s;
}

std::vector<std::string> beam_splitter_ids(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::CharacterizationMZI:
            return {"BS"};
        case ProtocolKind::BellStateMZI:
            return {"BS1", "BS2"};
        case ProtocolKind::Teleportation:
            return {"BS12", "BS34", "BS24", "BS13"};
        case ProtocolKind::Swapping:
            return {"BS1", "BS2", "BS3", "BS4", "BS5"};
    }
    return {};
}

std::string protocol_name(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::CharacterizationMZI:
            return "characterization-mzi";
        case ProtocolKind::BellStateMZI:
            return "bell-state-mzi";
        case ProtocolKind::Teleportation:
            return "teleportation";
        case ProtocolKind::Swapping:
            return "swapping";
    }
    return "?";
}

ProtocolSetup build_protocol(const ProtocolSpec &spec, double phase, Stage stage) {
    check_spec(spec);
    if (stage == Stage::AliceStage && spec.kind != ProtocolKind::Teleportation) {
        throw ConfigError("the Alice stage exists only for teleportation");
    }
    switch (spec.kind) {
        case ProtocolKind::CharacterizationMZI:
            return build_mzi(spec, phase);
        case ProtocolKind::BellStateMZI:
            return build_bell_mzi(spec, phase);
        case ProtocolKind::Teleportation:
            return build_teleport(spec, phase, stage);
        case ProtocolKind::Swapping:
            return build_swap(spec, phase);
    }
    throw ConfigError("unknown protocol kind");
}

Herald alice_herald(const ProtocolSpec &spec, int port) {
    if (port != 2 && port != 4) {
        throw ConfigError("Alice detectors sit on ports 2 and 4");
    }
    int mine = port == 2 ? tele::kA2 : tele::kA4;
    int other = port == 2 ? tele::kA4 : tele::kA2;
    if (spec.detector_kind == DetectorKind::Threshold) {
        return {click(mine)};
    }
    return {exactly(mine, 1), exactly(other, 0)};
}

Herald success_herald(const ProtocolSpec &spec, int port) {
    if (port != 2 && port != 4) {
        throw ConfigError("Alice detectors sit on ports 2 and 4");
    }
    int mine = port == 2 ? tele::kA2 : tele::kA4;
    int other = port == 2 ? tele::kA4 : tele::kA2;
    Herald h = {exactly(mine, 1), exactly(other, 0)};
    if (spec.routing == Routing::Probabilistic) {
        for (int d : {tele::kInput1, tele::kInput3, tele::kProbe2, tele::kProbe4}) {
            h.push_back(exactly(d, 0));
        }
    }
    return h;
}

double success_probability(const ProtocolSpec &spec, int port) {
    auto herald = success_herald(spec, port);
    auto setup = build_protocol(spec, 0.0, Stage::Full);
    return heralding_probability(run_circuit(setup.input, setup.circuit), setup.detectors, herald);
}

EventValue evaluate_event(const Ensemble &output, const std::vector<DetectorSpec> &detectors,
                          const RelevantEvent &event, LossModel loss) {
    Herald joint = event.given;
    joint.insert(joint.end(), event.event.begin(), event.event.end());
    if (loss == LossModel::Exact) {
        double pj = event_probability(output, detectors, joint);
        if (event.given.empty()) {
            return {pj, 0};
        }
        double pg = event_probability(output, detectors, event.given);
        return {pg < 1e-15 ? 0.0 : pj / pg, 0};
    }
    auto lj = event_leading_order(output, detectors, joint);
    if (event.given.empty()) {
        return {lj.coefficient, lj.order};
    }
    auto lg = event_leading_order(output, detectors, event.given);
    if (lg.coefficient == 0 || lj.coefficient == 0) {
        return {0, 0};
    }
    return {lj.coefficient / lg.coefficient, lj.order - lg.order};
}

FringeFit fringe_visibility(const std::vector<double> &grid, const std::vector<double> &values) {
    if (grid.size() != values.size() || grid.size() < 3) {
        throw ConfigError("fringe needs at least three matching samples");
    }
    FringeFit out;
    double vmax = *std::max_element(values.begin(), values.end());
    double vmin = *std::min_element(values.begin(), values.end());
    double sum = 0;
    for (double v : values) {
        sum += v;
    }
    out.mean = sum / values.size();
    if (vmax <= 0) {
        return out;
    }

    // Normal equations for a + b cos + c sin.
    double m[3][4] = {};
    for (size_t k = 0; k < grid.size(); k++) {
        double f[3] = {1, std::cos(grid[k]), std::sin(grid[k])};
        for (int i = 0; i < 3; i++) {
            for (int j = 0; j < 3; j++) {
                m[i][j] += f[i] * f[j];
            }
            m[i][3] += f[i] * values[k];
        }
    }
    bool solved = true;
    for (int col = 0; col < 3 && solved; col++) {
        int piv = col;
        for (int r = col + 1; r < 3; r++) {
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) {
                piv = r;
            }
        }
        if (std::abs(m[piv][col]) < 1e-12) {
            solved = false;
            break;
        }
        std::swap(m[piv], m[col]);
        for (int r = 0; r < 3; r++) {
            if (r != col) {
                double f = m[r][col] / m[col][col];
                for (int j = col; j < 4; j++) {
                    m[r][j] -= f * m[col][j];
                }
            }
        }
    }
    if (solved) {
        double a = m[0][3] / m[0][0];
        double b = m[1][3] / m[1][1];
        double c = m[2][3] / m[2][2];
        double ss = 0;
        for (size_t k = 0; k < grid.size(); k++) {
            double r = values[k] - (a + b * std::cos(grid[k]) + c * std::sin(grid[k]));
            ss += r * r;
        }
        double rel = std::sqrt(ss / grid.size()) / vmax;
        if (rel <= 1e-6 && a > 0) {
            out.used_fit = true;
            out.visibility = std::clamp(std::hypot(b, c) / a, 0.0, 1.0);
            double ph = std::atan2(c, b);
            out.phase_of_max = ph < 0 ? ph + kTwoPi : ph;
            return out;
        }
    }
    out.visibility = std::clamp((vmax - vmin) / (vmax + vmin), 0.0, 1.0);
    out.phase_of_max = grid[std::max_element(values.begin(), values.end()) - values.begin()];
    return out;
}

const HeraldFringe &FringeScanResult::at(const std::string &label) const {
    for (const auto &h : heralds) {
        if (h.herald == label) {
            return h;
        }
    }
    throw ConfigError("no herald named '" + label + "'");
}

std::string FringeScanResult::to_csv() const {
    std::string out = "herald,phase,probability\n";
    for (const auto &h : heralds) {
        for (size_t k = 0; k < grid.size(); k++) {
            out += h.herald + ',' + format_double(grid[k]) + ',' + format_double(h.values[k]) + '\n';
        }
    }
    return out;
}

std::string FringeScanResult::summary() const {
    std::string out = "{\n";
    for (const auto &h : heralds) {
        out += "  " + h.herald + " -> " + format_double(h.fit.visibility) + "\n";
    }
    out += "}\n";
    return out;
}

std::vector<double> uniform_grid(int points) {
    if (points < 1) {
        throw ConfigError("grid needs at least one point");
    }
    std::vector<double> g(points);
    for (int k = 0; k < points; k++) {
        g[k] = kTwoPi * k / points;
    }
    return g;
}

namespace {

void check_grid(const std::vector<double> &grid) {
    if (grid.size() < 8) {
        throw ConfigError("phase grid needs at least 8 points");
    }
    std::vector<double> g = grid;
    for (double p : g) {
        if (!(p >= 0 && p < kTwoPi)) {
            throw ConfigError("phase grid points must lie in [0, 2pi)");
        }
    }
    std::sort(g.begin(), g.end());
    double gap = g.front() + kTwoPi - g.back();
    for (size_t k = 1; k < g.size(); k++) {
        gap = std::max(gap, g[k] - g[k - 1]);
    }
    if (gap > M_PI / 2 + 1e-12) {
        throw ConfigError("phase grid does not cover [0, 2pi)");
    }
}

}  // namespace

FringeScanResult fringe_scan(const ProtocolSpec &spec, const std::vector<double> &grid, int workers) {
    check_grid(grid);
    auto labels = build_protocol(spec, 0).events;
    std::vector<std::vector<EventValue>> raw(grid.size());
    parallel_for(grid.size(), workers, [&](size_t k) {
        auto setup = build_protocol(spec, grid[k]);
        auto out = run_circuit(setup.input, setup.circuit);
        for (const auto &ev : setup.events) {
            raw[k].push_back(evaluate_event(out, setup.detectors, ev, spec.loss_model));
        }
    });

    FringeScanResult res;
    res.grid = grid;
    bool any = false;
    for (size_t e = 0; e < labels.size(); e++) {
        HeraldFringe h;
        h.herald = labels[e].label;
        int order = INT_MAX;
        for (size_t k = 0; k < grid.size(); k++) {
            if (raw[k][e].value > 0) {
                order = std::min(order, raw[k][e].order);
            }
        }
        h.order = order == INT_MAX ? 0 : order;
        for (size_t k = 0; k < grid.size(); k++) {
            h.values.push_back(raw[k][e].order == h.order ? raw[k][e].value : 0.0);
        }
        h.fit = fringe_visibility(grid, h.values);
        any = any || std::any_of(h.values.begin(), h.values.end(), [](double v) {
                  return v > 0;
              });
        res.heralds.push_back(std::move(h));
    }
    if (!any) {
        throw NoSignal("every probability of the scan is zero");
    }
    return res;
}

ConditioningContrast conditioning_contrast(const ProtocolSpec &spec, const std::vector<double> &grid, int workers) {
    if (spec.kind != ProtocolKind::Teleportation) {
        throw ConfigError("conditioning contrast applies to teleportation");
    }
    check_grid(grid);
    std::vector<EventValue> cond(grid.size()), uncond(grid.size());
    parallel_for(grid.size(), workers, [&](size_t k) {
        auto setup = build_protocol(spec, grid[k]);
        auto out = run_circuit(setup.input, setup.circuit);
        cond[k] = evaluate_event(out, setup.detectors, setup.events[0], spec.loss_model);
        uncond[k] = evaluate_event(out, setup.detectors, {"B1", {click(tele::kB1)}, {}}, spec.loss_model);
    });
    auto visibility = [&](const std::vector<EventValue> &vals) {
        int order = INT_MAX;
        for (const auto &v : vals) {
            if (v.value > 0) {
                order = std::min(order, v.order);
            }
        }
        std::vector<double> ys;
        for (const auto &v : vals) {
            ys.push_back(v.order == order ? v.value : 0.0);
        }
        if (order == INT_MAX) {
            throw NoSignal("every probability of the scan is zero");
        }
        return fringe_visibility(grid, ys).visibility;
    };
    double u = visibility(uncond);
    double c = 0;
    try {
        c = visibility(cond);
    } catch (const NoSignal &) {
        c = 0;
    }
    return {c, u};
}

}  // namespace railsim
