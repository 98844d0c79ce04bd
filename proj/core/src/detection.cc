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

#include "railsim/detection.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "railsim/errors.h"
#include "railsim/text.h"

namespace railsim {

namespace {

double binom_pmf(int n, int m, double eta) {
    if (m < 0 || m > n) {
        return 0;
    }
    double c = 1;
    for (int k = 1; k <= m; k++) {
        c = c * (n - m + k) / k;
    }
    return c * std::pow(eta, m) * std::pow(1 - eta, n - m);
}

double binom_coeff(int n, int m) {
    double c = 1;
    for (int k = 1; k <= m; k++) {
        c = c * (n - m + k) / k;
    }
    return c;
}

/// Photon count seen by each detector, internal labels summed.
std::vector<int> detector_counts(const FockBasisState &basis, const std::vector<DetectorSpec> &detectors) {
    std::vector<int> counts(detectors.size(), 0);
    for (const auto &[m, n] : basis.occupations()) {
        for (size_t d = 0; d < detectors.size(); d++) {
            if (detectors[d].mode.spatial == m.spatial && detectors[d].mode.time_bin == m.time_bin) {
                counts[d] += n;
            }
        }
    }
    return counts;
}

/// Probability that a detector receiving n photons reports an outcome in [lo, hi].
double range_probability(const DetectorSpec &det, int n, int lo, int hi) {
    if (det.kind == DetectorKind::Threshold) {
        double p0 = std::pow(1 - det.efficiency, n);
        double p = 0;
        if (lo <= 0 && hi >= 0) {
            p += p0;
        }
        if (lo <= 1 && hi >= 1) {
            p += 1 - p0;
        }
        return p;
    }
    double p = 0;
    for (int m = std::max(lo, 0); m <= std::min(hi, n); m++) {
        p += binom_pmf(n, m, det.efficiency);
    }
    return p;
}

LeadingOrder range_leading_order(const DetectorSpec &det, int n, int lo, int hi) {
    if (!det.scales_with_loss) {
        return {0, range_probability(det, n, lo, hi)};
    }
    int top = det.kind == DetectorKind::Threshold ? std::min(n, 1) : n;
    int m0 = std::max(lo, 0);
    if (m0 > top || m0 > hi) {
        return {0, 0};
    }
    if (m0 == 0) {
        return {0, 1};
    }
    if (det.kind == DetectorKind::Threshold) {
        // click: 1 - (1 - eps eta)^n ~ n eta eps
        return {1, n * det.efficiency};
    }
    return {m0, binom_coeff(n, m0) * std::pow(det.efficiency, m0)};
}

double herald_factor(const std::vector<DetectorSpec> &dets, const std::vector<int> &counts, const Herald &h) {
    double p = 1;
    for (const auto &c : h) {
        p *= range_probability(dets[c.detector], counts[c.detector], c.min, c.max);
        if (p == 0) {
            break;
        }
    }
    return p;
}

LeadingOrder herald_leading(const std::vector<DetectorSpec> &dets, const std::vector<int> &counts, const Herald &h) {
    LeadingOrder out{0, 1};
    for (const auto &c : h) {
        auto lo = range_leading_order(dets[c.detector], counts[c.detector], c.min, c.max);
        out.order += lo.order;
        out.coefficient *= lo.coefficient;
        if (out.coefficient == 0) {
            return {0, 0};
        }
    }
    return out;
}

}  // namespace

CountRange click(int detector) {
    return {detector, 1, INT_MAX};
}
CountRange no_click(int detector) {
    return {detector, 0, 0};
}
CountRange exactly(int detector, int count) {
    return {detector, count, count};
}
CountRange at_least(int detector, int count) {
    return {detector, count, INT_MAX};
}

void validate_detectors(const std::vector<DetectorSpec> &detectors) {
    std::set<std::pair<int, int>> seen;
    for (const auto &d : detectors) {
        if (!(d.efficiency >= 0 && d.efficiency <= 1)) {
            throw DomainError("detector efficiency must lie in [0,1], got " + format_double(d.efficiency));
        }
        if (!seen.insert({d.mode.spatial, d.mode.time_bin}).second) {
            throw ConfigError(
                "duplicate detector on mode (" + std::to_string(d.mode.spatial) + "," +
                std::to_string(d.mode.time_bin) + ")");
        }
    }
}

void validate_herald(const std::vector<DetectorSpec> &detectors, const Herald &herald) {
    std::set<int> seen;
    for (const auto &c : herald) {
        if (c.detector < 0 || c.detector >= (int)detectors.size()) {
            throw ConfigError("herald references unknown detector " + std::to_string(c.detector));
        }
        if (!seen.insert(c.detector).second) {
            throw ConfigError("herald lists detector " + std::to_string(c.detector) + " twice");
        }
        if (c.min > c.max) {
            throw ConfigError("empty herald range on detector " + std::to_string(c.detector));
        }
    }
}

OutcomeDistribution::OutcomeDistribution(std::vector<DetectorSpec> detectors, std::map<DetectionPattern, double> probs)
    : detectors_(std::move(detectors)), probs_(std::move(probs)) {
}

double OutcomeDistribution::probability(const DetectionPattern &pattern) const {
    auto it = probs_.find(pattern);
    return it == probs_.end() ? 0 : it->second;
}

double OutcomeDistribution::total() const {
    double s = 0;
    for (const auto &e : probs_) {
        s += e.second;
    }
    return s;
}

std::string OutcomeDistribution::pattern_key(const DetectionPattern &pattern) const {
    std::string out;
    for (size_t d = 0; d < pattern.size(); d++) {
        if (d) {
            out += ';';
        }
        out += 'd' + std::to_string(d) + '=';
        if (detectors_[d].kind == DetectorKind::Threshold) {
            out += pattern[d] ? "click" : "0";
        } else {
            out += std::to_string(pattern[d]);
        }
    }
    return out;
}

std::string OutcomeDistribution::to_csv() const {
    std::string out = "pattern,probability\n";
    for (const auto &[pat, p] : probs_) {
        out += pattern_key(pat);
        out += ',';
        out += format_double(p);
        out += '\n';
    }
    return out;
}

OutcomeDistribution outcome_distribution(const Ensemble &state, const std::vector<DetectorSpec> &detectors) {
    validate_detectors(detectors);
    std::map<DetectionPattern, double> probs;
    for (const auto &comp : state.components()) {
        for (const auto &[basis, amp] : comp.state.terms()) {
            double w = comp.weight * std::norm(amp);
            auto counts = detector_counts(basis, detectors);
            std::vector<std::pair<DetectionPattern, double>> partial{{{}, w}};
            for (size_t d = 0; d < detectors.size(); d++) {
                const auto &det = detectors[d];
                int n = counts[d];
                std::vector<std::pair<int, double>> outcomes;
                if (det.kind == DetectorKind::Threshold) {
                    double p0 = std::pow(1 - det.efficiency, n);
                    outcomes = {{0, p0}, {1, 1 - p0}};
                } else {
                    for (int m = 0; m <= n; m++) {
                        outcomes.emplace_back(m, binom_pmf(n, m, det.efficiency));
                    }
                }
                std::vector<std::pair<DetectionPattern, double>> next;
                for (const auto &[pat, p] : partial) {
                    for (const auto &[o, q] : outcomes) {
                        if (q == 0) {
                            continue;
                        }
                        auto np = pat;
                        np.push_back(o);
                        next.emplace_back(std::move(np), p * q);
                    }
                }
                partial = std::move(next);
            }
            for (auto &[pat, p] : partial) {
                probs[pat] += p;
            }
        }
    }
    return OutcomeDistribution(detectors, std::move(probs));
}

double event_probability(const Ensemble &state, const std::vector<DetectorSpec> &detectors, const Herald &event) {
    validate_detectors(detectors);
    validate_herald(detectors, event);
    double total = 0;
    for (const auto &comp : state.components()) {
        double s = 0;
        for (const auto &[basis, amp] : comp.state.terms()) {
            s += std::norm(amp) * herald_factor(detectors, detector_counts(basis, detectors), event);
        }
        total += comp.weight * s;
    }
    return total;
}

double heralding_probability(const Ensemble &state, const std::vector<DetectorSpec> &detectors, const Herald &herald) {
    return event_probability(state, detectors, herald);
}

LeadingOrder event_leading_order(const Ensemble &state, const std::vector<DetectorSpec> &detectors, const Herald &event) {
    validate_detectors(detectors);
    validate_herald(detectors, event);
    std::map<int, double> by_order;
    for (const auto &comp : state.components()) {
        for (const auto &[basis, amp] : comp.state.terms()) {
            auto lo = herald_leading(detectors, detector_counts(basis, detectors), event);
            if (lo.coefficient != 0) {
                by_order[lo.order] += comp.weight * std::norm(amp) * lo.coefficient;
            }
        }
    }
    for (const auto &[order, c] : by_order) {
        if (c > 1e-300) {
            return {order, c};
        }
    }
    return {0, 0};
}

bool QubitDensity::is_hermitian(double tol) const {
    return std::abs(rho[0][0].imag()) <= tol && std::abs(rho[1][1].imag()) <= tol &&
           std::abs(rho[0][1] - std::conj(rho[1][0])) <= tol;
}

double QubitDensity::trace() const {
    return rho[0][0].real() + rho[1][1].real();
}

double QubitDensity::min_eigenvalue() const {
    double a = rho[0][0].real();
    double d = rho[1][1].real();
    double h = (a - d) / 2;
    return (a + d) / 2 - std::sqrt(h * h + std::norm(rho[0][1]));
}

double QubitDensity::coherence() const {
    return 2 * std::abs(rho[0][1]);
}

ConditionResult condition(
    const Ensemble &state,
    const std::vector<DetectorSpec> &detectors,
    const Herald &herald,
    const ModeLabel &keep,
    LossModel loss) {
    validate_detectors(detectors);
    validate_herald(detectors, herald);
    ModeLabel principal{keep.spatial, keep.time_bin, 0};
    for (const auto &c : herald) {
        const auto &m = detectors[c.detector].mode;
        if (m.spatial == keep.spatial && m.time_bin == keep.time_bin) {
            throw ConfigError("kept mode is watched by a herald detector");
        }
    }

    using Mat = std::array<std::array<Amplitude, 2>, 2>;
    std::map<int, Mat> by_order;
    for (const auto &comp : state.components()) {
        struct Group {
            std::array<Amplitude, 2> v{};
            bool overfull = false;
        };
        std::map<FockBasisState, Group> groups;
        for (const auto &[basis, amp] : comp.state.terms()) {
            int k = basis.occupation(principal);
            auto &g = groups[basis.with(principal, 0)];
            if (k > 1) {
                g.overfull = true;
            } else {
                g.v[k] += amp;
            }
        }
        for (const auto &[rest, g] : groups) {
            auto counts = detector_counts(rest, detectors);
            LeadingOrder w;
            if (loss == LossModel::Exact) {
                w = {0, herald_factor(detectors, counts, herald)};
            } else {
                w = herald_leading(detectors, counts, herald);
            }
            if (w.coefficient == 0) {
                continue;
            }
            if (g.overfull) {
                throw DomainError("kept mode carries more than one photon in a heralded term");
            }
            auto &m = by_order[w.order];
            for (int i = 0; i < 2; i++) {
                for (int j = 0; j < 2; j++) {
                    m[i][j] += comp.weight * w.coefficient * g.v[i] * std::conj(g.v[j]);
                }
            }
        }
    }
    for (const auto &[order, m] : by_order) {
        double p = m[0][0].real() + m[1][1].real();
        if (p < 1e-15) {
            continue;
        }
        ConditionResult out{p, order, {}};
        for (int i = 0; i < 2; i++) {
            for (int j = 0; j < 2; j++) {
                out.state.rho[i][j] = m[i][j] / p;
            }
        }
        return out;
    }
    throw ImpossibleHerald("herald probability below 1e-15");
}

}  // namespace railsim
