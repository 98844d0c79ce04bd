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

#include "railsim/analytics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "railsim/errors.h"
#include "railsim/text.h"

namespace railsim {

namespace {

void check_unit(double v, const char *name) {
    if (!(v >= 0 && v <= 1)) {
        throw DomainError(std::string(name) + " must lie in [0,1], got " + format_double(v));
    }
}

void check_open_unit(double v, const char *name) {
    if (!(v > 0 && v < 1)) {
        throw DomainError(std::string(name) + " must lie in (0,1), got " + format_double(v));
    }
}

void check_source(const SourceParams &s) {
    check_unit(s.lambda, "lambda");
    check_unit(s.v_hom_alice, "v_hom_alice");
    check_unit(s.v_hom_bob, "v_hom_bob");
}

struct SwapTerms {
    std::array<double, 4> background;
    double interference;
};

SwapTerms swap_terms(const SwapParams &p) {
    check_open_unit(p.R2, "R2");
    check_open_unit(p.R3, "R3");
    check_open_unit(p.R4, "R4");
    check_open_unit(p.R5, "R5");
    check_unit(p.m, "m");
    double T2 = 1 - p.R2, T3 = 1 - p.R3, T4 = 1 - p.R4, T5 = 1 - p.R5;
    double R2 = p.R2, R3 = p.R3, R4 = p.R4, R5 = p.R5;
    return {{
                R2 * T3 * R4 * T5 + T2 * R3 * T4 * R5,
                R2 * T3 * R4 * R5 + T2 * R3 * T4 * T5,
                R2 * T3 * T4 * T5 + T2 * R3 * R4 * R5,
                R2 * T3 * T4 * R5 + T2 * R3 * R4 * T5,
            },
            2 * p.m * std::sqrt(R2 * T2 * R3 * T3 * R4 * T4 * R5 * T5)};
}

// Channels (1,2) and (4,3) are dark at xi = 0.
double swap_sign(SwapPair pair) {
    return (pair == SwapPair::P12 || pair == SwapPair::P43) ? -1 : +1;
}

}  // namespace

std::string swap_pair_name(SwapPair pair) {
    switch (pair) {
        case SwapPair::P12:
            return "CC12";
        case SwapPair::P13:
            return "CC13";
        case SwapPair::P42:
            return "CC42";
        case SwapPair::P43:
            return "CC43";
    }
    return "?";
}

std::string teleport_pair_name(TeleportPair pair) {
    switch (pair) {
        case TeleportPair::P12:
            return "P12";
        case TeleportPair::P14:
            return "P14";
        case TeleportPair::P32:
            return "P32";
        case TeleportPair::P34:
            return "P34";
    }
    return "?";
}

double probe_click_probability(double alpha, double eta, double phi) {
    check_unit(alpha, "alpha");
    check_unit(eta, "eta");
    double a2 = alpha * alpha;
    double b2 = 1 - a2;
    return eta * b2 / 2 * (2 - b2 * eta + 2 * a2 * std::cos(phi));
}

double probe_visibility(double alpha, const SourceParams &source) {
    check_unit(alpha, "alpha");
    check_source(source);
    return source.lambda * source.lambda * std::sqrt(source.v_hom_alice) * alpha * alpha;
}

double classical_teleport_visibility(double V, double F) {
    check_unit(V, "V");
    if (!(F >= 1.0 / 3 - 1e-12 && F <= 2.0 / 3 + 1e-12)) {
        throw DomainError("F must lie in [1/3, 2/3], got " + format_double(F));
    }
    return 2 * V * (1 - V) * std::abs(2 * F - 1) / (1 + F * (1 - 2 * V));
}

double classical_bound(double V) {
    return std::max(classical_teleport_visibility(V, 1.0 / 3), classical_teleport_visibility(V, 2.0 / 3));
}

double teleported_visibility_model(double V, const SourceParams &source) {
    check_unit(V, "V");
    check_source(source);
    double l2 = source.lambda * source.lambda;
    double den = 3 * l2 * std::sqrt(source.v_hom_alice) - V;
    if (!(den > 0)) {
        throw DomainError("teleported visibility model has a non-positive denominator");
    }
    return 2 * l2 * std::sqrt(source.v_hom_alice * source.v_hom_bob) * V / den;
}

double teleport_coincidence_probability(TeleportPair pair, double alpha, double delta, double eta_i, double eta_j) {
    check_unit(alpha, "alpha");
    check_unit(eta_i, "eta_i");
    check_unit(eta_j, "eta_j");
    double a2 = alpha * alpha;
    double b2 = 1 - a2;
    double sign = (pair == TeleportPair::P12 || pair == TeleportPair::P34) ? -1 : +1;
    return b2 * eta_i * eta_j / 32 *
           (6 - eta_i - eta_j - (2 - eta_i - eta_j) * a2 + sign * 4 * a2 * std::cos(delta));
}

double swap_coincidence_probability(SwapPair pair, double beta_sq, const SwapParams &params, double R1, double xi) {
    check_unit(beta_sq, "beta_sq");
    check_unit(R1, "R1");
    auto terms = swap_terms(params);
    return beta_sq * beta_sq * R1 * (1 - R1) *
           (terms.background[(int)pair] + swap_sign(pair) * terms.interference * std::cos(xi));
}

std::array<double, 4> swap_visibilities(const SwapParams &params) {
    auto terms = swap_terms(params);
    std::array<double, 4> out;
    for (int k = 0; k < 4; k++) {
        out[k] = terms.interference / terms.background[k];
    }
    return out;
}

SwapXYZW swap_xyzw(const SwapParams &p) {
    swap_terms(p);
    double x = (1 - p.R2) * p.R3 / (p.R2 * (1 - p.R3));
    double y = (1 - p.R4) / p.R4;
    double z = (1 - p.R5) / p.R5;
    return {x, y, z, 2 * p.m * std::sqrt(x * y * z)};
}

std::array<double, 4> swap_visibilities(const SwapXYZW &p) {
    return {p.w / (p.x * p.y + p.z), p.w / (p.x * p.y * p.z + 1), p.w / (p.x + p.y * p.z), p.w / (p.y + p.x * p.z)};
}

namespace {

SwapSolution make_solution(double x, double y, double z, double w) {
    return {x, y, z, w, 1 / (1 + y), 1 / (1 + z), w / (2 * std::sqrt(x * y * z))};
}

}  // namespace

SwapInverseResult swap_inverse(double V12, double V13, double V42, double V43) {
    for (double v : {V12, V13, V42, V43}) {
        if (!(v > 0 && v <= 1)) {
            throw DomainError("swap visibilities must lie in (0,1], got " + format_double(v));
        }
    }
    SwapInverseResult out{};
    out.t1 = V12 / V13;
    out.t2 = V12 / V42;
    out.t3 = V12 / V43;
    double a = out.t1 - out.t2 * out.t3;
    if (std::abs(a) < 1e-9) {
        out.degenerate = true;
        out.primary = make_solution(1, 1, 1, 2 * V12);
        out.mirror = out.primary;
        return out;
    }
    double b = out.t1 * out.t1 - out.t2 * out.t2 - out.t3 * out.t3 + 1;
    double disc = b * b - 4 * a * a;
    if (disc < 0) {
        if (disc < -1e-12 * std::max(1.0, b * b)) {
            throw InconsistentVisibilities(
                "no real parameters reproduce these visibilities (discriminant " + format_double(disc) + ")");
        }
        disc = 0;
    }
    // The roots multiply to 1; take the large-magnitude one without cancellation.
    double q = (b + std::copysign(std::sqrt(disc), b)) / 2;
    double z1 = q / a;
    double z2 = a / q;
    double z = std::max(z1, z2);
    if (!(std::min(z1, z2) > 0) || !std::isfinite(z)) {
        throw InconsistentVisibilities("the quadratic for z has no positive root");
    }
    double x = (out.t2 - out.t3 * z) / (out.t1 - z);
    double y = (out.t3 - z * out.t2) / (out.t1 - z);
    if (!(x > 0 && y > 0 && std::isfinite(x) && std::isfinite(y))) {
        throw InconsistentVisibilities("recovered x or y is not positive");
    }
    double w = V12 * (x * y + z);
    out.primary = make_solution(x, y, z, w);
    out.mirror = make_solution(1 / x, 1 / y, 1 / z, w / (x * y * z));
    return out;
}

std::vector<SwapAssignment> swap_assignment_search(const std::array<std::pair<std::string, double>, 4> &measured) {
    std::array<int, 4> perm = {0, 1, 2, 3};
    std::vector<SwapAssignment> out;
    do {
        SwapAssignment a;
        for (int k = 0; k < 4; k++) {
            a.labels[k] = measured[perm[k]].first;
        }
        try {
            a.result = swap_inverse(
                measured[perm[0]].second, measured[perm[1]].second, measured[perm[2]].second,
                measured[perm[3]].second);
        } catch (const InconsistentVisibilities &) {
            continue;
        }
        const auto &s = a.result.primary;
        if (a.result.degenerate || !(s.v_hom > 0 && s.v_hom <= 1)) {
            continue;
        }
        out.push_back(std::move(a));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

double fidelity_from_visibility(double V) {
    check_unit(V, "V");
    return (1 + V) / 2;
}

PurityFit estimate_purity_from_scan(const std::vector<PurityPoint> &points, double v_hom) {
    if (points.size() < 2) {
        throw DomainError("purity fit needs at least two points");
    }
    if (!(v_hom > 0 && v_hom <= 1)) {
        throw DomainError("v_hom must lie in (0,1]");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto &p : points) {
        if (!(p.single_count_rate > 0)) {
            throw DomainError("single count rates must be positive");
        }
        sx += p.single_count_rate;
        sy += p.visibility;
        sxx += p.single_count_rate * p.single_count_rate;
        sxy += p.single_count_rate * p.visibility;
    }
    double n = points.size();
    double den = n * sxx - sx * sx;
    if (!(std::abs(den) > 0)) {
        throw FitError("purity fit needs at least two distinct count rates");
    }
    double slope = (n * sxy - sx * sy) / den;
    double intercept = (sy - slope * sx) / n;
    if (intercept < 0) {
        throw FitError("negative zero-rate intercept " + format_double(intercept));
    }
    return {std::sqrt(intercept / std::sqrt(v_hom)), intercept, slope};
}

std::string teleport_curve_csv(int points, const SourceParams &source) {
    if (points < 2) {
        throw DomainError("curve needs at least two points");
    }
    std::string out = "V,V_T_ideal,V_T_model,classical_bound\n";
    for (int k = 0; k < points; k++) {
        double V = (double)k / (points - 1);
        double model;
        try {
            model = teleported_visibility_model(V, source);
        } catch (const DomainError &) {
            model = std::numeric_limits<double>::quiet_NaN();
        }
        out += format_double(V) + ',' + format_double(V) + ',' + format_double(model) + ',' +
               format_double(classical_bound(V)) + '\n';
    }
    return out;
}

}  // namespace railsim
