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

#ifndef RAILSIM_ANALYTICS_H
#define RAILSIM_ANALYTICS_H

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace railsim {

struct SourceParams {
    double lambda = 1;
    double v_hom_alice = 1;
    double v_hom_bob = 1;
};

/// Swapping beam splitters by reflectivity R = 1 - T, plus the
/// two-photon indistinguishability m that scales every visibility.
struct SwapParams {
    double R2 = 0.5;
    double R3 = 0.5;
    double R4 = 0.5;
    double R5 = 0.5;
    double m = 1;
};

/// Coincidence channels, in the order (1,2), (1,3), (4,2), (4,3).
enum class SwapPair { P12, P13, P42, P43 };
constexpr std::array<SwapPair, 4> kSwapPairs = {SwapPair::P12, SwapPair::P13, SwapPair::P42, SwapPair::P43};
std::string swap_pair_name(SwapPair pair);

enum class TeleportPair { P12, P14, P32, P34 };
constexpr std::array<TeleportPair, 4> kTeleportPairs = {
    TeleportPair::P12, TeleportPair::P14, TeleportPair::P32, TeleportPair::P34};
std::string teleport_pair_name(TeleportPair pair);

/// Single-click probability on one output of the self-homodyne probe MZI.
double probe_click_probability(double alpha, double eta, double phi);
/// Probe fringe visibility lambda^2 sqrt(V_HOM^A) alpha^2.
double probe_visibility(double alpha, const SourceParams &source);

/// Fringe visibility of the measure-and-prepare state at fidelity F.
double classical_teleport_visibility(double V, double F);
/// Upper edge of the classically reachable region.
double classical_bound(double V);

/// Teleported visibility for a target of visibility V.
double teleported_visibility_model(double V, const SourceParams &source);

/// Bob port i at bin 2 and Alice port j at bin 1 both clicking.
double teleport_coincidence_probability(TeleportPair pair, double alpha, double delta, double eta_i, double eta_j);

/// Coincidence probability of a swapping channel. beta_sq is the
/// one-photon weight of each source (1 for single photons).
double swap_coincidence_probability(SwapPair pair, double beta_sq, const SwapParams &params, double R1, double xi);
std::array<double, 4> swap_visibilities(const SwapParams &params);

/// x = T2 R3 / (R2 T3), y = T4 / R4, z = T5 / R5, w = 2 m sqrt(xyz).
struct SwapXYZW {
    double x, y, z, w;
};
SwapXYZW swap_xyzw(const SwapParams &params);
std::array<double, 4> swap_visibilities(const SwapXYZW &p);

struct SwapSolution {
    double x, y, z, w;
    double R4, R5, v_hom;
};

struct SwapInverseResult {
    double t1, t2, t3;
    /// Branch with z >= 1 (R5 <= 1/2).
    SwapSolution primary;
    /// The R -> 1 - R image; it reproduces the same four visibilities.
    SwapSolution mirror;
    bool degenerate = false;
};

/// Recovers (x, y, z, w) from (V12, V13, V42, V43).
SwapInverseResult swap_inverse(double V12, double V13, double V42, double V43);

struct SwapAssignment {
    /// labels[k] is the measured label placed in slot k of (V12, V13, V42, V43).
    std::array<std::string, 4> labels;
    SwapInverseResult result;
};

/// Tries every assignment of the labelled visibilities to the four channels
/// and keeps those whose inversion is consistent and in-domain.
std::vector<SwapAssignment> swap_assignment_search(const std::array<std::pair<std::string, double>, 4> &measured);

double fidelity_from_visibility(double V);

struct PurityPoint {
    double single_count_rate;
    double visibility;
};

struct PurityFit {
    double lambda;
    double intercept;
    double slope;
};

PurityFit estimate_purity_from_scan(const std::vector<PurityPoint> &points, double v_hom);

/// "V,V_T_ideal,V_T_model,classical_bound" rows on `points` evenly spaced V in [0, 1].
std::string teleport_curve_csv(int points, const SourceParams &source);

}  // namespace railsim

#endif
