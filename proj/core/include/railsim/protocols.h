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

#ifndef RAILSIM_PROTOCOLS_H
#define RAILSIM_PROTOCOLS_H

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "railsim/detection.h"
#include "railsim/fock.h"

namespace railsim {

enum class ProtocolKind { CharacterizationMZI, BellStateMZI, Teleportation, Swapping };
enum class Routing { Deterministic, Probabilistic };

/// Full wiring, or teleportation cut right after Alice's beam splitter
/// (probe omitted) for reading out Bob's conditional state.
enum class Stage { Full, AliceStage };

struct QubitParams {
    double alpha = M_SQRT1_2;
    double delta = 0;
};

/// lambda: conditional purity of every superposition source. x_a, x_b:
/// overlap of the first / second source photon with the principal mode.
/// Teleportation assigns x_a to the input qubit and x_b to the probe;
/// the MZIs and swapping assign them to their two photons in input order.
struct NoiseParams {
    double lambda = 1;
    double x_a = 1;
    double x_b = 1;
};

struct ProtocolSpec {
    ProtocolKind kind = ProtocolKind::Teleportation;
    QubitParams qubit;
    NoiseParams noise;
    /// Detector efficiency per spatial output port; missing ports use 1.
    std::map<int, double> etas;
    /// Transmittance per beam-splitter id; missing ids use 0.5.
    std::map<std::string, double> transmittances;
    Routing routing = Routing::Probabilistic;
    DetectorKind detector_kind = DetectorKind::Threshold;
    LossModel loss_model = LossModel::Exact;
    /// Keeps Alice's detectors at unit efficiency outside the loss scaling.
    bool lossless_herald = false;
};

/// Deterministic routing, number-resolving detectors, lossless herald, Bob
/// in the high-loss limit.
ProtocolSpec ideal_teleportation(double alpha);
/// Probabilistic routing, threshold detectors, everything in the high-loss limit.
ProtocolSpec threshold_teleportation(double alpha);

/// Probability of `event` given `given` (plain joint probability when
/// `given` is empty).
struct RelevantEvent {
    std::string label;
    Herald event;
    Herald given;
};

struct ProtocolSetup {
    Ensemble input;
    Circuit circuit;
    std::vector<DetectorSpec> detectors;
    std::vector<RelevantEvent> events;
};

/// Teleportation detector indices.
namespace tele {
constexpr int kA2 = 0;  // (2, bin 1)
constexpr int kA4 = 1;  // (4, bin 1)
constexpr int kB1 = 2;  // (1, bin 2)
constexpr int kB3 = 3;  // (3, bin 2)
constexpr int kInput1 = 4;  // (1, bin 0)
constexpr int kInput3 = 5;  // (3, bin 0)
constexpr int kProbe2 = 6;  // (2, bin 3)
constexpr int kProbe4 = 7;  // (4, bin 3)
}  // namespace tele

std::vector<std::string> beam_splitter_ids(ProtocolKind kind);
std::string protocol_name(ProtocolKind kind);

ProtocolSetup build_protocol(const ProtocolSpec &spec, double phase, Stage stage = Stage::Full);

/// Alice's herald on port 2 or 4 at bin 1: a click for threshold detectors;
/// exactly one photon there and none on the other port for PNR detectors.
Herald alice_herald(const ProtocolSpec &spec, int port);
/// Photon-number herald of a successful Bell measurement on `port`, which for
/// probabilistic routing also requires that no photon took a wrong route.
Herald success_herald(const ProtocolSpec &spec, int port);

/// Probability of success_herald at the given Alice port using the
/// exact efficiencies. The high-loss flag is ignored here.
double success_probability(const ProtocolSpec &spec, int port);

struct EventValue {
    double value = 0;
    int order = 0;
};

EventValue evaluate_event(const Ensemble &output, const std::vector<DetectorSpec> &detectors,
                          const RelevantEvent &event, LossModel loss);

struct FringeFit {
    double visibility = 0;
    double mean = 0;
    double phase_of_max = 0;
    bool used_fit = false;
};

/// Visibility of a sampled fringe: least-squares fit of a + b cos + c sin,
/// falling back to (max - min)/(max + min) when the relative residual
/// exceeds 1e-6.
FringeFit fringe_visibility(const std::vector<double> &grid, const std::vector<double> &values);

struct HeraldFringe {
    std::string herald;
    std::vector<double> values;
    int order = 0;
    FringeFit fit;
};

struct FringeScanResult {
    std::vector<double> grid;
    std::vector<HeraldFringe> heralds;

    const HeraldFringe &at(const std::string &label) const;
    /// "herald,phase,probability" rows.
    std::string to_csv() const;
    /// "herald -> visibility" lines.
    std::string summary() const;
};

std::vector<double> uniform_grid(int points);

FringeScanResult fringe_scan(const ProtocolSpec &spec, const std::vector<double> &grid, int workers = 1);

struct ConditioningContrast {
    double conditioned;
    double unconditioned;
};

ConditioningContrast conditioning_contrast(const ProtocolSpec &spec, const std::vector<double> &grid, int workers = 1);

}  // namespace railsim

#endif
