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

#ifndef RAILSIM_DETECTION_H
#define RAILSIM_DETECTION_H

#include <array>
#include <climits>
#include <map>
#include <string>
#include <vector>

#include "railsim/fock.h"

namespace railsim {

enum class DetectorKind { Threshold, PhotonNumberResolving };

/// A detector watches every internal label of (mode.spatial, mode.time_bin).
/// All losses are folded into `efficiency`.
struct DetectorSpec {
    ModeLabel mode;
    double efficiency = 1.0;
    DetectorKind kind = DetectorKind::Threshold;
    /// In the high-loss limit the efficiency is taken as eps * efficiency with
    /// eps -> 0. Detectors with this off keep their exact efficiency.
    bool scales_with_loss = true;
};

/// One outcome per declared detector: 0/1 for threshold detectors (1 =
/// click), the registered count for photon-number-resolving ones.
using DetectionPattern = std::vector<int>;

class OutcomeDistribution {
   public:
    OutcomeDistribution(std::vector<DetectorSpec> detectors, std::map<DetectionPattern, double> probs);

    const std::vector<DetectorSpec> &detectors() const {
        return detectors_;
    }
    const std::map<DetectionPattern, double> &probs() const {
        return probs_;
    }
    double probability(const DetectionPattern &pattern) const;
    double total() const;

    /// "d0=click;d1=0" style pattern key.
    std::string pattern_key(const DetectionPattern &pattern) const;
    /// Header "pattern,probability" followed by one row per pattern.
    std::string to_csv() const;

   private:
    std::vector<DetectorSpec> detectors_;
    std::map<DetectionPattern, double> probs_;
};

/// Accepted outcome values [min, max] of one detector.
struct CountRange {
    int detector;
    int min;
    int max;
};

/// A partial pattern. Detectors that are not listed are marginalized.
using Herald = std::vector<CountRange>;

CountRange click(int detector);
CountRange no_click(int detector);
CountRange exactly(int detector, int count);
CountRange at_least(int detector, int count);

enum class LossModel { Exact, HighLossLimit };

/// p ~ coefficient * eps^order as eps -> 0. A zero coefficient means the
/// event never happens.
struct LeadingOrder {
    int order = 0;
    double coefficient = 0;
};

/// 2x2 density matrix on {|0>, |1>} of one mode.
struct QubitDensity {
    std::array<std::array<Amplitude, 2>, 2> rho{};

    bool is_hermitian(double tol = 1e-12) const;
    double trace() const;
    double min_eigenvalue() const;
    /// Fringe visibility 2|rho01| a self-homodyne probe would report.
    double coherence() const;
};

struct ConditionResult {
    /// Herald probability, or its leading coefficient in the high-loss limit.
    double probability;
    int order;
    QubitDensity state;
};

OutcomeDistribution outcome_distribution(const Ensemble &state, const std::vector<DetectorSpec> &detectors);

double event_probability(const Ensemble &state, const std::vector<DetectorSpec> &detectors, const Herald &event);
double heralding_probability(const Ensemble &state, const std::vector<DetectorSpec> &detectors, const Herald &herald);
LeadingOrder event_leading_order(
    const Ensemble &state, const std::vector<DetectorSpec> &detectors, const Herald &event);

/// Reduced state of the principal mode at (keep.spatial, keep.time_bin)
/// given the herald. Fictitious labels at that position are traced out.
ConditionResult condition(
    const Ensemble &state,
    const std::vector<DetectorSpec> &detectors,
    const Herald &herald,
    const ModeLabel &keep,
    LossModel loss = LossModel::Exact);

/// Rejects duplicate detectors, out-of-range efficiencies and heralds that
/// reference unknown detectors.
void validate_detectors(const std::vector<DetectorSpec> &detectors);
void validate_herald(const std::vector<DetectorSpec> &detectors, const Herald &herald);

}  // namespace railsim

#endif
