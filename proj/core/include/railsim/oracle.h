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

#ifndef RAILSIM_ORACLE_H
#define RAILSIM_ORACLE_H

#include <string>
#include <vector>

#include "railsim/detection.h"
#include "railsim/fock.h"

namespace railsim {

/// Spatial indices from here on are reserved for loss environment modes.
constexpr int kEnvironmentBase = 10000;
constexpr int kOracleMaxPhotons = 6;

/// Brute-force distribution: every detector's loss becomes a beam splitter
/// into its own environment mode, then detector modes are counted
/// projectively in the enlarged Fock basis.
OutcomeDistribution oracle_distribution(const Ensemble &state, const std::vector<DetectorSpec> &detectors);

double oracle_event_probability(const Ensemble &state, const std::vector<DetectorSpec> &detectors, const Herald &event);

/// Exact-efficiency conditioning computed with explicit loss modes.
ConditionResult oracle_condition(
    const Ensemble &state, const std::vector<DetectorSpec> &detectors, const Herald &herald, const ModeLabel &keep);

struct OracleReport {
    std::string id;
    std::string grid;
    int points = 0;
    /// Oracle against the closed form (extrapolated to eta -> 0 for limits).
    double max_abs_deviation = 0;
    std::string worst_point;
    double threshold = 0;
    /// Limits only: oracle at the smallest eta against the closed form.
    double raw_deviation = 0;
    /// Fast detection path against the oracle at every evaluated point.
    double fast_path_deviation = 0;
    double fast_path_threshold = 1e-12;
    /// Limits only: symbolic high-loss path against the closed form.
    double limit_path_deviation = 0;
    bool is_limit = false;
    bool passed = false;
};

std::vector<std::string> registered_formulas();
OracleReport verify_formula(const std::string &id, int workers = 1);
std::string report_table(const std::vector<OracleReport> &reports);

}  // namespace railsim

#endif
