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

#ifndef RAILSIM_MONTECARLO_H
#define RAILSIM_MONTECARLO_H

#include <cstdint>
#include <string>
#include <vector>

namespace railsim {

enum class PhaseProcess { WrappedRandomWalk, UniformIID };

struct TraceParams {
    /// Mean photon number per bin at full constructive interference is n_mean.
    double n_mean = 50;
    double v_true = 0.9;
    int64_t bins = 100000;
    PhaseProcess process = PhaseProcess::WrappedRandomWalk;
    /// Standard deviation of one random-walk step, radians per bin.
    double step_sigma = 0.05;
    uint64_t seed = 1;
};

struct CountTrace {
    std::vector<int64_t> counts;
    std::vector<double> phases;
    TraceParams params;
};

/// Counts n_t ~ Poisson(N (1 + V cos phi_t) / 2).
CountTrace simulate_trace(const TraceParams &params);

/// Counts round(N (1 + V cos phi_k) / 2) on the grid phi_k = 2 pi k / bins.
CountTrace noiseless_trace(double n_mean, double v_true, int64_t bins);

double estimate_visibility_minmax(const CountTrace &trace);

struct VarianceEstimate {
    double value;
    /// The radicand was negative and the estimate was clamped to 0.
    bool clamped;
};

/// sqrt(2 (<n^2> - <n>^2 - <n>) / <n>^2).
VarianceEstimate estimate_visibility_variance(const CountTrace &trace);

/// SplitMix64 finalizer.
uint64_t splitmix64(uint64_t x);
/// Seed of the stream (a, b) under a master seed.
uint64_t stream_seed(uint64_t master, uint64_t a, uint64_t b);

struct BenchmarkConfig {
    std::vector<double> n_grid = {5, 10, 50, 100};
    double v_true = 0.9;
    int64_t bins = 100000;
    int trials = 100;
    uint64_t seed = 1;
    PhaseProcess process = PhaseProcess::WrappedRandomWalk;
    double step_sigma = 0.05;
};

struct EstimatorRow {
    double n_mean;
    std::string estimator;
    double mean;
    double stddev;
    int trials;
    int64_t bins;
    double v_true;
};

/// Rows ordered by N, then "minmax" before "variance".
std::vector<EstimatorRow> estimator_benchmark(const BenchmarkConfig &config, int workers = 1);
std::string estimator_csv(const std::vector<EstimatorRow> &rows);

}  // namespace railsim

#endif
