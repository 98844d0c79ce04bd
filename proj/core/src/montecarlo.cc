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

#include "railsim/montecarlo.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "railsim/errors.h"
#include "railsim/parallel.h"
#include "railsim/text.h"

namespace railsim {

namespace {

constexpr double kTwoPi = 2 * M_PI;

void check_params(const TraceParams &p) {
    if (!(p.n_mean > 0)) {
        throw DomainError("n_mean must be positive");
    }
    if (!(p.v_true >= 0 && p.v_true <= 1)) {
        throw DomainError("v_true must lie in [0,1]");
    }
    if (p.bins <= 0) {
        throw DomainError("bins must be positive");
    }
    if (!(p.step_sigma >= 0)) {
        throw DomainError("step_sigma must be non-negative");
    }
}

}  // namespace

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

uint64_t stream_seed(uint64_t master, uint64_t a, uint64_t b) {
    return splitmix64(splitmix64(splitmix64(master) ^ a) ^ b);
}

CountTrace simulate_trace(const TraceParams &params) {
    check_params(params);
    std::mt19937_64 rng(splitmix64(params.seed));
    std::uniform_real_distribution<double> uniform(0, kTwoPi);
    std::normal_distribution<double> step(0, params.step_sigma);

    CountTrace out;
    out.params = params;
    out.counts.resize(params.bins);
    out.phases.resize(params.bins);
    double phi = uniform(rng);
    for (int64_t t = 0; t < params.bins; t++) {
        if (params.process == PhaseProcess::UniformIID) {
            phi = uniform(rng);
        } else if (t > 0 && params.step_sigma > 0) {
            phi = std::fmod(phi + step(rng), kTwoPi);
            if (phi < 0) {
                phi += kTwoPi;
            }
        }
        out.phases[t] = phi;
        double mean = params.n_mean * (1 + params.v_true * std::cos(phi)) / 2;
        if (mean > 0) {
            std::poisson_distribution<int64_t> poisson(mean);
            out.counts[t] = poisson(rng);
        } else {
            out.counts[t] = 0;
        }
    }
    return out;
}

CountTrace noiseless_trace(double n_mean, double v_true, int64_t bins) {
    TraceParams p;
    p.n_mean = n_mean;
    p.v_true = v_true;
    p.bins = bins;
    p.process = PhaseProcess::UniformIID;
    check_params(p);
    CountTrace out;
    out.params = p;
    out.counts.resize(bins);
    out.phases.resize(bins);
    for (int64_t k = 0; k < bins; k++) {
        double phi = kTwoPi * (double)k / (double)bins;
        out.phases[k] = phi;
        out.counts[k] = std::llround(n_mean * (1 + v_true * std::cos(phi)) / 2);
    }
    return out;
}

double estimate_visibility_minmax(const CountTrace &trace) {
    if (trace.counts.empty()) {
        throw DomainError("empty trace");
    }
    auto [lo, hi] = std::minmax_element(trace.counts.begin(), trace.counts.end());
    if (*hi + *lo == 0) {
        return 0;
    }
    return (double)(*hi - *lo) / (double)(*hi + *lo);
}

VarianceEstimate estimate_visibility_variance(const CountTrace &trace) {
    if (trace.counts.empty()) {
        throw DomainError("empty trace");
    }
    // Shifted sums keep the variance exact for large counts.
    double shift = (double)trace.counts[0];
    double s1 = 0, s2 = 0;
    for (auto c : trace.counts) {
        double d = (double)c - shift;
        s1 += d;
        s2 += d * d;
    }
    double n = (double)trace.counts.size();
    double mean = shift + s1 / n;
    if (!(mean > 0)) {
        throw DomainError("trace mean must be positive");
    }
    double var = s2 / n - (s1 / n) * (s1 / n);
    double radicand = 2 * (var - mean) / (mean * mean);
    if (radicand < 0) {
        return {0, true};
    }
    return {std::sqrt(radicand), false};
}

std::vector<EstimatorRow> estimator_benchmark(const BenchmarkConfig &config, int workers) {
    if (config.trials <= 0) {
        throw DomainError("trials must be positive");
    }
    size_t per_n = (size_t)config.trials;
    size_t total = config.n_grid.size() * per_n;
    std::vector<double> minmax(total), variance(total);
    parallel_for(total, workers, [&](size_t k) {
        size_t ni = k / per_n;
        size_t trial = k % per_n;
        TraceParams p;
        p.n_mean = config.n_grid[ni];
        p.v_true = config.v_true;
        p.bins = config.bins;
        p.process = config.process;
        p.step_sigma = config.step_sigma;
        p.seed = stream_seed(config.seed, ni, trial);
        auto trace = simulate_trace(p);
        minmax[k] = estimate_visibility_minmax(trace);
        variance[k] = estimate_visibility_variance(trace).value;
    });

    auto stats = [&](const std::vector<double> &v, size_t ni) {
        double s = 0;
        for (size_t t = 0; t < per_n; t++) {
            s += v[ni * per_n + t];
        }
        double mean = s / per_n;
        double ss = 0;
        for (size_t t = 0; t < per_n; t++) {
            double d = v[ni * per_n + t] - mean;
            ss += d * d;
        }
        double sd = per_n > 1 ? std::sqrt(ss / (per_n - 1)) : 0.0;
        return std::pair<double, double>(mean, sd);
    };

    std::vector<EstimatorRow> rows;
    for (size_t ni = 0; ni < config.n_grid.size(); ni++) {
        auto [m1, s1] = stats(minmax, ni);
        auto [m2, s2] = stats(variance, ni);
        rows.push_back({config.n_grid[ni], "minmax", m1, s1, config.trials, config.bins, config.v_true});
        rows.push_back({config.n_grid[ni], "variance", m2, s2, config.trials, config.bins, config.v_true});
    }
    return rows;
}

std::string estimator_csv(const std::vector<EstimatorRow> &rows) {
    std::string out = "N,estimator,mean,std,trials,bins,v_true\n";
    for (const auto &r : rows) {
        out += format_double(r.n_mean) + ',' + r.estimator + ',' + format_double(r.mean) + ',' + format_double(r.stddev) +
               ',' + std::to_string(r.trials) + ',' + std::to_string(r.bins) + ',' + format_double(r.v_true) + '\n';
    }
    return out;
}

}  // namespace railsim
