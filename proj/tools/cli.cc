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


#include "cli.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "railsim/analytics.h"
#include "railsim/errors.h"
#include "railsim/montecarlo.h"
#include "railsim/oracle.h"
#include "railsim/protocols.h"
#include "railsim/text.h"

namespace railsim::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Common {
    uint64_t seed = 1;
    std::string out_path;
    std::string config_path;
    int workers = 1;
};

struct Sink {
    std::ostream &out;
    std::ostream &err;
    const Common &common;

    /// Primary data to --out or stdout; returns the stream for the summary.
    std::ostream &emit(const std::string &data) {
        if (common.out_path.empty()) {
            out << data;
            return err;
        }
        std::ofstream f(common.out_path, std::ios::binary);
        if (!f) {
            throw ConfigError("cannot write " + common.out_path);
        }
        f << data;
        return out;
    }
};

std::vector<double> parse_list(const std::string &text) {
    std::vector<double> out;
    for (const auto &s : split(text, ',')) {
        out.push_back(parse_double(trim(s)));
    }
    if (out.empty()) {
        throw ConfigError("empty list");
    }
    return out;
}

void add_common(CLI::App *cmd, Common &c) {
    cmd->add_option("--seed", c.seed, "Master RNG seed");
    cmd->add_option("--out", c.out_path, "Output file for the data table (stdout when empty)");
    cmd->add_option("--config", c.config_path, "File of 'key = value' lines; flags override it");
    cmd->add_option("--workers", c.workers, "Worker threads")->check(CLI::Range(1, 1024));
}

PhaseProcess parse_process(const std::string &name) {
    if (name == "random-walk") {
        return PhaseProcess::WrappedRandomWalk;
    }
    if (name == "uniform") {
        return PhaseProcess::UniformIID;
    }
    throw ConfigError("unknown phase process '" + name + "'");
}

// characterize ---------------------------------------------------------------

struct CharacterizeOpts {
    std::string alpha_grid = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
    double lambda = 0.98;
    double v_hom = 0.9055;
    int phase_points = 64;
};

void run_characterize(const CharacterizeOpts &o, Sink &sink) {
    auto grid = uniform_grid(o.phase_points);
    std::string csv = "alpha_sq,S_c_rel,V\n";
    std::vector<PurityPoint> points;
    for (double a2 : parse_list(o.alpha_grid)) {
        if (!(a2 >= 0 && a2 <= 1)) {
            throw DomainError("alpha_sq must lie in [0,1]");
        }
        ProtocolSpec spec;
        spec.kind = ProtocolKind::CharacterizationMZI;
        spec.qubit.alpha = std::sqrt(a2);
        spec.noise = {o.lambda, std::sqrt(o.v_hom), std::sqrt(o.v_hom)};
        spec.loss_model = LossModel::HighLossLimit;
        double s_c = 1 - a2;
        double v = kNaN;
        try {
            v = fringe_scan(spec, grid, sink.common.workers).at("D1").fit.visibility;
        } catch (const NoSignal &) {
            // Vacuum input: no counts, no fringe.
        }
        if (s_c > 0 && !std::isnan(v)) {
            points.push_back({s_c, v});
        }
        csv += format_double(a2) + ',' + format_double(s_c) + ',' + format_double(v) + '\n';
    }
    auto &summary = sink.emit(csv);
    if (points.size() >= 2) {
        auto fit = estimate_purity_from_scan(points, o.v_hom);
        summary << "fitted_lambda = " << format_double(fit.lambda) << '\n';
        summary << "intercept = " << format_double(fit.intercept) << '\n';
        summary << "slope = " << format_double(fit.slope) << '\n';
    } else {
        summary << "fitted_lambda = nan (fewer than two points with counts)\n";
    }
}

// teleport --------------------------------------------------------------------

struct TeleportOpts {
    int points = 51;
    int phase_points = 64;
    double lambda = 0.98;
    double v_hom_alice = 0.9055;
    double v_hom_bob = 0.8987;
};

struct MeasuredRow {
    double V, VT, sigma;
};
const MeasuredRow kMeasured[] = {
    {0.197, 0.13, 0.02}, {0.303, 0.21, 0.02}, {0.398, 0.26, 0.02},
    {0.510, 0.36, 0.03}, {0.591, 0.41, 0.04}, {0.720, 0.52, 0.05},
};

double simulated_teleport_visibility(double V, const TeleportOpts &o, const std::vector<double> &grid, int workers) {
    double a2 = V / (o.lambda * o.lambda * std::sqrt(o.v_hom_alice));
    if (!(a2 >= 0 && a2 <= 1)) {
        return kNaN;
    }
    auto spec = threshold_teleportation(std::sqrt(a2));
    spec.noise = {o.lambda, o.v_hom_alice, o.v_hom_bob};
    try {
        return fringe_scan(spec, grid, workers).at("P12").fit.visibility;
    } catch (const NoSignal &) {
        return kNaN;
    }
}

void run_teleport(const TeleportOpts &o, Sink &sink) {
    if (o.points < 2) {
        throw ConfigError("--points must be at least 2");
    }
    SourceParams src{o.lambda, o.v_hom_alice, o.v_hom_bob};
    auto grid = uniform_grid(o.phase_points);
    std::string csv = "V,V_T_ideal,V_T_model,V_T_simulated,classical_bound\n";
    for (int k = 0; k < o.points; k++) {
        double V = (double)k / (o.points - 1);
        double model;
        try {
            model = teleported_visibility_model(V, src);
        } catch (const DomainError &) {
            model = kNaN;
        }
        double sim = simulated_teleport_visibility(V, o, grid, sink.common.workers);
        csv += format_double(V) + ',' + format_double(V) + ',' + format_double(model) + ',' + format_double(sim) +
               ',' + format_double(classical_bound(V)) + '\n';
    }
    auto &summary = sink.emit(csv);
    summary << "V,V_T_measured,sigma,V_T_model,deviation_in_sigma\n";
    for (const auto &r : kMeasured) {
        double model = teleported_visibility_model(r.V, src);
        summary << format_double(r.V) << ',' << format_double(r.VT) << ',' << format_double(r.sigma) << ','
                << format_double(model) << ',' << format_double((model - r.VT) / r.sigma) << '\n';
    }
    auto det = ideal_teleportation(M_SQRT1_2);
    det.loss_model = LossModel::Exact;
    auto prob = threshold_teleportation(0.0);
    prob.loss_model = LossModel::Exact;
    prob.detector_kind = DetectorKind::PhotonNumberResolving;
    for (int port : {2, 4}) {
        summary << "success_probability deterministic A" << port << " = "
                << format_double(success_probability(det, port)) << '\n';
    }
    for (int port : {2, 4}) {
        summary << "success_probability probabilistic A" << port << " = "
                << format_double(success_probability(prob, port)) << '\n';
    }
}

// swap -------------------------------------------------------------------------

struct SwapOpts {
    double r1 = 0.5, r2 = 0.5, r3 = 0.5, r4 = 0.5, r5 = 0.5;
    double m = 1.0;
    int phase_points = 64;
    std::string visibilities;
    std::string assignment = "search";
};

std::string solution_row(const std::array<std::string, 4> &labels, const std::array<double, 4> &v,
                         const SwapInverseResult &r) {
    const auto &s = r.primary;
    std::string row = labels[0] + ' ' + labels[1] + ' ' + labels[2] + ' ' + labels[3];
    for (double x : v) {
        row += ',' + format_double(x);
    }
    for (double x : {s.x, s.y, s.z, s.w, s.R4, s.R5, s.v_hom}) {
        row += ',' + format_double(x);
    }
    return row + (r.degenerate ? ",degenerate\n" : ",ok\n");
}

int run_swap(const SwapOpts &o, Sink &sink) {
    SwapParams params{o.r2, o.r3, o.r4, o.r5, o.m};
    auto model = swap_visibilities(params);

    ProtocolSpec spec;
    spec.kind = ProtocolKind::Swapping;
    spec.noise = {1.0, std::sqrt(o.m), std::sqrt(o.m)};
    spec.transmittances = {{"BS1", 1 - o.r1}, {"BS2", 1 - o.r2}, {"BS3", 1 - o.r3}, {"BS4", 1 - o.r4},
                           {"BS5", 1 - o.r5}};
    auto scan = fringe_scan(spec, uniform_grid(o.phase_points), sink.common.workers);

    std::string csv = "pair,V_model,V_simulated\n";
    for (size_t k = 0; k < kSwapPairs.size(); k++) {
        auto name = swap_pair_name(kSwapPairs[k]);
        csv += name + ',' + format_double(model[k]) + ',' + format_double(scan.at(name).fit.visibility) + '\n';
    }
    if (o.visibilities.empty()) {
        sink.emit(csv);
        return kExitOk;
    }

    std::array<std::pair<std::string, double>, 4> measured;
    auto items = split(o.visibilities, ',');
    if (items.size() != 4) {
        throw ConfigError("--visibilities needs four label=value items");
    }
    for (size_t k = 0; k < 4; k++) {
        auto kv = split(items[k], '=');
        if (kv.size() != 2) {
            throw ConfigError("bad visibility item '" + items[k] + "'");
        }
        measured[k] = {std::string(trim(kv[0])), parse_double(trim(kv[1]))};
    }

    csv += "\nassignment,V12,V13,V42,V43,x,y,z,w,R4,R5,v_hom,status\n";
    int status = kExitOk;
    std::string note;
    if (o.assignment == "search") {
        auto found = swap_assignment_search(measured);
        for (const auto &a : found) {
            std::array<double, 4> v{};
            for (size_t k = 0; k < 4; k++) {
                for (const auto &[label, value] : measured) {
                    if (label == a.labels[k]) {
                        v[k] = value;
                    }
                }
            }
            csv += solution_row(a.labels, v, a.result);
        }
        if (found.empty()) {
            status = kExitVerificationFailure;
            note = "no assignment of the four visibilities admits a consistent inversion\n";
        }
    } else {
        auto labels = split(o.assignment, ',');
        if (labels.size() != 4) {
            throw ConfigError("--assignment needs four labels in V12,V13,V42,V43 order");
        }
        std::array<std::string, 4> slot;
        std::array<double, 4> v{};
        for (size_t k = 0; k < 4; k++) {
            slot[k] = std::string(trim(labels[k]));
            bool hit = false;
            for (const auto &[label, value] : measured) {
                if (label == slot[k]) {
                    v[k] = value;
                    hit = true;
                }
            }
            if (!hit) {
                throw ConfigError("assignment label '" + slot[k] + "' not among --visibilities");
            }
        }
        try {
            csv += solution_row(slot, v, swap_inverse(v[0], v[1], v[2], v[3]));
        } catch (const InconsistentVisibilities &e) {
            status = kExitVerificationFailure;
            note = std::string(e.what()) + '\n';
        }
    }
    auto &summary = sink.emit(csv);
    summary << note;
    return status;
}

// trace / estimator-bench ---------------------------------------------------------

struct TraceOpts {
    double n_mean = 50;
    double v_true = 0.9;
    int64_t bins = 100000;
    std::string process = "random-walk";
    double step_sigma = 0.05;
};

void run_trace(const TraceOpts &o, Sink &sink) {
    TraceParams p;
    p.n_mean = o.n_mean;
    p.v_true = o.v_true;
    p.bins = o.bins;
    p.process = parse_process(o.process);
    p.step_sigma = o.step_sigma;
    p.seed = sink.common.seed;
    auto trace = simulate_trace(p);
    std::string csv = "bin,count\n";
    csv.reserve(trace.counts.size() * 10);
    for (size_t k = 0; k < trace.counts.size(); k++) {
        csv += std::to_string(k) + ',' + std::to_string(trace.counts[k]) + '\n';
    }
    auto &summary = sink.emit(csv);
    auto var = estimate_visibility_variance(trace);
    summary << "minmax = " << format_double(estimate_visibility_minmax(trace)) << '\n';
    summary << "variance = " << format_double(var.value) << (var.clamped ? " (clamped)" : "") << '\n';
}

struct BenchOpts {
    std::string n_grid = "5,10,50,100";
    double v_true = 0.9;
    int64_t bins = 100000;
    int trials = 100;
    std::string process = "random-walk";
    double step_sigma = 0.05;
};

void run_bench(const BenchOpts &o, Sink &sink) {
    BenchmarkConfig c;
    c.n_grid = parse_list(o.n_grid);
    c.v_true = o.v_true;
    c.bins = o.bins;
    c.trials = o.trials;
    c.seed = sink.common.seed;
    c.process = parse_process(o.process);
    c.step_sigma = o.step_sigma;
    sink.emit(estimator_csv(estimator_benchmark(c, sink.common.workers)));
}

// verify ----------------------------------------------------------------------------

int run_verify(const std::vector<std::string> &ids, Sink &sink) {
    auto known = registered_formulas();
    auto selected = ids.empty() ? known : ids;
    for (const auto &id : selected) {
        if (std::find(known.begin(), known.end(), id) == known.end()) {
            throw ConfigError("unknown formula id '" + id + "'");
        }
    }
    std::vector<OracleReport> reports;
    bool ok = true;
    for (const auto &id : selected) {
        reports.push_back(verify_formula(id, sink.common.workers));
        ok = ok && reports.back().passed;
    }
    sink.emit(report_table(reports));
    return ok ? kExitOk : kExitVerificationFailure;
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string> &args) {
    if (args.size() < 2) {
        return args;
    }
    std::string path;
    for (size_t k = 2; k < args.size(); k++) {
        if (args[k] == "--config" && k + 1 < args.size()) {
            path = args[k + 1];
        } else if (args[k].rfind("--config=", 0) == 0) {
            path = args[k].substr(9);
        }
    }
    if (path.empty()) {
        return args;
    }
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot read config file " + path);
    }
    std::vector<std::string> injected;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        lineno++;
        auto t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        auto key = std::string(trim(t.substr(0, eq)));
        auto value = std::string(trim(t.substr(eq + 1)));
        if (key.empty() || key == "config") {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": invalid key '" + key + "'");
        }
        injected.push_back("--" + key + "=" + value);
    }
    std::vector<std::string> out(args.begin(), args.begin() + 2);
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), args.begin() + 2, args.end());
    return out;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Single-rail photonic qubit simulator"};
    app.name(args.empty() ? "railsim" : args[0]);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
    app.require_subcommand(1);

    Common common;
    CharacterizeOpts ch;
    TeleportOpts tp;
    SwapOpts sw;
    TraceOpts tr;
    BenchOpts be;
    std::vector<std::string> verify_ids;

    auto *c_char = app.add_subcommand("characterize", "Self-homodyne purity characterization scan");
    c_char->add_option("--alpha-grid", ch.alpha_grid, "Comma-separated vacuum populations alpha^2");
    c_char->add_option("--lambda", ch.lambda, "Conditional purity of the source");
    c_char->add_option("--v-hom", ch.v_hom, "HOM visibility of the source");
    c_char->add_option("--phase-points", ch.phase_points, "Phase grid size");

    auto *c_tele = app.add_subcommand("teleport", "Teleported visibility curves");
    c_tele->add_option("--points", tp.points, "Points of the uniform V grid on [0,1]");
    c_tele->add_option("--phase-points", tp.phase_points, "Phase grid size");
    c_tele->add_option("--lambda", tp.lambda, "Conditional purity");
    c_tele->add_option("--v-hom-alice", tp.v_hom_alice, "HOM visibility at Alice");
    c_tele->add_option("--v-hom-bob", tp.v_hom_bob, "HOM visibility at Bob");

    auto *c_swap = app.add_subcommand("swap", "Entanglement swapping visibilities and their inversion");
    c_swap->add_option("--r1", sw.r1, "Reflectivity of BS1");
    c_swap->add_option("--r2", sw.r2, "Reflectivity of BS2");
    c_swap->add_option("--r3", sw.r3, "Reflectivity of BS3");
    c_swap->add_option("--r4", sw.r4, "Reflectivity of BS4");
    c_swap->add_option("--r5", sw.r5, "Reflectivity of BS5");
    c_swap->add_option("--m", sw.m, "HOM visibility scale x_A x_B");
    c_swap->add_option("--phase-points", sw.phase_points, "Phase grid size");
    c_swap->add_option("--visibilities", sw.visibilities, "Measured visibilities as label=value,... (four items)");
    c_swap->add_option("--assignment", sw.assignment,
                       "Labels for V12,V13,V42,V43 separated by commas, or 'search' for all orderings");

    auto *c_trace = app.add_subcommand("trace", "Simulate one Poisson count trace");
    c_trace->add_option("--n-mean", tr.n_mean, "Mean photons per bin");
    c_trace->add_option("--v-true", tr.v_true, "True fringe visibility");
    c_trace->add_option("--bins", tr.bins, "Number of time bins");
    c_trace->add_option("--process", tr.process, "Phase process: random-walk or uniform");
    c_trace->add_option("--step-sigma", tr.step_sigma, "Random-walk step in radians per bin");

    auto *c_bench = app.add_subcommand("estimator-bench", "Bias of the min-max and variance estimators");
    c_bench->add_option("--n-grid", be.n_grid, "Comma-separated mean photon numbers");
    c_bench->add_option("--v-true", be.v_true, "True fringe visibility");
    c_bench->add_option("--bins", be.bins, "Bins per trace");
    c_bench->add_option("--trials", be.trials, "Traces per grid point");
    c_bench->add_option("--process", be.process, "Phase process: random-walk or uniform");
    c_bench->add_option("--step-sigma", be.step_sigma, "Random-walk step in radians per bin");

    auto *c_verify = app.add_subcommand("verify", "Check closed forms against the brute-force oracle");
    c_verify->add_option("ids", verify_ids, "Formula ids; all when omitted")->multi_option_policy(
        CLI::MultiOptionPolicy::TakeAll);

    for (auto *cmd : {c_char, c_tele, c_swap, c_trace, c_bench, c_verify}) {
        add_common(cmd, common);
    }

    try {
        auto expanded = expand_config(args);
        std::vector<std::string> rev(expanded.rbegin(), expanded.rend() - 1);
        app.parse(rev);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    Sink sink{out, err, common};
    try {
        if (c_char->parsed()) {
            run_characterize(ch, sink);
        } else if (c_tele->parsed()) {
            run_teleport(tp, sink);
        } else if (c_swap->parsed()) {
            return run_swap(sw, sink);
        } else if (c_trace->parsed()) {
            run_trace(tr, sink);
        } else if (c_bench->parsed()) {
            run_bench(be, sink);
        } else if (c_verify->parsed()) {
            return run_verify(verify_ids, sink);
        }
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::runtime_error &e) {
        err << "error: " << e.what() << '\n';
        return kExitVerificationFailure;
    }
    return kExitOk;
}

}  // namespace railsim::cli
