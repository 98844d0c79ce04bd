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

#include "railsim/fock.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "railsim/errors.h"
#include "railsim/text.h"

namespace railsim {

namespace {

double factorial(int n) {
    double f = 1;
    for (int k = 2; k <= n; k++) {
        f *= k;
    }
    return f;
}

double binomial(int n, int k) {
    return factorial(n) / (factorial(k) * factorial(n - k));
}

void check_unit(double v, const char *name) {
    if (!(v >= 0 && v <= 1)) {
        throw DomainError(std::string(name) + " must lie in [0,1], got " + format_double(v));
    }
}

}  // namespace

std::string ModeLabel::str() const {
    return "(" + std::to_string(spatial) + "," + std::to_string(time_bin) + "," + std::to_string(internal) + ")";
}

FockBasisState::FockBasisState(std::vector<std::pair<ModeLabel, int>> occupations) {
    std::sort(occupations.begin(), occupations.end(), [](const auto &a, const auto &b) {
        return a.first < b.first;
    });
    for (const auto &[mode, n] : occupations) {
        if (n < 0) {
            throw DomainError("negative occupation on mode " + mode.str());
        }
        if (!occ_.empty() && occ_.back().first == mode) {
            occ_.back().second += n;
        } else {
            occ_.emplace_back(mode, n);
        }
    }
    std::erase_if(occ_, [](const auto &e) {
        return e.second == 0;
    });
}

int FockBasisState::occupation(const ModeLabel &mode) const {
    auto it = std::lower_bound(occ_.begin(), occ_.end(), mode, [](const auto &e, const ModeLabel &m) {
        return e.first < m;
    });
    if (it != occ_.end() && it->first == mode) {
        return it->second;
    }
    return 0;
}

int FockBasisState::total_photons() const {
    int n = 0;
    for (const auto &e : occ_) {
        n += e.second;
    }
    return n;
}

FockBasisState FockBasisState::with(const ModeLabel &mode, int n) const {
    if (n < 0) {
        throw DomainError("negative occupation on mode " + mode.str());
    }
    FockBasisState out = *this;
    auto it = std::lower_bound(out.occ_.begin(), out.occ_.end(), mode, [](const auto &e, const ModeLabel &m) {
        return e.first < m;
    });
    bool present = it != out.occ_.end() && it->first == mode;
    if (n == 0) {
        if (present) {
            out.occ_.erase(it);
        }
    } else if (present) {
        it->second = n;
    } else {
        out.occ_.insert(it, {mode, n});
    }
    return out;
}

std::string FockBasisState::str() const {
    std::string out;
    for (const auto &[mode, n] : occ_) {
        if (!out.empty()) {
            out += ' ';
        }
        out += mode.str();
        out += ':';
        out += std::to_string(n);
    }
    return out;
}

FockBasisState FockBasisState::parse(std::string_view text) {
    std::vector<std::pair<ModeLabel, int>> occ;
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) {
        // (s,t,i):n
        if (token.size() < 9 || token.front() != '(') {
            throw ConfigError("bad mode token '" + token + "'");
        }
        auto close = token.find(')');
        if (close == std::string::npos || close + 1 >= token.size() || token[close + 1] != ':') {
            throw ConfigError("bad mode token '" + token + "'");
        }
        auto fields = split(std::string_view(token).substr(1, close - 1), ',');
        if (fields.size() != 3) {
            throw ConfigError("bad mode token '" + token + "'");
        }
        ModeLabel m{(int)parse_int(fields[0]), (int)parse_int(fields[1]), (int)parse_int(fields[2])};
        int n = (int)parse_int(std::string_view(token).substr(close + 2));
        if (n <= 0) {
            throw ConfigError("stored occupations must be positive in '" + token + "'");
        }
        occ.emplace_back(m, n);
    }
    FockBasisState out(occ);
    if (out.occupations().size() != occ.size()) {
        throw ConfigError("repeated mode in '" + std::string(text) + "'");
    }
    return out;
}

PureState::PureState() {
    terms_.emplace(FockBasisState(), Amplitude(1));
}

PureState::PureState(std::map<FockBasisState, Amplitude> terms, double prune_tol) : prune_tol_(prune_tol) {
    if (!(prune_tol >= 0)) {
        throw DomainError("prune_tol must be non-negative");
    }
    for (auto &[basis, amp] : terms) {
        if (std::abs(amp) < prune_tol || amp == Amplitude(0)) {
            continue;
        }
        if (basis.total_photons() > kMaxPhotons) {
            throw DomainError("photon number " + std::to_string(basis.total_photons()) + " exceeds the clamp of " +
                              std::to_string(kMaxPhotons));
        }
        terms_.emplace(basis, amp);
    }
}

PureState PureState::basis(const FockBasisState &state) {
    return PureState({{state, Amplitude(1)}});
}

Amplitude PureState::amplitude(const FockBasisState &state) const {
    auto it = terms_.find(state);
    return it == terms_.end() ? Amplitude(0) : it->second;
}

double PureState::norm_sq() const {
    double s = 0;
    for (const auto &e : terms_) {
        s += std::norm(e.second);
    }
    return s;
}

PureState PureState::normalized() const {
    double n = std::sqrt(norm_sq());
    if (n == 0) {
        throw DomainError("cannot normalize the zero vector");
    }
    std::map<FockBasisState, Amplitude> out;
    for (const auto &[b, a] : terms_) {
        out.emplace(b, a / n);
    }
    return PureState(std::move(out), prune_tol_);
}

int PureState::max_photons() const {
    int m = 0;
    for (const auto &e : terms_) {
        m = std::max(m, e.first.total_photons());
    }
    return m;
}

std::set<ModeLabel> PureState::modes() const {
    std::set<ModeLabel> out;
    for (const auto &e : terms_) {
        for (const auto &o : e.first.occupations()) {
            out.insert(o.first);
        }
    }
    return out;
}

PureState PureState::tensor(const PureState &other) const {
    auto mine = modes();
    for (const auto &m : other.modes()) {
        if (mine.count(m)) {
            throw ConfigError("tensor product over a shared mode " + m.str());
        }
    }
    std::map<FockBasisState, Amplitude> out;
    for (const auto &[b1, a1] : terms_) {
        for (const auto &[b2, a2] : other.terms_) {
            auto occ = b1.occupations();
            occ.insert(occ.end(), b2.occupations().begin(), b2.occupations().end());
            out[FockBasisState(std::move(occ))] += a1 * a2;
        }
    }
    return PureState(std::move(out), std::min(prune_tol_, other.prune_tol_));
}

std::string PureState::to_text() const {
    std::string out;
    for (const auto &[b, a] : terms_) {
        out += format_double(a.real());
        out += ' ';
        out += format_double(a.imag());
        out += " |";
        if (!b.is_vacuum()) {
            out += ' ';
            out += b.str();
        }
        out += '\n';
    }
    return out;
}

PureState PureState::from_text(std::string_view text, double prune_tol) {
    std::map<FockBasisState, Amplitude> terms;
    for (const auto &raw : split(text, '\n')) {
        auto line = trim(raw);
        if (line.empty()) {
            continue;
        }
        auto bar = line.find('|');
        if (bar == std::string_view::npos) {
            throw ConfigError("missing '|' in state line '" + std::string(line) + "'");
        }
        std::istringstream amp{std::string(line.substr(0, bar))};
        std::string re, im, extra;
        if (!(amp >> re >> im) || (amp >> extra)) {
            throw ConfigError("bad amplitude in state line '" + std::string(line) + "'");
        }
        auto basis = FockBasisState::parse(line.substr(bar + 1));
        terms[basis] += Amplitude(parse_double(re), parse_double(im));
    }
    return PureState(std::move(terms), prune_tol);
}

Ensemble::Ensemble(std::vector<WeightedState> components) {
    double total = 0;
    for (auto &c : components) {
        if (!(c.weight >= -1e-12 && c.weight <= 1 + 1e-12)) {
            throw DomainError("ensemble weight outside [0,1]: " + format_double(c.weight));
        }
        if (std::abs(c.state.norm_sq() - 1) > 1e-9) {
            throw DomainError("ensemble component is not normalized");
        }
        total += c.weight;
        if (c.weight > 0) {
            components_.push_back(std::move(c));
        }
    }
    if (std::abs(total - 1) > 1e-9) {
        throw DomainError("ensemble weights sum to " + format_double(total));
    }
}

Ensemble::Ensemble(const PureState &pure) : Ensemble(std::vector<WeightedState>{{1.0, pure}}) {
}

Ensemble Ensemble::tensor(const Ensemble &other) const {
    std::vector<WeightedState> out;
    for (const auto &a : components_) {
        for (const auto &b : other.components_) {
            out.push_back({a.weight * b.weight, a.state.tensor(b.state)});
        }
    }
    return Ensemble(std::move(out));
}

std::array<double, 4> beam_splitter_matrix(const BeamSplitter &bs) {
    double t = std::sqrt(bs.transmittance);
    double r = std::sqrt(1 - bs.transmittance);
    double s = bs.reflection_sign;
    return {t, s * r, r, -s * t};
}

PureState make_qubit_state(double alpha, double delta, const ModeLabel &mode) {
    return make_distinguishable_qubit(alpha, delta, 1.0, mode, 1);
}

PureState make_distinguishable_qubit(
    double alpha, double delta, double x, const ModeLabel &mode, int fictitious_internal) {
    check_unit(alpha, "alpha");
    check_unit(x, "x");
    if (fictitious_internal <= 0) {
        throw DomainError("fictitious internal label must be positive");
    }
    double beta = std::sqrt(1 - alpha * alpha);
    Amplitude phase = std::polar(1.0, delta);
    ModeLabel fict{mode.spatial, mode.time_bin, fictitious_internal};
    std::map<FockBasisState, Amplitude> terms;
    terms[FockBasisState()] += alpha;
    terms[FockBasisState({{mode, 1}})] += beta * phase * std::sqrt(x);
    terms[FockBasisState({{fict, 1}})] += beta * phase * std::sqrt(1 - x);
    return PureState(std::move(terms));
}

namespace {

using TermMap = std::map<FockBasisState, Amplitude>;

void check_photons(const PureState &state) {
    if (state.max_photons() > kMaxPhotons) {
        throw DomainError("photon number exceeds the clamp of " + std::to_string(kMaxPhotons));
    }
}

TermMap couple_pair(const TermMap &in, const ModeLabel &ma, const ModeLabel &mb, const std::array<double, 4> &u) {
    // Output of a^na b^nb |0> / sqrt(na! nb!) with a -> u00 a + u10 b, b -> u01 a + u11 b.
    TermMap out;
    for (const auto &[basis, amp] : in) {
        int na = basis.occupation(ma);
        int nb = basis.occupation(mb);
        if (na == 0 && nb == 0) {
            out[basis] += amp;
            continue;
        }
        FockBasisState base = basis.with(ma, 0).with(mb, 0);
        double norm_in = std::sqrt(factorial(na) * factorial(nb));
        for (int k = 0; k <= na; k++) {
            double ck = binomial(na, k) * std::pow(u[0], k) * std::pow(u[2], na - k);
            if (ck == 0) {
                continue;
            }
            for (int l = 0; l <= nb; l++) {
                double cl = binomial(nb, l) * std::pow(u[1], l) * std::pow(u[3], nb - l);
                if (cl == 0) {
                    continue;
                }
                int p = k + l;
                int q = na + nb - p;
                double c = ck * cl * std::sqrt(factorial(p) * factorial(q)) / norm_in;
                out[base.with(ma, p).with(mb, q)] += amp * c;
            }
        }
    }
    return out;
}

PureState apply_bs(const PureState &state, const BeamSplitter &bs) {
    if (bs.port_a == bs.port_b) {
        throw ConfigError("beam splitter ports must differ");
    }
    check_unit(bs.transmittance, "transmittance");
    if (bs.reflection_sign != 1 && bs.reflection_sign != -1) {
        throw ConfigError("reflection_sign must be +1 or -1");
    }
    auto u = beam_splitter_matrix(bs);
    std::set<std::pair<int, int>> keys;
    for (const auto &m : state.modes()) {
        if ((m.spatial == bs.port_a || m.spatial == bs.port_b) && (!bs.time_bin || m.time_bin == *bs.time_bin)) {
            keys.insert({m.time_bin, m.internal});
        }
    }
    TermMap cur = state.terms();
    for (const auto &[t, i] : keys) {
        cur = couple_pair(cur, ModeLabel{bs.port_a, t, i}, ModeLabel{bs.port_b, t, i}, u);
    }
    return PureState(std::move(cur), state.prune_tol());
}

PureState apply_phase(const PureState &state, const PhaseShift &ps) {
    TermMap out;
    for (const auto &[basis, amp] : state.terms()) {
        int n = 0;
        for (const auto &[m, k] : basis.occupations()) {
            if (m.spatial == ps.port && (!ps.time_bin || m.time_bin == *ps.time_bin)) {
                n += k;
            }
        }
        out.emplace(basis, n == 0 ? amp : amp * std::polar(1.0, n * ps.phi));
    }
    return PureState(std::move(out), state.prune_tol());
}

PureState apply_delay(const PureState &state, const Delay &d) {
    TermMap out;
    for (const auto &[basis, amp] : state.terms()) {
        auto occ = basis.occupations();
        for (auto &[m, k] : occ) {
            if (m.spatial == d.port) {
                m.time_bin += d.bins;
                if (m.time_bin < 0) {
                    throw DomainError("delay moves a photon to negative time bin on port " + std::to_string(d.port));
                }
            }
        }
        out[FockBasisState(std::move(occ))] += amp;
    }
    return PureState(std::move(out), state.prune_tol());
}

}  // namespace

PureState apply_element(const PureState &state, const Element &element) {
    check_photons(state);
    return std::visit(
        [&](const auto &e) -> PureState {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, BeamSplitter>) {
                return apply_bs(state, e);
            } else if constexpr (std::is_same_v<T, PhaseShift>) {
                return apply_phase(state, e);
            } else {
                return apply_delay(state, e);
            }
        },
        element);
}

PureState run_circuit(const PureState &state, const Circuit &circuit) {
    PureState cur = state;
    for (const auto &e : circuit) {
        cur = apply_element(cur, e);
    }
    return cur;
}

Ensemble run_circuit(const Ensemble &state, const Circuit &circuit) {
    std::vector<WeightedState> out;
    for (const auto &c : state.components()) {
        out.push_back({c.weight, run_circuit(c.state, circuit)});
    }
    return Ensemble(std::move(out));
}

Ensemble apply_purity(const PureState &pure, double lambda, double alpha) {
    check_unit(lambda, "lambda");
    check_unit(alpha, "alpha");
    std::map<FockBasisState, Amplitude> one;
    Amplitude vac = 0;
    for (const auto &[basis, amp] : pure.terms()) {
        int n = basis.total_photons();
        if (n == 0) {
            vac = amp;
        } else if (n == 1) {
            one.emplace(basis, amp);
        } else {
            throw DomainError("apply_purity expects a vacuum-one-photon state");
        }
    }
    if (std::abs(std::norm(vac) - alpha * alpha) > 1e-9) {
        throw DomainError("vacuum weight of the state does not match alpha^2");
    }
    std::vector<WeightedState> comps;
    comps.push_back({lambda, pure});
    comps.push_back({(1 - lambda) * alpha * alpha, PureState()});
    double w1 = (1 - lambda) * (1 - alpha * alpha);
    if (w1 > 0 && !one.empty()) {
        comps.push_back({w1, PureState(std::move(one), pure.prune_tol()).normalized()});
    } else {
        comps.push_back({w1, PureState()});
    }
    return Ensemble(std::move(comps));
}

}  // namespace railsim
