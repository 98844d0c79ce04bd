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

#ifndef RAILSIM_FOCK_H
#define RAILSIM_FOCK_H

#include <array>
#include <compare>
#include <complex>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace railsim {

using Amplitude = std::complex<double>;

/// Largest total photon number any state may carry.
constexpr int kMaxPhotons = 8;

/// A bosonic mode: spatial port, time bin (units of the pulse period) and an
/// internal label. Internal 0 is the principal mode; larger labels are
/// fictitious modes that carry the distinguishable part of a photon.
struct ModeLabel {
    int spatial = 0;
    int time_bin = 0;
    int internal = 0;

    auto operator<=>(const ModeLabel &) const = default;
    bool operator==(const ModeLabel &) const = default;

    /// "(spatial,time,internal)".
    std::string str() const;
};

/// Occupation numbers over modes. Stored sorted by mode, zeros dropped.
class FockBasisState {
   public:
    FockBasisState() = default;
    /// Canonicalizes: sorts, merges repeated modes, drops zeros.
    explicit FockBasisState(std::vector<std::pair<ModeLabel, int>> occupations);

    const std::vector<std::pair<ModeLabel, int>> &occupations() const {
        return occ_;
    }
    int occupation(const ModeLabel &mode) const;
    int total_photons() const;
    bool is_vacuum() const {
        return occ_.empty();
    }
    /// Copy with the occupation of `mode` replaced by `n`.
    FockBasisState with(const ModeLabel &mode, int n) const;

    /// "(s,t,i):n (s,t,i):n ..." in canonical order; empty for vacuum.
    std::string str() const;
    static FockBasisState parse(std::string_view text);

    auto operator<=>(const FockBasisState &) const = default;
    bool operator==(const FockBasisState &) const = default;

   private:
    std::vector<std::pair<ModeLabel, int>> occ_;
};

/// Sparse superposition of basis states. Immutable.
class PureState {
   public:
    static constexpr double kDefaultPruneTol = 1e-15;

    /// The vacuum.
    PureState();
    explicit PureState(std::map<FockBasisState, Amplitude> terms, double prune_tol = kDefaultPruneTol);
    static PureState basis(const FockBasisState &state);

    const std::map<FockBasisState, Amplitude> &terms() const {
        return terms_;
    }
    double prune_tol() const {
        return prune_tol_;
    }
    Amplitude amplitude(const FockBasisState &state) const;
    double norm_sq() const;
    PureState normalized() const;
    int max_photons() const;
    std::set<ModeLabel> modes() const;

    /// Product state; the two mode sets must be disjoint.
    PureState tensor(const PureState &other) const;

    /// One term per line: "<re> <im> | (s,t,i):n ...".
    std::string to_text() const;
    static PureState from_text(std::string_view text, double prune_tol = kDefaultPruneTol);

   private:
    std::map<FockBasisState, Amplitude> terms_;
    double prune_tol_ = kDefaultPruneTol;
};

struct WeightedState {
    double weight;
    PureState state;
};

/// Classical mixture of normalized pure states.
class Ensemble {
   public:
    explicit Ensemble(std::vector<WeightedState> components);
    Ensemble(const PureState &pure);  // NOLINT: implicit single component

    const std::vector<WeightedState> &components() const {
        return components_;
    }
    /// Product of mixtures; zero-weight products are dropped.
    Ensemble tensor(const Ensemble &other) const;

   private:
    std::vector<WeightedState> components_;
};

/// Couples (port_a, t, i) with (port_b, t, i) for every time bin t and
/// internal label i, or only for t == *time_bin when set. Creation operators
/// map as a -> t a + r b and b -> s (r a - t b).
struct BeamSplitter {
    int port_a;
    int port_b;
    double transmittance = 0.5;
    int reflection_sign = +1;
    std::optional<int> time_bin;
};

/// Multiplies each term by exp(i n phi), n the photon number on the port.
struct PhaseShift {
    int port;
    double phi;
    std::optional<int> time_bin;
};

/// Moves every photon on the port by `bins` time bins.
struct Delay {
    int port;
    int bins;
};

using Element = std::variant<BeamSplitter, PhaseShift, Delay>;
using Circuit = std::vector<Element>;

PureState make_qubit_state(double alpha, double delta, const ModeLabel &mode);
PureState make_distinguishable_qubit(
    double alpha, double delta, double x, const ModeLabel &mode, int fictitious_internal);

PureState apply_element(const PureState &state, const Element &element);
PureState run_circuit(const PureState &state, const Circuit &circuit);
Ensemble run_circuit(const Ensemble &state, const Circuit &circuit);

/// Mixes a single-source qubit state with its dephased counterpart:
/// weights lambda, (1-lambda) alpha^2 on vacuum, (1-lambda)(1-alpha^2) on the
/// one-photon part of `pure`.
Ensemble apply_purity(const PureState &pure, double lambda, double alpha);

/// Entries of the 2x2 transfer matrix of a beam splitter, row major.
std::array<double, 4> beam_splitter_matrix(const BeamSplitter &bs);

}  // namespace railsim

#endif
