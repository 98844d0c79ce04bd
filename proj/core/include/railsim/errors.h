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

#ifndef RAILSIM_ERRORS_H
#define RAILSIM_ERRORS_H

#include <stdexcept>

namespace railsim {

/// A numeric argument is outside the domain of the operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Wiring, detector or option configuration is inconsistent.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The requested herald has (numerically) zero probability.
struct ImpossibleHerald : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Four swapping visibilities that no real parameter set can produce.
struct InconsistentVisibilities : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A fit produced parameters outside their physical range.
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Every probability of a fringe scan was zero.
struct NoSignal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace railsim

#endif
