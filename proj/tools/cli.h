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


#ifndef RAILSIM_TOOLS_CLI_H
#define RAILSIM_TOOLS_CLI_H

#include <ostream>
#include <string>
#include <vector>

namespace railsim::cli {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

/// Runs one command line. args[0] is the program name. Primary data goes to
/// --out when given and to `out` otherwise; diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Splices "key = value" lines from a config file in as --key=value tokens
/// right after the subcommand so later command-line flags win.
std::vector<std::string> expand_config(const std::vector<std::string> &args);

}  // namespace railsim::cli

#endif
