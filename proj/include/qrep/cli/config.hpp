// Copyright 2026 The qrep Authors
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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrep::cli {

enum class Command { kGenerate, kDecompose, kSwap, kChain, kSweep };

const char *to_string(Command c);

/// Invalid flags, unknown config keys, out-of-range values, missing command.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// --help was given; `text` holds the rendered usage.
struct HelpRequested {
    std::string text;
};

/// Evenly spaced values of one parameter, endpoints included.
struct Grid {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    std::vector<double> values() const;
};

/// Parses "name=start:stop:count". A bare "name=value" is a one-point grid.
Grid parse_grid(const std::string &spec);

/// Parameter names accepted by --grid.
const std::vector<std::string> &grid_parameters();

struct RunConfig {
    Command command = Command::kSweep;
    double chi = 0.01;
    double eta = 1.0;
    double retrieval_eta = 1.0;
    double L0 = 0.0;
    double Latt = 22.0;
    double theta = 0.0;  // channel of the left node of every link
    double phi = 0.0;
    double path_phase = 0.0;
    double theta_b = 0.0;  // channel of the right node
    double phi_b = 0.0;
    double path_phase_b = 0.0;
    std::vector<Grid> grids;  // cartesian product, last grid varies fastest
    int samples = 0;          // > 0: random channel noise, this many draws per grid point
    std::uint64_t seed = 0;
    int segments = 1;
    int cap = 8;
    std::string out;  // empty: standard output

    /// Throws ConfigError.
    void validate() const;
    double get(const std::string &name) const;
    void set(const std::string &name, double value);
};

/// argv[0] is the program name. An optional `--config FILE` supplies
/// `key = value` lines (# comments); flags on the command line win.
RunConfig parse_config(const std::vector<std::string> &args);
RunConfig parse_config(int argc, const char *const *argv);

}  // namespace qrep::cli
