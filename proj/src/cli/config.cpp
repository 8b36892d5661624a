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

#include "qrep/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include <CLI11.hpp>

namespace qrep::cli {

namespace {

double parse_double(const std::string &text, const std::string &what) {
    double v = 0.0;
    const char *end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("bad number '" + text + "' in " + what);
    }
    return v;
}

const std::map<std::string, Command> &command_names() {
    static const std::map<std::string, Command> names{{"generate", Command::kGenerate},
                                                      {"decompose", Command::kDecompose},
                                                      {"swap", Command::kSwap},
                                                      {"chain", Command::kChain},
                                                      {"sweep", Command::kSweep}};
    return names;
}

const char *command_help(Command c) {
    switch (c) {
    case Command::kGenerate: return "heralded link between two nodes";
    case Command::kDecompose: return "link metrics plus time-bin sector weights of the left node";
    case Command::kSwap: return "two links joined by one local swap";
    case Command::kChain: return "--segments links joined by nested swaps";
    case Command::kSweep: return "single links, or chains when --segments > 1";
    }
    return "";
}

const std::map<std::string, double RunConfig::*> &parameter_fields() {
    static const std::map<std::string, double RunConfig::*> fields{
        {"theta", &RunConfig::theta},     {"phi", &RunConfig::phi},     {"path_phase", &RunConfig::path_phase},
        {"theta_b", &RunConfig::theta_b}, {"phi_b", &RunConfig::phi_b}, {"path_phase_b", &RunConfig::path_phase_b},
        {"chi", &RunConfig::chi},         {"eta", &RunConfig::eta},     {"retrieval_eta", &RunConfig::retrieval_eta},
        {"L0", &RunConfig::L0},           {"Latt", &RunConfig::Latt}};
    return fields;
}

}  // namespace

const char *to_string(Command c) {
    for (const auto &[name, cmd] : command_names()) {
        if (cmd == c) {
            return name.c_str();
        }
    }
    return "?";
}

std::vector<double> Grid::values() const {
    if (count < 1) {
        throw ConfigError("grid '" + name + "' needs count >= 1");
    }
    if (count == 1) {
        return {start};
    }
    std::vector<double> v(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k) {
        v[static_cast<size_t>(k)] = start + (stop - start) * k / (count - 1);
    }
    v.back() = stop;
    return v;
}

const std::vector<std::string> &grid_parameters() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto &[name, field] : parameter_fields()) {
            v.push_back(name);
        }
        return v;
    }();
    return names;
}

Grid parse_grid(const std::string &spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("grid '" + spec + "' is not name=start:stop:count");
    }
    Grid g;
    g.name = spec.substr(0, eq);
    std::replace(g.name.begin(), g.name.end(), '-', '_');
    const auto &known = grid_parameters();
    if (std::find(known.begin(), known.end(), g.name) == known.end()) {
        throw ConfigError("unknown grid parameter '" + g.name + "'");
    }
    const std::string rest = spec.substr(eq + 1);
    std::vector<std::string> parts;
    size_t pos = 0;
    while (true) {
        const auto colon = rest.find(':', pos);
        parts.push_back(rest.substr(pos, colon - pos));
        if (colon == std::string::npos) {
            break;
        }
        pos = colon + 1;
    }
    if (parts.size() == 1) {
        g.start = g.stop = parse_double(parts[0], "grid " + g.name);
        g.count = 1;
    } else if (parts.size() == 3) {
        g.start = parse_double(parts[0], "grid " + g.name);
        g.stop = parse_double(parts[1], "grid " + g.name);
        const double c = parse_double(parts[2], "grid " + g.name);
        if (c != static_cast<int>(c) || c < 1) {
            throw ConfigError("grid '" + g.name + "' needs an integer count >= 1");
        }
        g.count = static_cast<int>(c);
    } else {
        throw ConfigError("grid '" + spec + "' is not name=start:stop:count");
    }
    return g;
}

double RunConfig::get(const std::string &name) const {
    auto it = parameter_fields().find(name);
    if (it == parameter_fields().end()) {
        throw ConfigError("unknown parameter '" + name + "'");
    }
    return this->*(it->second);
}

void RunConfig::set(const std::string &name, double value) {
    auto it = parameter_fields().find(name);
    if (it == parameter_fields().end()) {
        throw ConfigError("unknown parameter '" + name + "'");
    }
    this->*(it->second) = value;
}

void RunConfig::validate() const {
    auto check_point = [](const RunConfig &c, const std::string &where) {
        if (!(c.chi > 0.0 && c.chi < 0.5)) {
            throw ConfigError("chi must lie in (0, 0.5)" + where);
        }
        if (!(c.eta >= 0.0 && c.eta <= 1.0)) {
            throw ConfigError("eta must lie in [0, 1]" + where);
        }
        if (!(c.retrieval_eta >= 0.0 && c.retrieval_eta <= 1.0)) {
            throw ConfigError("retrieval-eta must lie in [0, 1]" + where);
        }
        if (!(c.L0 >= 0.0)) {
            throw ConfigError("L0 must be >= 0" + where);
        }
        if (!(c.Latt > 0.0)) {
            throw ConfigError("Latt must be > 0" + where);
        }
        for (double x : {c.theta, c.phi, c.path_phase, c.theta_b, c.phi_b, c.path_phase_b}) {
            if (!std::isfinite(x)) {
                throw ConfigError("noise parameters must be finite" + where);
            }
        }
    };
    check_point(*this, "");
    for (const auto &g : grids) {
        if (g.count < 1) {
            throw ConfigError("grid '" + g.name + "' needs count >= 1");
        }
        for (double v : {g.start, g.stop}) {
            RunConfig probe = *this;
            probe.set(g.name, v);
            check_point(probe, " (grid " + g.name + ")");
        }
    }
    for (size_t i = 0; i < grids.size(); ++i) {
        for (size_t j = i + 1; j < grids.size(); ++j) {
            if (grids[i].name == grids[j].name) {
                throw ConfigError("grid '" + grids[i].name + "' given twice");
            }
        }
    }
    if (samples < 0) {
        throw ConfigError("samples must be >= 0");
    }
    if (segments < 1 || (segments & (segments - 1)) != 0) {
        throw ConfigError("segments must be a power of two");
    }
    if (command == Command::kChain && segments < 2) {
        throw ConfigError("chain needs --segments >= 2");
    }
    if (cap < 4 || cap > 8) {
        throw ConfigError("cap must lie in [4, 8]");
    }
}

RunConfig parse_config(const std::vector<std::string> &args) {
    RunConfig cfg;
    std::vector<std::string> grid_specs;

    CLI::App app{"Polarization-noise-robust quantum repeater simulator", args.empty() ? "qrepeater" : args[0]};
    app.set_config("--config", "", "key = value file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.add_option("--chi", cfg.chi, "write excitation probability")->capture_default_str();
    app.add_option("--eta", cfg.eta, "detector efficiency")->capture_default_str();
    app.add_option("--retrieval-eta", cfg.retrieval_eta, "memory retrieval efficiency")->capture_default_str();
    app.add_option("--L0", cfg.L0, "node-to-node distance")->capture_default_str();
    app.add_option("--Latt", cfg.Latt, "channel attenuation length")->capture_default_str();
    app.add_option("--theta", cfg.theta, "noise angle, left channel")->capture_default_str();
    app.add_option("--phi", cfg.phi, "noise phase, left channel")->capture_default_str();
    app.add_option("--path-phase", cfg.path_phase, "common phase, left channel")->capture_default_str();
    app.add_option("--theta-b", cfg.theta_b, "noise angle, right channel")->capture_default_str();
    app.add_option("--phi-b", cfg.phi_b, "noise phase, right channel")->capture_default_str();
    app.add_option("--path-phase-b", cfg.path_phase_b, "common phase, right channel")->capture_default_str();
    app.add_option("--grid", grid_specs, "name=start:stop:count, repeatable");
    app.add_option("--samples", cfg.samples, "random noise draws per grid point")->capture_default_str();
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    app.add_option("--segments", cfg.segments, "links in a chain (power of two)")->capture_default_str();
    app.add_option("--cap", cfg.cap, "global excitation cap of a link")->capture_default_str();
    app.add_option("--out", cfg.out, "CSV output path (default: stdout)");
    app.require_subcommand(1);
    for (const auto &[name, cmd] : command_names()) {
        app.add_subcommand(name, command_help(cmd))->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
        reversed.pop_back();
    }
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError &e) {
        throw ConfigError(e.what());
    }
    cfg.command = command_names().at(app.get_subcommands().front()->get_name());
    for (const auto &spec : grid_specs) {
        cfg.grids.push_back(parse_grid(spec));
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config(int argc, const char *const *argv) {
    return parse_config(std::vector<std::string>(argv, argv + argc));
}

}  // namespace qrep::cli
