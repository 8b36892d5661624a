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

#include "qrep/cli/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qrep/protocol.hpp"

namespace qrep::cli {

namespace {

using protocol::LinkConfig;
using protocol::LinkState;

constexpr double kPi = std::numbers::pi;

// Point-local stream: identical (seed, index) gives identical draws.
class PointRng {
   public:
    PointRng(std::uint64_t seed, std::uint64_t index) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
        engine_.seed(seq);
    }
    // Uniform on [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    optics::NoiseParams noise() {
        optics::NoiseParams n;
        n.theta = uniform() * kPi / 2.0;
        n.phi = uniform() * 2.0 * kPi;
        n.path_phase = uniform() * 2.0 * kPi;
        return n;
    }

   private:
    std::mt19937_64 engine_;
};

struct ChannelPair {
    optics::NoiseParams a;
    optics::NoiseParams b;
};

ChannelPair fixed_noise(const RunConfig &c) {
    return {{c.theta, c.phi, c.path_phase}, {c.theta_b, c.phi_b, c.path_phase_b}};
}

LinkConfig link_config(const RunConfig &c, const std::string &left, const std::string &right,
                       const ChannelPair &noise) {
    LinkConfig lc;
    lc.node_a = {c.chi, left};
    lc.node_b = {c.chi, right};
    lc.channel_a = {c.L0, c.Latt, noise.a};
    lc.channel_b = {c.L0, c.Latt, noise.b};
    lc.detector.efficiency_eta = c.eta;
    lc.cap = c.cap;
    return lc;
}

template <class F>
std::optional<double> guarded(F &&f) {
    try {
        return f();
    } catch (const std::domain_error &) {
        return std::nullopt;
    }
}

struct LinkOutcome {
    double probability = 0.0;
    LinkState link;
};

LinkOutcome run_link(const LinkConfig &lc) {
    const auto heralds = protocol::herald_all(lc);
    LinkOutcome o;
    for (const auto &[pattern, h] : heralds) {
        o.probability += h.probability;
    }
    o.link = protocol::heralded_mixture(heralds);
    return o;
}

void fill_link_metrics(ResultRow &row, const LinkOutcome &o) {
    row.p_succ = o.probability;
    row.bell_fidelity = guarded([&] { return protocol::bell_fidelity(o.link); });
    row.postselected_fidelity = guarded([&] {
        return protocol::postselected_fidelity(o.link, protocol::link_bell_state(o.link.left, o.link.right));
    });
}

ResultRow evaluate_chain(const RunConfig &c, int segments, std::optional<PointRng> &rng, ResultRow row) {
    std::vector<LinkState> links;
    std::optional<double> first_fidelity;
    for (int i = 0; i < segments; ++i) {
        ChannelPair noise = fixed_noise(c);
        if (rng) {
            noise = {rng->noise(), rng->noise()};
        }
        if (i == 0) {
            row.theta_a = noise.a.theta;
            row.phi_a = noise.a.phi;
            row.theta_b = noise.b.theta;
            row.phi_b = noise.b.phi;
        }
        const LinkOutcome o =
            run_link(link_config(c, "N" + std::to_string(i), "N" + std::to_string(i + 1), noise));
        if (o.link.ensemble.empty()) {
            row.p_succ = 0.0;
            return row;
        }
        if (i == 0) {
            first_fidelity = guarded([&] { return protocol::bell_fidelity(o.link); });
        }
        links.push_back(o.link);
    }
    const protocol::SwapResult r = protocol::chain_connect(links, {c.retrieval_eta, c.eta, false});
    row.p_succ = r.herald_probability;
    row.bell_fidelity = first_fidelity;
    if (r.herald_probability > 0.0) {
        row.postselected_fidelity = guarded([&] { return protocol::postselected_fidelity(r); });
        row.p2 = r.p2;
        row.p1 = r.p1;
        row.p0 = r.p0;
    }
    return row;
}

}  // namespace

const std::vector<std::string> &csv_columns() {
    static const std::vector<std::string> cols{"theta_a", "phi_a",  "theta_b",       "phi_b",
                                               "chi",     "eta",    "retrieval_eta", "L0",
                                               "Latt",    "p_succ", "bell_fidelity", "postselected_fidelity",
                                               "p2",      "p1",     "p0"};
    return cols;
}

double ResultRow::column(const std::string &name) const {
    const std::map<std::string, double> inputs{{"theta_a", theta_a}, {"phi_a", phi_a}, {"theta_b", theta_b},
                                               {"phi_b", phi_b},     {"chi", chi},     {"eta", eta},
                                               {"retrieval_eta", retrieval_eta},     {"L0", L0},
                                               {"Latt", Latt}};
    if (auto it = inputs.find(name); it != inputs.end()) {
        return it->second;
    }
    const std::map<std::string, const std::optional<double> *> metrics{
        {"p_succ", &p_succ}, {"bell_fidelity", &bell_fidelity}, {"postselected_fidelity", &postselected_fidelity},
        {"p2", &p2},         {"p1", &p1},                       {"p0", &p0}};
    auto it = metrics.find(name);
    if (it == metrics.end()) {
        throw std::out_of_range("unknown column '" + name + "'");
    }
    if (!it->second->has_value()) {
        throw std::domain_error("column '" + name + "' is empty");
    }
    return **it->second;
}

ResultRow evaluate_point(const RunConfig &c, std::uint64_t point_index) {
    c.validate();
    std::optional<PointRng> rng;
    if (c.samples > 0) {
        rng.emplace(c.seed, point_index);
    }
    ResultRow row;
    row.theta_a = c.theta;
    row.phi_a = c.phi;
    row.theta_b = c.theta_b;
    row.phi_b = c.phi_b;
    row.chi = c.chi;
    row.eta = c.eta;
    row.retrieval_eta = c.retrieval_eta;
    row.L0 = c.L0;
    row.Latt = c.Latt;

    int segments = c.segments;
    if (c.command == Command::kSwap) {
        segments = 2;
    } else if (c.command == Command::kGenerate || c.command == Command::kDecompose) {
        segments = 1;
    }
    if (segments >= 2) {
        return evaluate_chain(c, segments, rng, row);
    }
    ChannelPair noise = fixed_noise(c);
    if (rng) {
        noise = {rng->noise(), rng->noise()};
        row.theta_a = noise.a.theta;
        row.phi_a = noise.a.phi;
        row.theta_b = noise.b.theta;
        row.phi_b = noise.b.phi;
    }
    fill_link_metrics(row, run_link(link_config(c, "A", "B", noise)));
    return row;
}

std::vector<ResultRow> run_sweep(const RunConfig &cfg) {
    cfg.validate();
    std::vector<std::vector<double>> axes;
    size_t points = 1;
    for (const auto &g : cfg.grids) {
        axes.push_back(g.values());
        points *= axes.back().size();
    }
    const size_t draws = cfg.samples > 0 ? static_cast<size_t>(cfg.samples) : 1;
    std::vector<ResultRow> rows;
    rows.reserve(points * draws);
    for (size_t p = 0; p < points; ++p) {
        RunConfig point = cfg;
        size_t rest = p;
        for (size_t k = axes.size(); k-- > 0;) {
            point.set(cfg.grids[k].name, axes[k][rest % axes[k].size()]);
            rest /= axes[k].size();
        }
        for (size_t s = 0; s < draws; ++s) {
            rows.push_back(evaluate_point(point, p * draws + s));
        }
    }
    return rows;
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_csv(std::ostream &os, const std::vector<ResultRow> &rows) {
    const auto &cols = csv_columns();
    for (size_t k = 0; k < cols.size(); ++k) {
        os << (k ? "," : "") << cols[k];
    }
    os << '\n';
    for (const auto &r : rows) {
        for (size_t k = 0; k < cols.size(); ++k) {
            if (k) {
                os << ',';
            }
            try {
                os << format_number(r.column(cols[k]));
            } catch (const std::domain_error &) {
            }
        }
        os << '\n';
    }
    if (!os) {
        throw std::runtime_error("failed to write CSV");
    }
}

FitResult fit_scaling(const std::vector<ResultRow> &rows, const std::string &x_column, FitMode mode) {
    if (rows.size() < 3) {
        throw std::invalid_argument("fit_scaling: need at least 3 rows");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto &r : rows) {
        const double p = r.column("p_succ");
        double x = r.column(x_column);
        if (!(p > 0.0)) {
            throw std::invalid_argument("fit_scaling: p_succ must be positive");
        }
        if (mode == FitMode::kPower) {
            if (!(x > 0.0)) {
                throw std::invalid_argument("fit_scaling: power fit needs positive " + x_column);
            }
            x = std::log(x);
        }
        xs.push_back(x);
        ys.push_back(std::log(p));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / n;
        my += ys[i] / n;
    }
    double sxx = 0.0;
    double sxy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    for (size_t i = 0; i < xs.size(); ++i) {
        for (size_t j = i + 1; j < xs.size(); ++j) {
            if (xs[i] == xs[j]) {
                throw std::invalid_argument("fit_scaling: repeated " + x_column + " values");
            }
        }
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("fit_scaling: degenerate " + x_column + " values");
    }
    FitResult f;
    f.coefficient = sxy / sxx;
    f.intercept = my - f.coefficient * mx;
    for (size_t i = 0; i < xs.size(); ++i) {
        f.residual = std::max(f.residual, std::abs(ys[i] - (f.intercept + f.coefficient * xs[i])));
    }
    return f;
}

std::vector<std::string> summary_lines(const RunConfig &cfg, const std::vector<ResultRow> &rows) {
    std::vector<std::string> out;
    if (cfg.command == Command::kDecompose) {
        // Sector weights of the left node after its channel, per grid point.
        for (size_t i = 0; i < rows.size(); ++i) {
            const auto &r = rows[i];
            const protocol::NodeConfig node{r.chi, "A"};
            const optics::ChannelParams channel{r.L0, r.Latt, {r.theta_a, r.phi_a, 0.0}};
            double w[4] = {0.0, 0.0, 0.0, 0.0};
            for (const auto &b : protocol::propagate_to_midpoint(protocol::write_node(node, "R"), channel,
                                                                 QubitRef{"A", "R"})) {
                const auto s = protocol::decompose_timebins(b.state);
                w[0] += b.probability * s.vacuum.squared_norm();
                w[1] += b.probability * s.bin1.squared_norm();
                w[2] += b.probability * s.bin02.squared_norm();
                w[3] += b.probability * s.cross.squared_norm();
            }
            out.push_back("point=" + std::to_string(i) + " weight_vacuum=" + format_number(w[0]) +
                          " weight_bin1=" + format_number(w[1]) + " weight_bin02=" + format_number(w[2]) +
                          " weight_cross=" + format_number(w[3]));
        }
    }
    if (cfg.samples > 0) {
        return out;
    }
    const Grid *fit_grid = nullptr;
    int long_grids = 0;
    for (const auto &g : cfg.grids) {
        if (g.count >= 3) {
            ++long_grids;
            fit_grid = &g;
        }
    }
    if (long_grids != 1) {
        return out;
    }
    FitMode mode;
    if (fit_grid->name == "chi" || fit_grid->name == "eta") {
        mode = FitMode::kPower;
    } else if (fit_grid->name == "L0") {
        mode = FitMode::kLogLinear;
    } else {
        return out;
    }
    try {
        const FitResult f = fit_scaling(rows, fit_grid->name, mode);
        out.push_back("fit_x=" + fit_grid->name);
        out.push_back(std::string("fit_mode=") + (mode == FitMode::kPower ? "power" : "log_linear"));
        out.push_back("fit_coefficient=" + format_number(f.coefficient));
        out.push_back("fit_intercept=" + format_number(f.intercept));
        out.push_back("fit_residual=" + format_number(f.residual));
    } catch (const std::exception &e) {
        out.push_back(std::string("fit_error=") + e.what());
    }
    return out;
}

}  // namespace qrep::cli
