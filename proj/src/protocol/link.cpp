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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qrep/protocol.hpp"

namespace qrep::protocol {

using optics::Detector;
using optics::DetectorParams;

namespace {

Registry photonic_modes(const FockState &s) {
    Registry r;
    for (const auto &m : s.registry()) {
        if (m.is_photonic()) {
            r.push_back(m);
        }
    }
    return r;
}

// Conditional states, weighted by unnormalized probability.
struct RawBranch {
    double probability;
    FockState state;
};

}  // namespace

void NodeConfig::validate() const {
    if (!(chi > 0.0 && chi < 0.5)) {
        throw std::invalid_argument("chi must lie in (0, 0.5)");
    }
    if (id.empty()) {
        throw std::invalid_argument("node id must be nonempty");
    }
}

void LinkConfig::validate() const {
    node_a.validate();
    node_b.validate();
    if (node_a.id == node_b.id) {
        throw std::invalid_argument("link nodes must be distinct");
    }
    channel_a.validate();
    channel_b.validate();
    detector.validate();
    if (cap < 0) {
        throw std::invalid_argument("cap must be >= 0");
    }
}

bool is_heralding(const ClickPattern &p) {
    for (int c : p) {
        if (c != 0 && c != 1) {
            return false;
        }
    }
    return p[0] + p[1] == 1 && p[2] + p[3] == 1;
}

std::vector<ClickPattern> heralding_patterns() {
    return {ClickPattern{1, 0, 1, 0}, ClickPattern{1, 0, 0, 1}, ClickPattern{0, 1, 1, 0}, ClickPattern{0, 1, 0, 1}};
}

std::string to_string(const ClickPattern &p) {
    std::string s;
    for (size_t k = 0; k < p.size(); ++k) {
        if (p[k] != 0) {
            s += "D" + std::to_string(k + 1);
        }
    }
    return s.empty() ? "none" : s;
}

ClickPattern parse_pattern(const std::string &label) {
    ClickPattern p{};
    size_t i = 0;
    while (i < label.size()) {
        if (label[i] != 'D' || i + 1 >= label.size() || label[i + 1] < '1' || label[i + 1] > '4') {
            throw std::invalid_argument("malformed detector pattern '" + label + "'");
        }
        p[static_cast<size_t>(label[i + 1] - '1')] = 1;
        i += 2;
    }
    return p;
}

const FockState &HeraldedLink::state() const {
    if (link.ensemble.empty()) {
        throw std::domain_error("pattern " + to_string(pattern) + " never heralds");
    }
    auto it = std::max_element(link.ensemble.begin(), link.ensemble.end(),
                               [](const WeightedState &a, const WeightedState &b) { return a.weight < b.weight; });
    return it->state;
}

FockState TimeBinSectors::sum() const {
    return vacuum + bin1 + bin02 + cross;
}

FockState write_node(const NodeConfig &cfg, const std::string &qubit) {
    cfg.validate();
    const QubitRef q{cfg.id, qubit};
    const ModeId s_u = q.u();
    const ModeId s_d = q.d();
    const ModeId a_v = ModeId::photon(cfg.id, Polarization::kV, 0, qubit);
    const ModeId a_h = ModeId::photon(cfg.id, Polarization::kH, 0, qubit);

    const double rc = std::sqrt(cfg.chi);
    auto raman = [&](const ModeId &atom, const ModeId &photon) {
        CreationPolynomial p;
        p.add(1.0, {});
        p.add(rc, {atom, photon});
        p.add(cfg.chi / 2.0, {atom, atom, photon, photon});
        return p;
    };

    FockState s = FockState::vacuum({s_u, s_d, a_v, a_h}, kNodeCap);
    s = apply_polynomial(s, raman(s_u, a_v));
    s = apply_polynomial(s, raman(s_d, a_h));
    return optics::node_delay(s, cfg.id);
}

std::string midpoint_location(const QubitRef &side) {
    return kMidpoint + ":" + side.str();
}

std::vector<MeasurementBranch> propagate_to_midpoint(const FockState &state, const optics::ChannelParams &channel,
                                                     const QubitRef &side) {
    channel.validate();
    FockState noisy = optics::apply_channel_noise(state, side.node, side.qubit, channel.noise);

    Registry channel_modes;
    for (const auto &m : noisy.registry()) {
        if (m.is_photonic() && m.location == side.node && m.port == side.qubit) {
            channel_modes.push_back(m);
        }
    }
    auto branches = optics::attenuate(noisy, channel_modes, channel.half_link_transmittance());

    const std::string mid = midpoint_location(side);
    const ModeId h_out = ModeId::photon(mid, Polarization::kH, 0, "H");
    const ModeId v_out = ModeId::photon(mid, Polarization::kV, 0, "V");
    for (auto &b : branches) {
        std::vector<int> bins;
        for (const auto &m : b.state.registry()) {
            if (m.is_photonic() && m.location == side.node && m.port == side.qubit &&
                m.polarization == Polarization::kH) {
                bins.push_back(m.time_bin);
            }
        }
        std::vector<ModeTransform> split;
        for (int bin : bins) {
            split.push_back(optics::polarization_split(ModeId::photon(side.node, Polarization::kH, bin, side.qubit),
                                                       h_out.with_time_bin(bin), v_out.with_time_bin(bin)));
        }
        b.state = optics::midpoint_delay(apply_network(b.state, split), mid);
    }
    return branches;
}

TimeBinSectors decompose_timebins(const FockState &state) {
    std::vector<int> bin_of(state.registry().size(), -1);
    for (size_t i = 0; i < state.registry().size(); ++i) {
        if (state.registry()[i].is_photonic()) {
            bin_of[i] = state.registry()[i].time_bin;
        }
    }
    enum Sector { kVac, kBin1, kBin02, kCross };
    auto sector_of = [&](const Occupation &occ) {
        bool in1 = false;
        bool in02 = false;
        for (size_t i = 0; i < occ.size(); ++i) {
            if (occ[i] == 0 || bin_of[i] < 0) {
                continue;
            }
            (bin_of[i] == 1 ? in1 : in02) = true;
        }
        if (in1 && in02) {
            return kCross;
        }
        if (in1) {
            return kBin1;
        }
        return in02 ? kBin02 : kVac;
    };
    auto part = [&](Sector s) { return state.filtered([&](const Occupation &o) { return sector_of(o) == s; }); };
    return TimeBinSectors{part(kVac), part(kBin1), part(kBin02), part(kCross)};
}

MidpointNetwork build_midpoint_network(const QubitRef &a, const QubitRef &b, const DetectorParams &params) {
    params.validate();
    const std::string mid_a = midpoint_location(a);
    const std::string mid_b = midpoint_location(b);
    MidpointNetwork net;
    // H outputs reach bins 1 and 2, V outputs bins 0 and 1.
    for (int bin = 0; bin <= 2; ++bin) {
        net.transforms.push_back(optics::beam_splitter(ModeId::photon(mid_a, Polarization::kH, bin, "H"),
                                                       ModeId::photon(mid_b, Polarization::kH, bin, "H"),
                                                       ModeId::photon(kMidpoint, Polarization::kH, bin, "D1"),
                                                       ModeId::photon(kMidpoint, Polarization::kH, bin, "D2")));
        net.transforms.push_back(optics::beam_splitter(ModeId::photon(mid_a, Polarization::kV, bin, "V"),
                                                       ModeId::photon(mid_b, Polarization::kV, bin, "V"),
                                                       ModeId::photon(kMidpoint, Polarization::kV, bin, "D3"),
                                                       ModeId::photon(kMidpoint, Polarization::kV, bin, "D4")));
    }
    const std::array<std::pair<const char *, Polarization>, 4> dets{
        {{"D1", Polarization::kH}, {"D2", Polarization::kH}, {"D3", Polarization::kV}, {"D4", Polarization::kV}}};
    for (const auto &[name, pol] : dets) {
        Detector d;
        d.name = name;
        d.params = params;
        for (int bin = 0; bin <= 2; ++bin) {
            d.modes.push_back(ModeId::photon(kMidpoint, pol, bin, name));
        }
        net.detectors.push_back(std::move(d));
    }
    return net;
}

std::map<ClickPattern, HeraldedLink> herald_all(const LinkConfig &cfg) {
    cfg.validate();
    const QubitRef qa = cfg.qubit_a();
    const QubitRef qb = cfg.qubit_b();
    const FockState link = FockState::tensor(write_node(cfg.node_a, qa.qubit), write_node(cfg.node_b, qb.qubit), cfg.cap);
    const double norm2 = link.squared_norm();
    const MidpointNetwork net = build_midpoint_network(qa, qb, cfg.detector);

    std::map<ClickPattern, std::vector<RawBranch>> collected;
    for (const auto &ba : propagate_to_midpoint(link, cfg.channel_a, qa)) {
        for (const auto &bb : propagate_to_midpoint(ba.state, cfg.channel_b, qb)) {
            const double p_ab = ba.probability * bb.probability;
            FockState at_detectors = apply_network(bb.state, net.transforms);
            for (auto &db : optics::detect(at_detectors, net.detectors)) {
                ClickPattern pattern{db.outcome[0], db.outcome[1], db.outcome[2], db.outcome[3]};
                if (!is_heralding(pattern)) {
                    continue;
                }
                const double p_abd = p_ab * db.probability;
                Registry unobserved = photonic_modes(db.state);
                if (unobserved.empty()) {
                    collected[pattern].push_back({p_abd, db.state});
                    continue;
                }
                for (auto &tb : trace_out(db.state, unobserved)) {
                    collected[pattern].push_back({p_abd * tb.probability, std::move(tb.state)});
                }
            }
        }
    }

    std::map<ClickPattern, HeraldedLink> out;
    for (const auto &pattern : heralding_patterns()) {
        HeraldedLink h;
        h.pattern = pattern;
        h.link.left = qa;
        h.link.right = qb;
        // D1D4 and D2D3 carry S_uA S_dB - S_dA S_uB; a π phase on d_B undoes it.
        const bool odd = (pattern[0] == 1) != (pattern[2] == 1);
        if (odd) {
            h.sign_correction = SignCorrection{true, qb.d(), std::numbers::pi};
        }
        const ModeTransform fix({qb.d()}, {qb.d()}, Eigen::MatrixXcd::Constant(1, 1, -1.0));
        double total = 0.0;
        std::vector<WeightedState> ens;
        for (auto &rb : collected[pattern]) {
            FockState s = rb.state.reordered(h.link.registry());
            if (odd) {
                s = apply_transform(s, fix);
            }
            total += rb.probability;
            ens.push_back({rb.probability, std::move(s)});
        }
        h.probability = total / norm2;
        if (total > 0.0) {
            for (auto &w : ens) {
                w.weight /= total;
            }
        }
        h.link.ensemble = compact(std::move(ens));
        out.emplace(pattern, std::move(h));
    }
    return out;
}

HeraldedLink generate_entanglement(const LinkConfig &cfg, const ClickPattern &pattern) {
    if (!is_heralding(pattern)) {
        throw std::invalid_argument("not a heralding pattern: " + to_string(pattern));
    }
    auto all = herald_all(cfg);
    return all.at(pattern);
}

LinkState heralded_mixture(const std::map<ClickPattern, HeraldedLink> &heralds) {
    if (heralds.empty()) {
        throw std::invalid_argument("heralded_mixture: no heralds");
    }
    LinkState mixed;
    mixed.left = heralds.begin()->second.link.left;
    mixed.right = heralds.begin()->second.link.right;
    double total = 0.0;
    for (const auto &[pattern, h] : heralds) {
        total += h.probability;
    }
    if (!(total > 0.0)) {
        return mixed;
    }
    std::vector<WeightedState> ens;
    for (const auto &[pattern, h] : heralds) {
        for (const auto &w : h.link.ensemble) {
            ens.push_back({w.weight * h.probability / total, w.state});
        }
    }
    mixed.ensemble = spectral_compact(ens);
    return mixed;
}

double total_herald_probability(const LinkConfig &cfg) {
    double p = 0.0;
    for (const auto &[pattern, h] : herald_all(cfg)) {
        p += h.probability;
    }
    return p;
}

double cross_term_coincidence_check(const LinkConfig &cfg) {
    cfg.validate();
    const QubitRef qa = cfg.qubit_a();
    const QubitRef qb = cfg.qubit_b();
    const FockState node_a = write_node(cfg.node_a, qa.qubit);
    const FockState node_b = write_node(cfg.node_b, qb.qubit);
    const double norm2 = FockState::tensor(node_a, node_b, cfg.cap).squared_norm();
    const MidpointNetwork net = build_midpoint_network(qa, qb, cfg.detector);

    // Cross part of one node (after its channel) next to the other node's
    // vacuum component. The two orderings give orthogonal atomic states, so
    // their probabilities add.
    auto contribution = [&](const FockState &noisy_node, const optics::ChannelParams &noisy_channel,
                            const QubitRef &noisy_side, const FockState &quiet_node, bool noisy_is_a) {
        const FockState quiet_vac = decompose_timebins(quiet_node).vacuum;
        double p = 0.0;
        for (const auto &nb : propagate_to_midpoint(noisy_node, noisy_channel, noisy_side)) {
            FockState cross = decompose_timebins(nb.state).cross;
            if (cross.empty()) {
                continue;
            }
            FockState joint = noisy_is_a ? FockState::tensor(cross, quiet_vac, cfg.cap)
                                         : FockState::tensor(quiet_vac, cross, cfg.cap);
            for (const auto &db : optics::detect(apply_network(joint, net.transforms), net.detectors)) {
                ClickPattern pattern{db.outcome[0], db.outcome[1], db.outcome[2], db.outcome[3]};
                if (is_heralding(pattern)) {
                    p += nb.probability * db.probability;
                }
            }
        }
        return p;
    };
    double p = contribution(node_a, cfg.channel_a, qa, node_b, true) +
               contribution(node_b, cfg.channel_b, qb, node_a, false);
    return p / norm2;
}

FockState link_bell_state(const QubitRef &left, const QubitRef &right) {
    const double r = 1.0 / std::sqrt(2.0);
    return FockState::from_amplitudes({left.u(), left.d(), right.u(), right.d()}, 2,
                                      {{{1, 0, 0, 1}, r}, {{0, 1, 1, 0}, r}});
}

FockState swap_bell_state(const QubitRef &left, const QubitRef &right) {
    const double r = 1.0 / std::sqrt(2.0);
    return FockState::from_amplitudes({left.u(), left.d(), right.u(), right.d()}, 2,
                                      {{{1, 0, 1, 0}, r}, {{0, 1, 0, 1}, r}});
}

FockState bell_component(const FockState &state, const QubitRef &left, const QubitRef &right) {
    const size_t ua = state.index_of(left.u());
    const size_t da = state.index_of(left.d());
    const size_t ub = state.index_of(right.u());
    const size_t db = state.index_of(right.d());
    return state.filtered([&](const Occupation &o) {
        if (total_excitation(o) != 2) {
            return false;
        }
        return (o[ua] == 1 && o[db] == 1) || (o[da] == 1 && o[ub] == 1);
    });
}

double bell_fidelity(const LinkState &link) {
    const FockState target = link_bell_state(link.left, link.right);
    double num = 0.0;
    double den = 0.0;
    for (const auto &w : link.ensemble) {
        FockState b = bell_component(w.state, link.left, link.right);
        const double n2 = b.squared_norm();
        if (!(n2 > 0.0)) {
            continue;
        }
        num += w.weight * std::norm(inner_product(target, b.reordered(target.registry())));
        den += w.weight * n2;
    }
    if (!(den > 0.0)) {
        throw std::domain_error("bell_fidelity: no Bell-sector weight");
    }
    return num / den;
}

double bell_channel_probability(const HeraldedLink &link) {
    double weight = 0.0;
    for (const auto &w : link.link.ensemble) {
        weight += w.weight * bell_component(w.state, link.link.left, link.link.right).squared_norm();
    }
    return link.probability * weight;
}

double postselected_fidelity(const LinkState &link, const FockState &target) {
    const Registry reg = link.registry();
    double num = 0.0;
    double den = 0.0;
    for (const auto &w : link.ensemble) {
        const FockState s = w.state.reordered(reg);
        FockState restricted =
            s.filtered([](const Occupation &o) { return o[0] + o[1] == 1 && o[2] + o[3] == 1; });
        const double n2 = restricted.squared_norm();
        if (!(n2 > 0.0)) {
            continue;
        }
        num += w.weight * std::norm(inner_product(target.reordered(reg), restricted));
        den += w.weight * n2;
    }
    if (!(den > 0.0)) {
        throw std::domain_error("postselected_fidelity: no weight in the one-excitation-per-node subspace");
    }
    return num / den;
}

}  // namespace qrep::protocol
