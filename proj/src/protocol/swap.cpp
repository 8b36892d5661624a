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

#include <cmath>
#include <stdexcept>

#include "qrep/protocol.hpp"

namespace qrep::protocol {

namespace {

struct SwapBranch {
    double probability;  // unnormalized
    FockState state;     // over the end qubits, correction applied
};

void check_shared_node(const LinkState &ab, const LinkState &bc) {
    if (ab.right.node != bc.left.node) {
        throw std::invalid_argument("links do not share a node: " + ab.right.str() + " vs " + bc.left.str());
    }
    if (ab.right.qubit == bc.left.qubit) {
        throw std::invalid_argument("links end on the same qubit " + ab.right.str());
    }
}

ModeId retrieved(const QubitRef &q, Polarization pol) {
    return ModeId::photon(q.node, pol, 0, q.qubit);
}

// Bell-state measurement at the shared node. `state` holds both middle
// qubits plus the end qubits; returns heralded branches over the end qubits.
std::vector<SwapBranch> bell_measurement(const FockState &state, const QubitRef &left_end, const QubitRef &mid_l,
                                         const QubitRef &mid_r, const QubitRef &right_end, const SwapConfig &cfg) {
    using P = Polarization;
    const std::string &node = mid_l.node;

    // Retrieval: S†_u -> √η_r a†_H + √(1-η_r) loss, S†_d -> the same with V.
    Registry in;
    Registry out;
    Registry loss;
    for (const auto &q : {mid_l, mid_r}) {
        in.push_back(q.u());
        in.push_back(q.d());
        out.push_back(retrieved(q, P::kH));
        out.push_back(retrieved(q, P::kV));
    }
    const bool lossy = cfg.retrieval_eta < 1.0;
    const auto n = static_cast<Eigen::Index>(in.size());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(lossy ? 2 * n : n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        u(i, i) = std::sqrt(cfg.retrieval_eta);
        if (lossy) {
            u(n + i, i) = std::sqrt(1.0 - cfg.retrieval_eta);
        }
    }
    if (lossy) {
        for (const auto &m : Registry(out)) {
            loss.push_back(m.with_port(m.port + "#retrieval-loss"));
        }
        out.insert(out.end(), loss.begin(), loss.end());
    }
    const FockState emitted = apply_transform(state, ModeTransform(in, out, u));

    std::vector<MeasurementBranch> retrieved_branches;
    if (lossy) {
        retrieved_branches = measure_modes(emitted, loss, true);
    } else if (emitted.squared_norm() > 0.0) {
        retrieved_branches.push_back({{}, emitted.squared_norm(), emitted.normalized()});
    }

    const ModeId z1 = ModeId::photon(node, P::kH, 0, "Z1");
    const ModeId z2 = ModeId::photon(node, P::kH, 0, "Z2");
    const std::array<ModeId, 4> det_modes{
        ModeId::photon(node, P::kPlus, 0, "D1"), ModeId::photon(node, P::kMinus, 0, "D2"),
        ModeId::photon(node, P::kPlus, 0, "D3"), ModeId::photon(node, P::kMinus, 0, "D4")};
    const std::vector<ModeTransform> network{
        optics::half_wave_plate(retrieved(mid_l, P::kH), retrieved(mid_l, P::kV)),
        optics::half_wave_plate(retrieved(mid_r, P::kH), retrieved(mid_r, P::kV)),
        optics::pbs(retrieved(mid_l, P::kH), retrieved(mid_r, P::kH), z1, z2),
        optics::diagonal_pbs(z1, z1.with_polarization(P::kV), det_modes[0], det_modes[1]),
        optics::diagonal_pbs(z2, z2.with_polarization(P::kV), det_modes[2], det_modes[3]),
    };
    std::vector<optics::Detector> detectors;
    for (size_t k = 0; k < det_modes.size(); ++k) {
        detectors.push_back({"D" + std::to_string(k + 1), {det_modes[k]},
                             optics::DetectorParams{cfg.detector_eta, 0, cfg.number_resolving}});
    }

    const Registry ends{left_end.u(), left_end.d(), right_end.u(), right_end.d()};
    const ModeTransform flip_right =
        ModeTransform::relabel({{right_end.u(), right_end.d()}, {right_end.d(), right_end.u()}});

    std::vector<SwapBranch> heralded;
    for (const auto &rb : retrieved_branches) {
        for (auto &db : optics::detect(apply_network(rb.state, network), detectors)) {
            const auto &o = db.outcome;
            if (o[0] + o[1] != 1 || o[2] + o[3] != 1) {
                continue;
            }
            FockState s = db.state.reordered(ends);
            // D1D4 / D2D3 project onto the u<->d flipped Bell state.
            if (o[0] != o[2]) {
                s = apply_transform(s, flip_right).reordered(ends);
            }
            heralded.push_back({rb.probability * db.probability, std::move(s)});
        }
    }
    return heralded;
}

}  // namespace

void SwapConfig::validate() const {
    if (!(retrieval_eta >= 0.0 && retrieval_eta <= 1.0)) {
        throw std::invalid_argument("retrieval efficiency must lie in [0, 1]");
    }
    if (!(detector_eta >= 0.0 && detector_eta <= 1.0)) {
        throw std::invalid_argument("detector efficiency must lie in [0, 1]");
    }
}

SwapResult local_swap(const LinkState &ab, const LinkState &bc, const SwapConfig &cfg) {
    cfg.validate();
    check_shared_node(ab, bc);
    SwapResult result;
    result.link.left = ab.left;
    result.link.right = bc.right;
    const Registry ends = result.link.registry();

    double total = 0.0;
    std::vector<WeightedState> ensemble;
    for (const auto &wa : ab.ensemble) {
        for (const auto &wb : bc.ensemble) {
            const int cap = wa.state.max_total_excitation() + wb.state.max_total_excitation();
            const FockState joint = FockState::tensor(wa.state, wb.state, cap);
            for (auto &br : bell_measurement(joint, ab.left, ab.right, bc.left, bc.right, cfg)) {
                const double w = wa.weight * wb.weight * br.probability;
                total += w;
                // Split by the number of excitations left at the end nodes.
                const double n2 = br.state.squared_norm();
                auto weight_of = [&](auto pred) {
                    return w * br.state.filtered([&](const Occupation &occ) { return pred(total_excitation(occ)); })
                                   .squared_norm() /
                           n2;
                };
                result.p2 += weight_of([](int k) { return k == 2; });
                result.p1 += weight_of([](int k) { return k == 1; });
                result.p0 += weight_of([](int k) { return k == 0; });
                result.p_excess += weight_of([](int k) { return k > 2; });
                ensemble.push_back({w, std::move(br.state)});
            }
        }
    }
    result.herald_probability = total;
    if (total > 0.0) {
        result.p2 /= total;
        result.p1 /= total;
        result.p0 /= total;
        result.p_excess /= total;
        for (auto &e : ensemble) {
            e.weight /= total;
        }
    }
    result.link.ensemble = spectral_compact(ensemble);
    result.p2_by_level.push_back(result.p2);
    return result;
}

SwapResult local_swap(const HeraldedLink &ab, const HeraldedLink &bc, double retrieval_eta, double detector_eta) {
    return local_swap(ab.link, bc.link, SwapConfig{retrieval_eta, detector_eta, false});
}

double two_excitation_elimination_check(const LinkState &ab, const LinkState &bc, const SwapConfig &cfg) {
    cfg.validate();
    check_shared_node(ab, bc);
    // One middle qubit holds S†_u S†_d, the other middle qubit is empty.
    auto pair_on = [](const FockState &s, const QubitRef &q) {
        const size_t iu = s.index_of(q.u());
        const size_t id = s.index_of(q.d());
        return s.filtered([=](const Occupation &o) { return o[iu] == 1 && o[id] == 1; });
    };
    auto empty_on = [](const FockState &s, const QubitRef &q) {
        const size_t iu = s.index_of(q.u());
        const size_t id = s.index_of(q.d());
        return s.filtered([=](const Occupation &o) { return o[iu] == 0 && o[id] == 0; });
    };

    double p = 0.0;
    for (const auto &wa : ab.ensemble) {
        for (const auto &wb : bc.ensemble) {
            const int cap = wa.state.max_total_excitation() + wb.state.max_total_excitation();
            const std::array<std::pair<FockState, FockState>, 2> sources{
                {{pair_on(wa.state, ab.right), empty_on(wb.state, bc.left)},
                 {empty_on(wa.state, ab.right), pair_on(wb.state, bc.left)}}};
            for (const auto &[left, right] : sources) {
                if (left.empty() || right.empty()) {
                    continue;
                }
                const FockState joint = FockState::tensor(left, right, cap);
                for (const auto &br : bell_measurement(joint, ab.left, ab.right, bc.left, bc.right, cfg)) {
                    p += wa.weight * wb.weight * br.probability;
                }
            }
        }
    }
    return p;
}

SwapResult chain_connect(const std::vector<LinkState> &links, const SwapConfig &cfg) {
    const size_t n = links.size();
    if (n < 2 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("chain_connect: segment count must be a power of two >= 2");
    }
    std::vector<LinkState> level = links;
    std::vector<double> p2_by_level;
    double cumulative = 1.0;
    SwapResult last;
    while (level.size() > 1) {
        std::vector<LinkState> next;
        double p2_sum = 0.0;
        for (size_t i = 0; i + 1 < level.size(); i += 2) {
            last = local_swap(level[i], level[i + 1], cfg);
            cumulative *= last.herald_probability;
            p2_sum += last.p2;
            next.push_back(last.link);
        }
        p2_by_level.push_back(p2_sum / static_cast<double>(next.size()));
        level = std::move(next);
    }
    last.herald_probability = cumulative;
    last.p2_by_level = std::move(p2_by_level);
    return last;
}

double postselected_fidelity(const SwapResult &result) {
    return postselected_fidelity(result.link, swap_bell_state(result.link.left, result.link.right));
}

}  // namespace qrep::protocol
