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

#include "qrep/optics.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace qrep::optics {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phase(double x) {
    double r = std::fmod(x, 2.0 * kPi);
    if (r < 0.0) {
        r += 2.0 * kPi;
    }
    return r;
}

void require_hv(const ModeId &m, const char *what) {
    if (!m.is_photonic() || (m.polarization != Polarization::kH && m.polarization != Polarization::kV)) {
        throw std::invalid_argument(std::string(what) + ": mode " + m.str() + " carries no H/V polarization");
    }
}

Eigen::MatrixXcd hadamard_2x2() {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd m(2, 2);
    m << r, r, r, -r;
    return m;
}

}  // namespace

NoiseParams NoiseParams::canonical() const {
    NoiseParams p = *this;
    // U(θ + π) = -U(θ)
    double k = std::floor(p.theta / kPi);
    p.theta -= k * kPi;
    p.path_phase += k * kPi;
    // U(θ, φ) = -U(π - θ, φ + π)
    if (p.theta > kPi / 2.0) {
        p.theta = kPi - p.theta;
        p.phi += kPi;
        p.path_phase += kPi;
    }
    p.phi = wrap_phase(p.phi);
    p.path_phase = wrap_phase(p.path_phase);
    return p;
}

void ChannelParams::validate() const {
    if (!(length_L0 >= 0.0)) {
        throw std::invalid_argument("channel length L0 must be >= 0");
    }
    if (!(attenuation_length_Latt > 0.0)) {
        throw std::invalid_argument("attenuation length Latt must be > 0");
    }
}

double ChannelParams::half_link_transmittance() const {
    validate();
    return std::exp(-length_L0 / (2.0 * attenuation_length_Latt));
}

void DetectorParams::validate() const {
    if (!(efficiency_eta >= 0.0 && efficiency_eta <= 1.0)) {
        throw std::invalid_argument("detector efficiency must lie in [0, 1]");
    }
    if (gate_bin < 0) {
        throw std::invalid_argument("detector gate bin must be >= 0");
    }
}

Eigen::Matrix2cd noise_matrix(const NoiseParams &params) {
    const double c = std::cos(params.theta);
    const double s = std::sin(params.theta);
    const std::complex<double> e = std::polar(1.0, params.phi);
    Eigen::Matrix2cd u;
    u << c, -std::conj(e) * s, e * s, c;
    return u * std::polar(1.0, params.path_phase);
}

ModeTransform noise_unitary(const NoiseParams &params, const ModeId &h_mode, const ModeId &v_mode) {
    if (h_mode.polarization != Polarization::kH || v_mode.polarization != Polarization::kV) {
        throw std::invalid_argument("noise_unitary: expects an (H, V) mode pair");
    }
    return ModeTransform({h_mode, v_mode}, {h_mode, v_mode}, noise_matrix(params));
}

FockState apply_channel_noise(const FockState &state, const std::string &location, const std::string &port,
                              const NoiseParams &params) {
    std::set<int> bins;
    for (const auto &m : state.registry()) {
        if (m.is_photonic() && m.location == location && m.port == port) {
            require_hv(m, "apply_channel_noise");
            bins.insert(m.time_bin);
        }
    }
    std::vector<ModeTransform> network;
    for (int b : bins) {
        network.push_back(noise_unitary(params, ModeId::photon(location, Polarization::kH, b, port),
                                        ModeId::photon(location, Polarization::kV, b, port)));
    }
    return apply_network(state, network);
}

ModeTransform pbs(const ModeId &in1, const ModeId &in2, const ModeId &out1, const ModeId &out2) {
    for (const auto *m : {&in1, &in2, &out1, &out2}) {
        require_hv(*m, "pbs");
    }
    using P = Polarization;
    Registry in{in1.with_polarization(P::kH), in1.with_polarization(P::kV), in2.with_polarization(P::kH),
                in2.with_polarization(P::kV)};
    Registry out{out1.with_polarization(P::kH), out2.with_polarization(P::kV), out2.with_polarization(P::kH),
                 out1.with_polarization(P::kV)};
    return ModeTransform(std::move(in), std::move(out), Eigen::MatrixXcd::Identity(4, 4));
}

ModeTransform polarization_split(const ModeId &in, const ModeId &h_out, const ModeId &v_out) {
    require_hv(in, "polarization_split");
    using P = Polarization;
    return ModeTransform({in.with_polarization(P::kH), in.with_polarization(P::kV)},
                         {h_out.with_polarization(P::kH), v_out.with_polarization(P::kV)},
                         Eigen::MatrixXcd::Identity(2, 2));
}

ModeTransform beam_splitter(const ModeId &in1, const ModeId &in2, const ModeId &out1, const ModeId &out2) {
    return ModeTransform({in1, in2}, {out1, out2}, hadamard_2x2());
}

ModeTransform half_wave_plate(const ModeId &h_mode, const ModeId &v_mode) {
    if (h_mode.polarization != Polarization::kH || v_mode.polarization != Polarization::kV) {
        throw std::invalid_argument("half_wave_plate: expects an (H, V) mode pair");
    }
    return ModeTransform({h_mode, v_mode}, {h_mode, v_mode}, hadamard_2x2());
}

ModeTransform diagonal_pbs(const ModeId &h_mode, const ModeId &v_mode, const ModeId &plus_out,
                           const ModeId &minus_out) {
    if (h_mode.polarization != Polarization::kH || v_mode.polarization != Polarization::kV) {
        throw std::invalid_argument("diagonal_pbs: expects an (H, V) mode pair");
    }
    // H = (+ + -)/√2, V = (+ - -)/√2
    return ModeTransform({h_mode, v_mode}, {plus_out, minus_out}, hadamard_2x2());
}

FockState node_delay(const FockState &state, const std::string &node) {
    std::map<ModeId, ModeId> shift;
    for (const auto &m : state.registry()) {
        if (m.is_photonic() && m.location == node && m.polarization == Polarization::kV) {
            shift.emplace(m, m.with_time_bin(m.time_bin + 1));
        }
    }
    if (shift.empty()) {
        return state;
    }
    return apply_transform(state, ModeTransform::relabel(shift));
}

FockState midpoint_delay(const FockState &state, const std::string &location) {
    std::map<ModeId, ModeId> shift;
    for (const auto &m : state.registry()) {
        if (m.is_photonic() && m.location == location && m.polarization == Polarization::kH) {
            shift.emplace(m, m.with_time_bin(m.time_bin + 1));
        }
    }
    if (shift.empty()) {
        return state;
    }
    return apply_transform(state, ModeTransform::relabel(shift));
}

std::vector<MeasurementBranch> attenuate(const FockState &state, const Registry &channel_modes,
                                         double transmittance) {
    if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
        throw std::invalid_argument("attenuate: transmittance must lie in [0, 1]");
    }
    require_distinct(channel_modes, "attenuate");
    if (channel_modes.empty() || transmittance == 1.0) {
        MeasurementBranch b;
        b.outcome.assign(channel_modes.size(), 0);
        b.probability = state.squared_norm();
        if (!(b.probability > 0.0)) {
            return {};
        }
        b.state = state.normalized();
        return {std::move(b)};
    }
    const auto n = static_cast<Eigen::Index>(channel_modes.size());
    Registry out = channel_modes;
    Registry loss;
    for (const auto &m : channel_modes) {
        state.index_of(m);
        ModeId l = m.with_port(m.port + "#loss");
        if (state.has_mode(l)) {
            throw std::invalid_argument("attenuate: loss mode " + l.str() + " already present");
        }
        loss.push_back(l);
    }
    out.insert(out.end(), loss.begin(), loss.end());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2 * n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        u(i, i) = std::sqrt(transmittance);
        u(n + i, i) = std::sqrt(1.0 - transmittance);
    }
    FockState coupled = apply_transform(state, ModeTransform(channel_modes, out, u));
    return measure_modes(coupled, loss, true);
}

std::vector<MeasurementBranch> detect(const FockState &state, const std::vector<Detector> &detectors) {
    std::set<ModeId> seen;
    std::vector<Registry> observed(detectors.size());
    for (size_t k = 0; k < detectors.size(); ++k) {
        detectors[k].params.validate();
        for (const auto &m : detectors[k].modes) {
            if (!seen.insert(m).second) {
                throw std::invalid_argument("detect: overlapping detector mode sets at " + m.str());
            }
            if (m.time_bin == detectors[k].params.gate_bin && state.has_mode(m)) {
                observed[k].push_back(m);
            }
        }
    }

    // Inefficiency as loss, one detector at a time.
    std::vector<MeasurementBranch> stage;
    {
        MeasurementBranch start;
        start.probability = state.squared_norm();
        if (!(start.probability > 0.0)) {
            return {};
        }
        start.state = state.normalized();
        stage.push_back(std::move(start));
    }
    for (size_t k = 0; k < detectors.size(); ++k) {
        const double eta = detectors[k].params.efficiency_eta;
        if (eta == 1.0 || observed[k].empty()) {
            continue;
        }
        std::vector<MeasurementBranch> next;
        for (const auto &b : stage) {
            for (auto &lb : attenuate(b.state, observed[k], eta)) {
                lb.probability *= b.probability;
                lb.outcome.clear();
                next.push_back(std::move(lb));
            }
        }
        stage = std::move(next);
    }

    Registry all;
    for (const auto &r : observed) {
        all.insert(all.end(), r.begin(), r.end());
    }
    std::vector<MeasurementBranch> result;
    for (const auto &b : stage) {
        if (all.empty()) {
            MeasurementBranch r = b;
            r.outcome.assign(detectors.size(), 0);
            result.push_back(std::move(r));
            continue;
        }
        for (auto &mb : measure_modes(b.state, all, true)) {
            MeasurementBranch r;
            r.outcome.assign(detectors.size(), 0);
            size_t pos = 0;
            for (size_t k = 0; k < detectors.size(); ++k) {
                int n = 0;
                for (size_t i = 0; i < observed[k].size(); ++i) {
                    n += mb.outcome[pos++];
                }
                r.outcome[k] = detectors[k].params.number_resolving ? n : (n > 0 ? 1 : 0);
            }
            r.probability = b.probability * mb.probability;
            r.state = std::move(mb.state);
            result.push_back(std::move(r));
        }
    }
    return result;
}

}  // namespace qrep::optics
