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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrep/fock_state.hpp"
#include "qrep/measurement.hpp"
#include "qrep/mode_transform.hpp"

// Optical elements and channels, expressed as mode transforms or as
// measurement branch constructors.
namespace qrep::optics {

/// Polarization noise of one channel use. `phi` is the relative phase inside
/// the polarization rotation, `path_phase` the polarization-independent phase.
struct NoiseParams {
    double theta = 0.0;
    double phi = 0.0;
    double path_phase = 0.0;

    /// Equivalent parameters with theta in [0, π/2] and phases in [0, 2π).
    /// noise_matrix(canonical()) == noise_matrix(*this).
    NoiseParams canonical() const;
};

struct ChannelParams {
    double length_L0 = 0.0;  // full node-to-node distance
    double attenuation_length_Latt = 22.0;
    NoiseParams noise;

    void validate() const;
    /// Photon survival probability from a node to the midpoint, exp(-L0 / (2 Latt)).
    double half_link_transmittance() const;
};

struct DetectorParams {
    double efficiency_eta = 1.0;
    int gate_bin = 1;
    bool number_resolving = false;

    void validate() const;
};

struct Detector {
    std::string name;
    Registry modes;
    DetectorParams params;
};

/// [[cosθ, -e^{-iφ} sinθ], [e^{iφ} sinθ, cosθ]] · e^{i path_phase} on (H, V).
Eigen::Matrix2cd noise_matrix(const NoiseParams &params);

/// Noise rotation on the H/V pair of one spatial channel.
ModeTransform noise_unitary(const NoiseParams &params, const ModeId &h_mode, const ModeId &v_mode);

/// Applies the same noise rotation to every time bin of the photonic channel
/// (location, port) that is present in the state.
FockState apply_channel_noise(const FockState &state, const std::string &location, const std::string &port,
                              const NoiseParams &params);

/// Polarizing beam splitter. H is transmitted and V reflected:
/// in1 H -> out1, in1 V -> out2, in2 H -> out2, in2 V -> out1.
/// in1/in2 select (location, time bin, port); their polarization must be H or V.
ModeTransform pbs(const ModeId &in1, const ModeId &in2, const ModeId &out1, const ModeId &out2);

/// Single-input PBS: the H component goes to `h_out`, the V component to `v_out`.
ModeTransform polarization_split(const ModeId &in, const ModeId &h_out, const ModeId &v_out);

/// 50/50 beam splitter: a†_1 -> (b†_1 + b†_2)/√2, a†_2 -> (b†_1 - b†_2)/√2.
ModeTransform beam_splitter(const ModeId &in1, const ModeId &in2, const ModeId &out1, const ModeId &out2);

/// Half-wave plate at 22.5°: H -> (H+V)/√2, V -> (H-V)/√2 on one spatial mode.
ModeTransform half_wave_plate(const ModeId &h_mode, const ModeId &v_mode);

/// ± polarizing splitter: |+⟩ -> plus_out, |−⟩ -> minus_out.
ModeTransform diagonal_pbs(const ModeId &h_mode, const ModeId &v_mode, const ModeId &plus_out, const ModeId &minus_out);

/// At a node the V component takes the long path: V photonic modes at
/// `node` get time_bin += 1.
FockState node_delay(const FockState &state, const std::string &node);

/// Opposite arrangement at the midpoint: H photonic modes at `location` get
/// time_bin += 1.
FockState midpoint_delay(const FockState &state, const std::string &location);

/// Couples every listed mode to a fresh loss mode with survival probability
/// `transmittance`, then measures and discards the loss modes.
std::vector<MeasurementBranch> attenuate(const FockState &state, const Registry &channel_modes, double transmittance);

/// Time-gated inefficient detectors. Only modes at each detector's gate bin
/// are observed; efficiency acts as attenuation before an ideal measurement.
/// Branch outcomes are per detector (count or click). Measured modes leave
/// the registry.
std::vector<MeasurementBranch> detect(const FockState &state, const std::vector<Detector> &detectors);

}  // namespace qrep::optics
