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

#include "qrep/mode_transform.hpp"

#include <cmath>
#include <stdexcept>

namespace qrep {

namespace {

double sqrt_factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) {
        f *= static_cast<double>(k);
    }
    return std::sqrt(f);
}

// Ket amplitudes over the out-modes of ∏_i (Σ_j U_ji b†_j)^{n_i} / √(n_i!) |0⟩.
AmplitudeMap expand_product(const Eigen::MatrixXcd &u, const Occupation &in_occ) {
    const auto n_out = static_cast<size_t>(u.rows());
    // Monomial coefficients of the operator product, keyed by out occupation.
    AmplitudeMap poly;
    poly[Occupation(n_out, 0)] = 1.0;
    double in_norm = 1.0;
    for (size_t i = 0; i < in_occ.size(); ++i) {
        in_norm *= sqrt_factorial(in_occ[i]);
        for (int rep = 0; rep < in_occ[i]; ++rep) {
            AmplitudeMap next;
            for (const auto &[m, c] : poly) {
                for (size_t j = 0; j < n_out; ++j) {
                    Amplitude uji = u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
                    if (uji == Amplitude{}) {
                        continue;
                    }
                    Occupation mm = m;
                    ++mm[j];
                    next[std::move(mm)] += c * uji;
                }
            }
            poly = std::move(next);
        }
    }
    AmplitudeMap kets;
    for (const auto &[m, c] : poly) {
        double f = 1.0;
        for (auto mj : m) {
            f *= sqrt_factorial(mj);
        }
        kets.emplace(m, c * f / in_norm);
    }
    return kets;
}

}  // namespace

ModeTransform::ModeTransform(Registry in_modes, Registry out_modes, Eigen::MatrixXcd matrix)
    : in_(std::move(in_modes)), out_(std::move(out_modes)), u_(std::move(matrix)) {
    if (in_.empty()) {
        throw std::invalid_argument("ModeTransform: no input modes");
    }
    require_distinct(in_, "ModeTransform in_modes");
    require_distinct(out_, "ModeTransform out_modes");
    if (u_.rows() != static_cast<Eigen::Index>(out_.size()) || u_.cols() != static_cast<Eigen::Index>(in_.size())) {
        throw std::invalid_argument("ModeTransform: matrix shape must be out_modes x in_modes");
    }
    if (isometry_defect() > kIsometryTolerance) {
        throw std::invalid_argument("ModeTransform: matrix is not an isometry");
    }
}

ModeTransform ModeTransform::relabel(const std::map<ModeId, ModeId> &mapping) {
    Registry in;
    Registry out;
    for (const auto &[from, to] : mapping) {
        in.push_back(from);
        out.push_back(to);
    }
    auto n = static_cast<Eigen::Index>(in.size());
    return ModeTransform(std::move(in), std::move(out), Eigen::MatrixXcd::Identity(n, n));
}

double ModeTransform::isometry_defect() const {
    Eigen::MatrixXcd g = u_.adjoint() * u_;
    return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

double ModeTransform::unitarity_defect() const {
    if (!is_square()) {
        throw std::logic_error("unitarity_defect: matrix is not square");
    }
    Eigen::MatrixXcd g = u_ * u_.adjoint();
    double d = (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    return std::max(d, isometry_defect());
}

ModeTransform ModeTransform::adjoint() const {
    if (!is_square() || unitarity_defect() > kIsometryTolerance) {
        throw std::invalid_argument("ModeTransform::adjoint: transform is not unitary");
    }
    return ModeTransform(out_, in_, u_.adjoint());
}

FockState apply_transform(const FockState &state, const ModeTransform &t) {
    const Registry &reg = state.registry();
    const Registry &in = t.in_modes();
    const Registry &out = t.out_modes();

    std::vector<size_t> in_idx;
    in_idx.reserve(in.size());
    std::vector<bool> is_in(reg.size(), false);
    for (const auto &m : in) {
        size_t i = state.index_of(m);
        in_idx.push_back(i);
        is_in[i] = true;
    }
    for (const auto &m : out) {
        auto pos = find_mode(reg, m);
        if (pos && !is_in[*pos]) {
            throw std::invalid_argument("apply_transform: output mode " + m.str() + " is already occupied by another mode");
        }
    }

    // New registry: untouched modes and reused in-slots keep their position,
    // fresh out-modes are appended.
    Registry new_reg;
    std::vector<long> old_to_new(reg.size(), -1);
    for (size_t i = 0; i < reg.size(); ++i) {
        if (!is_in[i] || find_mode(out, reg[i])) {
            old_to_new[i] = static_cast<long>(new_reg.size());
            new_reg.push_back(reg[i]);
        }
    }
    std::vector<size_t> out_pos(out.size());
    for (size_t j = 0; j < out.size(); ++j) {
        auto pos = find_mode(new_reg, out[j]);
        if (pos) {
            out_pos[j] = *pos;
        } else {
            out_pos[j] = new_reg.size();
            new_reg.push_back(out[j]);
        }
    }

    std::map<Occupation, AmplitudeMap> cache;
    AmplitudeMap result;
    for (const auto &[occ, amp] : state.amplitudes()) {
        Occupation in_occ(in.size());
        for (size_t k = 0; k < in.size(); ++k) {
            in_occ[k] = occ[in_idx[k]];
        }
        auto it = cache.find(in_occ);
        if (it == cache.end()) {
            it = cache.emplace(in_occ, expand_product(t.matrix(), in_occ)).first;
        }
        Occupation base(new_reg.size(), 0);
        for (size_t i = 0; i < reg.size(); ++i) {
            if (!is_in[i]) {
                base[static_cast<size_t>(old_to_new[i])] = occ[i];
            }
        }
        for (const auto &[out_occ, c] : it->second) {
            Occupation o = base;
            for (size_t j = 0; j < out.size(); ++j) {
                o[out_pos[j]] = static_cast<std::uint8_t>(o[out_pos[j]] + out_occ[j]);
            }
            result[std::move(o)] += amp * c;
        }
    }
    return FockState::from_amplitudes(std::move(new_reg), state.max_total_excitation(), std::move(result));
}

FockState apply_network(const FockState &state, const std::vector<ModeTransform> &network) {
    FockState s = state;
    for (const auto &t : network) {
        s = apply_transform(s.with_modes(t.in_modes()), t);
    }
    return s;
}

}  // namespace qrep
