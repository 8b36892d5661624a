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

#include "qrep/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>

namespace qrep {

std::vector<MeasurementBranch> measure_modes(const FockState &state, const Registry &modes, bool number_resolving) {
    if (modes.empty()) {
        throw std::invalid_argument("measure_modes: empty mode list");
    }
    require_distinct(modes, "measure_modes");
    const Registry &reg = state.registry();
    std::vector<bool> measured(reg.size(), false);
    std::vector<size_t> idx;
    for (const auto &m : modes) {
        size_t i = state.index_of(m);
        idx.push_back(i);
        measured[i] = true;
    }
    Registry rest;
    for (size_t i = 0; i < reg.size(); ++i) {
        if (!measured[i]) {
            rest.push_back(reg[i]);
        }
    }

    // Fine outcome -> unnormalized conditional amplitudes.
    std::map<Occupation, AmplitudeMap> groups;
    for (const auto &[occ, amp] : state.amplitudes()) {
        Occupation key(idx.size());
        for (size_t k = 0; k < idx.size(); ++k) {
            key[k] = occ[idx[k]];
        }
        Occupation cond;
        cond.reserve(rest.size());
        for (size_t i = 0; i < reg.size(); ++i) {
            if (!measured[i]) {
                cond.push_back(occ[i]);
            }
        }
        groups[std::move(key)].emplace(std::move(cond), amp);
    }

    std::vector<MeasurementBranch> branches;
    branches.reserve(groups.size());
    for (auto &[key, amps] : groups) {
        MeasurementBranch b;
        b.outcome.reserve(key.size());
        for (auto n : key) {
            b.outcome.push_back(number_resolving ? static_cast<int>(n) : (n > 0 ? 1 : 0));
        }
        FockState cond = FockState::from_amplitudes(rest, state.max_total_excitation(), std::move(amps));
        b.probability = cond.squared_norm();
        if (!(b.probability > 0.0)) {
            continue;
        }
        b.state = cond.normalized();
        branches.push_back(std::move(b));
    }
    return branches;
}

std::vector<MeasurementBranch> trace_out(const FockState &state, const Registry &modes) {
    auto branches = measure_modes(state, modes, true);
    for (auto &b : branches) {
        b.outcome.clear();
    }
    return branches;
}

double total_probability(const std::vector<MeasurementBranch> &branches) {
    double s = 0.0;
    for (const auto &b : branches) {
        s += b.probability;
    }
    return s;
}

double pattern_probability(const std::vector<MeasurementBranch> &branches, const std::vector<int> &pattern) {
    double s = 0.0;
    for (const auto &b : branches) {
        if (b.outcome == pattern) {
            s += b.probability;
        }
    }
    return s;
}

std::vector<WeightedState> compact(std::vector<WeightedState> ensemble, double tolerance) {
    std::vector<WeightedState> out;
    for (auto &w : ensemble) {
        if (!(w.weight > 0.0)) {
            continue;
        }
        bool merged = false;
        for (auto &o : out) {
            if (o.state.size() != w.state.size() || o.state.registry() != w.state.registry()) {
                continue;
            }
            if (std::abs(fidelity(o.state, w.state) - 1.0) < tolerance) {
                o.weight += w.weight;
                merged = true;
                break;
            }
        }
        if (!merged) {
            out.push_back(std::move(w));
        }
    }
    return out;
}

std::vector<WeightedState> spectral_compact(const std::vector<WeightedState> &ensemble, double tolerance) {
    if (ensemble.empty()) {
        return {};
    }
    const Registry &reg = ensemble.front().state.registry();
    int cap = 0;
    std::map<Occupation, Eigen::Index> basis;
    std::vector<FockState> aligned;
    for (const auto &w : ensemble) {
        aligned.push_back(w.state.reordered(reg));
        cap = std::max(cap, w.state.max_total_excitation());
        for (const auto &[occ, amp] : aligned.back().amplitudes()) {
            basis.emplace(occ, 0);
        }
    }
    Eigen::Index k = 0;
    for (auto &[occ, idx] : basis) {
        idx = k++;
    }
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(k, static_cast<Eigen::Index>(ensemble.size()));
    double trace = 0.0;
    for (size_t j = 0; j < ensemble.size(); ++j) {
        const double w = ensemble[j].weight;
        if (!(w > 0.0)) {
            continue;
        }
        const double n2 = aligned[j].squared_norm();
        trace += w;
        for (const auto &[occ, amp] : aligned[j].amplitudes()) {
            psi(basis.at(occ), static_cast<Eigen::Index>(j)) = std::sqrt(w / n2) * amp;
        }
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(psi, Eigen::ComputeThinU);
    std::vector<WeightedState> out;
    for (Eigen::Index c = 0; c < svd.singularValues().size(); ++c) {
        const double lambda = svd.singularValues()(c) * svd.singularValues()(c);
        if (!(lambda > tolerance * trace)) {
            continue;
        }
        // Fix the global phase: largest component real and positive.
        const Eigen::VectorXcd v = svd.matrixU().col(c);
        Eigen::Index big = 0;
        v.cwiseAbs().maxCoeff(&big);
        const Amplitude phase = std::conj(v(big)) / std::abs(v(big));
        AmplitudeMap amps;
        for (const auto &[occ, idx] : basis) {
            amps.emplace(occ, v(idx) * phase);
        }
        out.push_back({lambda, FockState::from_amplitudes(reg, cap, std::move(amps))});
    }
    return out;
}

}  // namespace qrep
