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

#include "qrep/fock_state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qrep {

namespace {

bool same_mode_set(const Registry &a, const Registry &b) {
    if (a.size() != b.size()) {
        return false;
    }
    Registry sa = a;
    Registry sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    return sa == sb;
}

}  // namespace

int total_excitation(const Occupation &occ) {
    return std::accumulate(occ.begin(), occ.end(), 0);
}

FockState::FockState(Registry registry, int cap, AmplitudeMap amps)
    : registry_(std::move(registry)), cap_(cap), amps_(std::move(amps)) {
    prune();
}

void FockState::prune() {
    for (auto it = amps_.begin(); it != amps_.end();) {
        if (std::abs(it->second) < kPruneThreshold) {
            it = amps_.erase(it);
        } else {
            ++it;
        }
    }
}

FockState FockState::vacuum(Registry registry, int max_total_excitation) {
    if (registry.empty()) {
        throw std::invalid_argument("vacuum: registry must be nonempty");
    }
    if (max_total_excitation < 0) {
        throw std::invalid_argument("vacuum: max_total_excitation must be >= 0");
    }
    require_distinct(registry, "vacuum");
    AmplitudeMap amps;
    amps[Occupation(registry.size(), 0)] = 1.0;
    return FockState(std::move(registry), max_total_excitation, std::move(amps));
}

FockState FockState::from_amplitudes(Registry registry, int max_total_excitation, AmplitudeMap amplitudes) {
    if (max_total_excitation < 0) {
        throw std::invalid_argument("from_amplitudes: max_total_excitation must be >= 0");
    }
    require_distinct(registry, "from_amplitudes");
    for (const auto &[occ, amp] : amplitudes) {
        if (occ.size() != registry.size()) {
            throw std::invalid_argument("from_amplitudes: occupation length does not match registry");
        }
        if (total_excitation(occ) > max_total_excitation) {
            throw std::invalid_argument("from_amplitudes: occupation exceeds cap");
        }
    }
    return FockState(std::move(registry), max_total_excitation, std::move(amplitudes));
}

FockState FockState::tensor(const FockState &a, const FockState &b, int max_total_excitation) {
    Registry reg = a.registry_;
    reg.insert(reg.end(), b.registry_.begin(), b.registry_.end());
    require_distinct(reg, "tensor");
    AmplitudeMap amps;
    for (const auto &[oa, va] : a.amps_) {
        int na = total_excitation(oa);
        for (const auto &[ob, vb] : b.amps_) {
            if (na + total_excitation(ob) > max_total_excitation) {
                continue;
            }
            Occupation o = oa;
            o.insert(o.end(), ob.begin(), ob.end());
            amps[std::move(o)] += va * vb;
        }
    }
    return FockState(std::move(reg), max_total_excitation, std::move(amps));
}

bool FockState::has_mode(const ModeId &mode) const {
    return find_mode(registry_, mode).has_value();
}

size_t FockState::index_of(const ModeId &mode) const {
    auto idx = find_mode(registry_, mode);
    if (!idx) {
        throw std::invalid_argument("unknown mode " + mode.str());
    }
    return *idx;
}

Amplitude FockState::amplitude(const Occupation &occ) const {
    auto it = amps_.find(occ);
    return it == amps_.end() ? Amplitude{} : it->second;
}

Amplitude FockState::amplitude(std::initializer_list<std::pair<ModeId, int>> occupied) const {
    Occupation occ(registry_.size(), 0);
    for (const auto &[mode, n] : occupied) {
        occ[index_of(mode)] = static_cast<std::uint8_t>(n);
    }
    return amplitude(occ);
}

double FockState::squared_norm() const {
    double s = 0.0;
    for (const auto &[occ, amp] : amps_) {
        s += std::norm(amp);
    }
    return s;
}

FockState FockState::normalized() const {
    double n2 = squared_norm();
    if (!(n2 > 0.0)) {
        throw std::domain_error("cannot normalize a zero state");
    }
    return scaled(1.0 / std::sqrt(n2));
}

FockState FockState::scaled(Amplitude factor) const {
    AmplitudeMap amps = amps_;
    for (auto &[occ, amp] : amps) {
        amp *= factor;
    }
    return FockState(registry_, cap_, std::move(amps));
}

FockState FockState::with_cap(int max_total_excitation) const {
    if (max_total_excitation < 0) {
        throw std::invalid_argument("with_cap: max_total_excitation must be >= 0");
    }
    AmplitudeMap amps;
    for (const auto &[occ, amp] : amps_) {
        if (total_excitation(occ) <= max_total_excitation) {
            amps.emplace(occ, amp);
        }
    }
    return FockState(registry_, max_total_excitation, std::move(amps));
}

FockState FockState::with_modes(const Registry &modes) const {
    Registry reg = registry_;
    for (const auto &m : modes) {
        if (!find_mode(reg, m)) {
            reg.push_back(m);
        }
    }
    if (reg.size() == registry_.size()) {
        return *this;
    }
    AmplitudeMap amps;
    for (const auto &[occ, amp] : amps_) {
        Occupation o = occ;
        o.resize(reg.size(), 0);
        amps.emplace(std::move(o), amp);
    }
    return FockState(std::move(reg), cap_, std::move(amps));
}

FockState FockState::reordered(const Registry &registry) const {
    if (registry == registry_) {
        return *this;
    }
    if (!same_mode_set(registry, registry_)) {
        throw std::invalid_argument("reordered: registry holds different modes");
    }
    std::vector<size_t> src(registry.size());
    for (size_t i = 0; i < registry.size(); ++i) {
        src[i] = index_of(registry[i]);
    }
    AmplitudeMap amps;
    for (const auto &[occ, amp] : amps_) {
        Occupation o(occ.size());
        for (size_t i = 0; i < o.size(); ++i) {
            o[i] = occ[src[i]];
        }
        amps.emplace(std::move(o), amp);
    }
    return FockState(registry, cap_, std::move(amps));
}

FockState FockState::filtered(const std::function<bool(const Occupation &)> &keep) const {
    AmplitudeMap amps;
    for (const auto &[occ, amp] : amps_) {
        if (keep(occ)) {
            amps.emplace(occ, amp);
        }
    }
    return FockState(registry_, cap_, std::move(amps));
}

FockState FockState::without_modes(const Registry &modes) const {
    std::vector<bool> drop(registry_.size(), false);
    for (const auto &m : modes) {
        drop[index_of(m)] = true;
    }
    Registry reg;
    for (size_t i = 0; i < registry_.size(); ++i) {
        if (!drop[i]) {
            reg.push_back(registry_[i]);
        }
    }
    AmplitudeMap amps;
    for (const auto &[occ, amp] : amps_) {
        Occupation o;
        o.reserve(reg.size());
        for (size_t i = 0; i < occ.size(); ++i) {
            if (drop[i]) {
                if (occ[i] != 0) {
                    throw std::invalid_argument("without_modes: mode " + registry_[i].str() + " is occupied");
                }
            } else {
                o.push_back(occ[i]);
            }
        }
        amps.emplace(std::move(o), amp);
    }
    return FockState(std::move(reg), cap_, std::move(amps));
}

int FockState::count(const Occupation &occ, const Registry &modes) const {
    int n = 0;
    for (const auto &m : modes) {
        n += occ[index_of(m)];
    }
    return n;
}

FockState FockState::operator+(const FockState &other) const {
    FockState rhs = other.reordered(registry_);
    AmplitudeMap amps = amps_;
    for (const auto &[occ, amp] : rhs.amps_) {
        amps[occ] += amp;
    }
    return FockState(registry_, std::max(cap_, other.cap_), std::move(amps));
}

FockState FockState::operator-(const FockState &other) const {
    return *this + other.scaled(-1.0);
}

Amplitude inner_product(const FockState &a, const FockState &b) {
    if (!same_mode_set(a.registry(), b.registry())) {
        throw std::invalid_argument("inner_product: registry mismatch");
    }
    FockState bb = b.reordered(a.registry());
    const AmplitudeMap &small = a.size() <= bb.size() ? a.amplitudes() : bb.amplitudes();
    const AmplitudeMap &large = a.size() <= bb.size() ? bb.amplitudes() : a.amplitudes();
    bool a_is_small = a.size() <= bb.size();
    Amplitude s{};
    for (const auto &[occ, amp] : small) {
        auto it = large.find(occ);
        if (it == large.end()) {
            continue;
        }
        s += a_is_small ? std::conj(amp) * it->second : std::conj(it->second) * amp;
    }
    return s;
}

double fidelity(const FockState &a, const FockState &b) {
    double na = a.squared_norm();
    double nb = b.squared_norm();
    if (!(na > 0.0) || !(nb > 0.0)) {
        throw std::domain_error("fidelity: zero-norm input");
    }
    return std::norm(inner_product(a, b)) / (na * nb);
}

CreationPolynomial &CreationPolynomial::add(Amplitude coefficient, std::vector<ModeId> modes) {
    std::sort(modes.begin(), modes.end());
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        if (it->modes == modes) {
            it->coefficient += coefficient;
            if (std::abs(it->coefficient) < kPruneThreshold) {
                terms_.erase(it);
            }
            return *this;
        }
    }
    if (std::abs(coefficient) >= kPruneThreshold) {
        terms_.push_back(Term{coefficient, std::move(modes)});
    }
    return *this;
}

FockState apply_polynomial(const FockState &state, const CreationPolynomial &poly) {
    std::vector<std::vector<size_t>> term_idx;
    for (const auto &term : poly.terms()) {
        std::vector<size_t> idx;
        for (const auto &m : term.modes) {
            idx.push_back(state.index_of(m));
        }
        term_idx.push_back(std::move(idx));
    }
    const int cap = state.max_total_excitation();
    AmplitudeMap out;
    for (const auto &[occ, amp] : state.amplitudes()) {
        const int n0 = total_excitation(occ);
        for (size_t t = 0; t < poly.terms().size(); ++t) {
            const auto &idx = term_idx[t];
            if (n0 + static_cast<int>(idx.size()) > cap) {
                continue;
            }
            Occupation o = occ;
            double factor = 1.0;
            for (size_t i : idx) {
                factor *= std::sqrt(static_cast<double>(o[i]) + 1.0);
                ++o[i];
            }
            out[std::move(o)] += poly.terms()[t].coefficient * factor * amp;
        }
    }
    return FockState::from_amplitudes(state.registry(), cap, std::move(out));
}

}  // namespace qrep
