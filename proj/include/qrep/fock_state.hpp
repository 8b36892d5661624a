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

#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <utility>
#include <vector>

#include "qrep/mode.hpp"

namespace qrep {

using Amplitude = std::complex<double>;
using Occupation = std::vector<std::uint8_t>;
using AmplitudeMap = std::map<Occupation, Amplitude>;

/// Amplitudes with magnitude below this are dropped after every operation.
inline constexpr double kPruneThreshold = 1e-15;

/// Sparse truncated multimode Fock state. Immutable: every operation returns a
/// new state. The state is not normalized unless explicitly asked for.
class FockState {
   public:
    FockState() = default;  // empty registry, no amplitudes

    static FockState vacuum(Registry registry, int max_total_excitation);

    /// Builds a state from explicit amplitudes. Entries above the cap or with
    /// the wrong occupation length are rejected.
    static FockState from_amplitudes(Registry registry, int max_total_excitation, AmplitudeMap amplitudes);

    /// Kronecker product on the concatenated registry, truncated at `max_total_excitation`.
    static FockState tensor(const FockState &a, const FockState &b, int max_total_excitation);

    const Registry &registry() const { return registry_; }
    int max_total_excitation() const { return cap_; }
    const AmplitudeMap &amplitudes() const { return amps_; }
    size_t size() const { return amps_.size(); }
    bool empty() const { return amps_.empty(); }

    size_t index_of(const ModeId &mode) const;  // throws on unknown mode
    bool has_mode(const ModeId &mode) const;

    Amplitude amplitude(const Occupation &occ) const;
    /// Amplitude of the ket with the listed occupations and every other mode empty.
    Amplitude amplitude(std::initializer_list<std::pair<ModeId, int>> occupied) const;

    double squared_norm() const;
    FockState normalized() const;  // throws std::domain_error on a zero state
    FockState scaled(Amplitude factor) const;

    /// Lowers or raises the cap; raising never changes existing amplitudes.
    FockState with_cap(int max_total_excitation) const;
    /// Appends any listed modes not already present, in vacuum.
    FockState with_modes(const Registry &modes) const;
    /// Same state on a permuted registry holding exactly the same modes.
    FockState reordered(const Registry &registry) const;
    /// Keeps entries whose occupation satisfies `keep`.
    FockState filtered(const std::function<bool(const Occupation &)> &keep) const;
    /// Drops the listed modes. Throws if any of them is occupied.
    FockState without_modes(const Registry &modes) const;

    /// Total occupation of the listed modes in one basis vector.
    int count(const Occupation &occ, const Registry &modes) const;

    FockState operator+(const FockState &other) const;
    FockState operator-(const FockState &other) const;

   private:
    FockState(Registry registry, int cap, AmplitudeMap amps);
    void prune();

    Registry registry_;
    int cap_ = 0;
    AmplitudeMap amps_;
};

int total_excitation(const Occupation &occ);

/// ⟨a|b⟩. Registries must hold the same modes; order may differ.
Amplitude inner_product(const FockState &a, const FockState &b);

/// |⟨a|b⟩|² of the normalized inputs.
double fidelity(const FockState &a, const FockState &b);

/// Linear combination of products of creation operators.
class CreationPolynomial {
   public:
    struct Term {
        Amplitude coefficient;
        std::vector<ModeId> modes;  // sorted multiset; empty means identity
    };

    CreationPolynomial() = default;

    /// Adds coeff · ∏ a†_m. Terms with the same multiset are merged.
    CreationPolynomial &add(Amplitude coefficient, std::vector<ModeId> modes);

    const std::vector<Term> &terms() const { return terms_; }

   private:
    std::vector<Term> terms_;
};

/// Σ_terms coeff · (∏ a†_m) |state⟩ with bosonic √(n+1) factors. Entries over
/// the cap are dropped.
FockState apply_polynomial(const FockState &state, const CreationPolynomial &poly);

}  // namespace qrep
