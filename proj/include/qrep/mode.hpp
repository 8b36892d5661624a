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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qrep {

enum class Species : std::uint8_t { kPhotonic, kAtomic };

// Plus/Minus label the diagonal-basis outputs of a ± polarizing splitter.
enum class Polarization : std::uint8_t { kNone, kH, kV, kPlus, kMinus };

const char *to_string(Species s);
const char *to_string(Polarization p);

/// A labeled bosonic mode. Two ModeIds name the same physical mode iff every
/// field compares equal, which is what lets the S·L and L·S paths of
/// different photons land in one time-bin mode and interfere.
struct ModeId {
    std::string location;
    Species species = Species::kPhotonic;
    Polarization polarization = Polarization::kNone;
    int time_bin = 0;  // number of long paths traversed
    std::string port;

    /// Photonic mode. Throws std::invalid_argument on a negative time bin.
    static ModeId photon(std::string location, Polarization pol, int time_bin, std::string port);
    /// Atomic (collective excitation) mode; no polarization, no time bin.
    static ModeId atom(std::string location, std::string port);

    bool is_photonic() const { return species == Species::kPhotonic; }
    bool is_atomic() const { return species == Species::kAtomic; }

    ModeId with_polarization(Polarization pol) const;
    ModeId with_time_bin(int bin) const;
    ModeId with_port(std::string new_port) const;
    ModeId with_location(std::string new_location) const;

    std::string str() const;

    auto operator<=>(const ModeId &) const = default;
    bool operator==(const ModeId &) const = default;
};

using Registry = std::vector<ModeId>;

std::optional<size_t> find_mode(const Registry &registry, const ModeId &mode);

/// Throws std::invalid_argument if any ModeId appears twice.
void require_distinct(const Registry &registry, const char *what);

/// A memory qubit: two atomic ensembles u and d at one node.
struct QubitRef {
    std::string node;
    std::string qubit;

    ModeId u() const { return ModeId::atom(node, qubit + ".u"); }
    ModeId d() const { return ModeId::atom(node, qubit + ".d"); }
    std::string str() const { return node + "." + qubit; }

    bool operator==(const QubitRef &) const = default;
};

}  // namespace qrep
