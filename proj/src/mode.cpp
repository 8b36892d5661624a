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

#include "qrep/mode.hpp"

#include <algorithm>
#include <stdexcept>

namespace qrep {

const char *to_string(Species s) {
    return s == Species::kAtomic ? "atom" : "photon";
}

const char *to_string(Polarization p) {
    switch (p) {
        case Polarization::kH:
            return "H";
        case Polarization::kV:
            return "V";
        case Polarization::kPlus:
            return "+";
        case Polarization::kMinus:
            return "-";
        case Polarization::kNone:
            break;
    }
    return "";
}

ModeId ModeId::photon(std::string location, Polarization pol, int time_bin, std::string port) {
    if (time_bin < 0) {
        throw std::invalid_argument("time bin must be >= 0");
    }
    return ModeId{std::move(location), Species::kPhotonic, pol, time_bin, std::move(port)};
}

ModeId ModeId::atom(std::string location, std::string port) {
    return ModeId{std::move(location), Species::kAtomic, Polarization::kNone, 0, std::move(port)};
}

ModeId ModeId::with_polarization(Polarization pol) const {
    if (is_atomic() && pol != Polarization::kNone) {
        throw std::invalid_argument("atomic modes carry no polarization");
    }
    ModeId m = *this;
    m.polarization = pol;
    return m;
}

ModeId ModeId::with_time_bin(int bin) const {
    if (is_atomic() && bin != 0) {
        throw std::invalid_argument("atomic modes carry no time bin");
    }
    if (bin < 0) {
        throw std::invalid_argument("time bin must be >= 0");
    }
    ModeId m = *this;
    m.time_bin = bin;
    return m;
}

ModeId ModeId::with_port(std::string new_port) const {
    ModeId m = *this;
    m.port = std::move(new_port);
    return m;
}

ModeId ModeId::with_location(std::string new_location) const {
    ModeId m = *this;
    m.location = std::move(new_location);
    return m;
}

std::string ModeId::str() const {
    if (is_atomic()) {
        return "S[" + location + ":" + port + "]";
    }
    return "a[" + location + ":" + port + "," + to_string(polarization) + ",b" + std::to_string(time_bin) + "]";
}

std::optional<size_t> find_mode(const Registry &registry, const ModeId &mode) {
    auto it = std::find(registry.begin(), registry.end(), mode);
    if (it == registry.end()) {
        return std::nullopt;
    }
    return static_cast<size_t>(it - registry.begin());
}

void require_distinct(const Registry &registry, const char *what) {
    Registry sorted = registry;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) {
        throw std::invalid_argument(std::string(what) + ": duplicate mode " + dup->str());
    }
}

}  // namespace qrep
