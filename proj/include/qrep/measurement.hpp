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

#include <vector>

#include "qrep/fock_state.hpp"

namespace qrep {

/// One outcome of a measurement. `outcome[i]` belongs to the i-th measured
/// mode (or detector); it is a photon count, or 0/1 for no-click/click when
/// the measurement is not number resolving. The probability is unnormalized:
/// branches of a complete measurement sum to the input's squared norm.
/// Several branches may share a coarse outcome; together they form a mixture.
struct MeasurementBranch {
    std::vector<int> outcome;
    double probability = 0.0;
    FockState state;  // normalized, over the unmeasured modes
};

/// Projective measurement of `modes` in the number basis. The conditional
/// states live on the registry with the measured modes removed.
std::vector<MeasurementBranch> measure_modes(const FockState &state, const Registry &modes, bool number_resolving);

/// Measures `modes` and forgets the result: one branch per number outcome
/// with an empty outcome vector.
std::vector<MeasurementBranch> trace_out(const FockState &state, const Registry &modes);

double total_probability(const std::vector<MeasurementBranch> &branches);

/// Summed probability of branches whose outcome equals `pattern`.
double pattern_probability(const std::vector<MeasurementBranch> &branches, const std::vector<int> &pattern);

/// A weighted ensemble of normalized pure states, i.e. a mixed state.
struct WeightedState {
    double weight = 0.0;
    FockState state;
};

/// Merges entries whose states agree up to a global phase, drops zero weights.
std::vector<WeightedState> compact(std::vector<WeightedState> ensemble, double tolerance = 1e-12);

/// Same density matrix, re-expressed by its eigenvectors: at most rank-many
/// states, heaviest first. Eigenvalues below `tolerance` times the trace are
/// dropped. All states must hold the same modes.
std::vector<WeightedState> spectral_compact(const std::vector<WeightedState> &ensemble, double tolerance = 1e-15);

}  // namespace qrep
