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

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "qrep/fock_state.hpp"

namespace qrep {

inline constexpr double kIsometryTolerance = 1e-10;

/// Linear map on creation operators: a†_i → Σ_j U(j, i) b†_j, with i over
/// in_modes and j over out_modes. U must be an isometry (U†U = I).
class ModeTransform {
   public:
    ModeTransform(Registry in_modes, Registry out_modes, Eigen::MatrixXcd matrix);

    /// Mode relabeling, a permutation with unit amplitudes.
    static ModeTransform relabel(const std::map<ModeId, ModeId> &mapping);

    const Registry &in_modes() const { return in_; }
    const Registry &out_modes() const { return out_; }
    const Eigen::MatrixXcd &matrix() const { return u_; }

    bool is_square() const { return u_.rows() == u_.cols(); }
    /// max |U†U - I|.
    double isometry_defect() const;
    /// max(|U†U - I|, |UU† - I|); only meaningful for square matrices.
    double unitarity_defect() const;

    /// U† with in/out swapped. Requires a unitary transform.
    ModeTransform adjoint() const;

   private:
    Registry in_;
    Registry out_;
    Eigen::MatrixXcd u_;
};

/// Rewrites every basis vector as a product of transformed creation operators
/// and re-expands. In-modes that are not also out-modes leave the registry;
/// new out-modes are appended. Throws on unknown in-modes or on out-modes that
/// collide with untouched registry modes.
FockState apply_transform(const FockState &state, const ModeTransform &t);

/// Applies transforms in order, first adding any missing in-modes in vacuum.
FockState apply_network(const FockState &state, const std::vector<ModeTransform> &network);

}  // namespace qrep
