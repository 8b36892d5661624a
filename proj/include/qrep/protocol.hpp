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

#include <array>
#include <map>
#include <string>
#include <vector>

#include "qrep/fock_state.hpp"
#include "qrep/measurement.hpp"
#include "qrep/mode_transform.hpp"
#include "qrep/optics.hpp"

// Link-level entanglement generation with a two-photon midpoint herald, and
// local entanglement swapping for connecting links into a chain.
//
// Qubit convention: the left end of a link is qubit "R" of its node, the right
// end is qubit "L", so a middle node of a chain hosts L and R. Ensemble u
// emits V-polarized Stokes photons and ensemble d emits H-polarized ones.
namespace qrep::protocol {

/// Per-node truncation: keeps every term of the two-ensemble write state
/// through order χ, i.e. at most two atomic plus two photonic excitations.
inline constexpr int kNodeCap = 4;
/// Default global cap for a link: both nodes at full order χ.
inline constexpr int kDefaultCap = 8;
/// Global cap that keeps only the leading (two-photon) herald sector.
inline constexpr int kLeadingOrderCap = 4;

inline const std::string kMidpoint = "mid";

struct NodeConfig {
    double chi = 0.01;
    std::string id = "A";

    void validate() const;  // 0 < chi < 0.5
};

struct LinkConfig {
    NodeConfig node_a{0.01, "A"};
    NodeConfig node_b{0.01, "B"};
    optics::ChannelParams channel_a;
    optics::ChannelParams channel_b;
    optics::DetectorParams detector;  // shared by D1..D4, gated at bin 1
    int cap = kDefaultCap;

    void validate() const;
    QubitRef qubit_a() const { return {node_a.id, "R"}; }
    QubitRef qubit_b() const { return {node_b.id, "L"}; }
};

/// Clicks of D1..D4. D1/D2 see the interfered H outputs, D3/D4 the V outputs.
using ClickPattern = std::array<int, 4>;

/// One H-zone click and one V-zone click, nothing else.
bool is_heralding(const ClickPattern &pattern);
std::vector<ClickPattern> heralding_patterns();
std::string to_string(const ClickPattern &pattern);  // e.g. "D1D3"
/// Parses "D1D3" style labels; throws on malformed input.
ClickPattern parse_pattern(const std::string &label);

/// Two remote memory qubits and their (mixed) joint atomic state over
/// {left.u, left.d, right.u, right.d}. Ensemble weights sum to 1.
struct LinkState {
    QubitRef left;
    QubitRef right;
    std::vector<WeightedState> ensemble;

    Registry registry() const { return {left.u(), left.d(), right.u(), right.d()}; }
};

/// Local phase applied to the heralded state so that every heralding pattern
/// yields the same Bell component.
struct SignCorrection {
    bool applied = false;
    ModeId mode;
    double phase = 0.0;
};

struct HeraldedLink {
    ClickPattern pattern{};
    double probability = 0.0;  // of this pattern, per attempt
    LinkState link;
    SignCorrection sign_correction;

    /// Largest-weight branch: the two-photon herald sector at small χ.
    /// Throws std::domain_error when the pattern never fires.
    const FockState &state() const;
};

struct TimeBinSectors {
    FockState vacuum;  // no photons
    FockState bin1;    // every photon in the interfering bin (SL = LS)
    FockState bin02;   // every photon in SS or LL
    FockState cross;   // photons in bin 1 and in bin 0 or 2

    FockState sum() const;
};

struct MidpointNetwork {
    std::vector<ModeTransform> transforms;
    std::vector<optics::Detector> detectors;  // D1, D2, D3, D4
};

/// Raman write of ensembles u and d at one node, followed by the node's
/// short/long path combination: the returned state is
/// {1 + √χ(S†_u a†_{V,L} + S†_d a†_{H,S}) + (χ/2)[...]}|vac⟩ term for term.
FockState write_node(const NodeConfig &cfg, const std::string &qubit);

std::string midpoint_location(const QubitRef &side);

/// Channel noise, half-link loss, then the midpoint PBS and its opposite
/// path arrangement. Photons end at location midpoint_location(side) with
/// ports "H"/"V". Branches are over lost photons.
std::vector<MeasurementBranch> propagate_to_midpoint(const FockState &state, const optics::ChannelParams &channel,
                                                     const QubitRef &side);

/// Partitions amplitudes by photonic time-bin support. The parts sum to the
/// input exactly.
TimeBinSectors decompose_timebins(const FockState &state);

/// H outputs of both sides meet on one 50/50 BS (D1, D2) and V outputs on a
/// second one (D3, D4), for every time bin; detectors are gated per `params`.
MidpointNetwork build_midpoint_network(const QubitRef &a, const QubitRef &b, const optics::DetectorParams &params);

/// Full link simulation; one entry per heralding pattern.
std::map<ClickPattern, HeraldedLink> herald_all(const LinkConfig &cfg);

/// Throws std::invalid_argument("not a heralding pattern") for invalid patterns.
HeraldedLink generate_entanglement(const LinkConfig &cfg, const ClickPattern &pattern);

/// All heralding patterns pooled into one ensemble, weighted by pattern
/// probability. Valid because every pattern is sign-corrected to the same
/// Bell component. Empty ensemble if nothing heralds.
LinkState heralded_mixture(const std::map<ClickPattern, HeraldedLink> &heralds);

/// Sum over the four heralding patterns.
double total_herald_probability(const LinkConfig &cfg);

/// Coincidence probability produced by the cross sector of either node with
/// the other node empty, i.e. the order-χ² cross contribution.
double cross_term_coincidence_check(const LinkConfig &cfg);

/// (S†_uA S†_dB + S†_dA S†_uB)|vac⟩/√2 over link.registry().
FockState link_bell_state(const QubitRef &left, const QubitRef &right);
/// (S†_uA S†_uC + S†_dA S†_dC)|vac⟩/√2.
FockState swap_bell_state(const QubitRef &left, const QubitRef &right);

/// Projection of a link state onto span{S†_uA S†_dB, S†_dA S†_uB}|vac⟩ (unnormalized).
FockState bell_component(const FockState &state, const QubitRef &left, const QubitRef &right);

/// Fidelity of the normalized Bell component with link_bell_state, averaged
/// over the ensemble with Bell-sector weights.
double bell_fidelity(const LinkState &link);
/// Herald probability times the ensemble's Bell-sector weight.
double bell_channel_probability(const HeraldedLink &link);

/// Fidelity with `target` after restricting every branch to exactly one
/// excitation at each end node. Throws std::domain_error if that subspace
/// carries no weight.
double postselected_fidelity(const LinkState &link, const FockState &target);

struct SwapConfig {
    double retrieval_eta = 1.0;
    double detector_eta = 1.0;
    bool number_resolving = false;

    void validate() const;
};

struct SwapResult {
    double p2 = 0.0;
    double p1 = 0.0;
    double p0 = 0.0;
    double p_excess = 0.0;  // three or more end-node excitations (higher-order input terms)
    LinkState link;
    double herald_probability = 0.0;  // cumulative over all swap levels
    std::vector<double> p2_by_level;
};

/// Retrieves the two qubits at the shared node into anti-Stokes photons
/// (u -> H, d -> V, amplitude √η_r), rotates them to the diagonal basis,
/// combines them on a PBS and detects each output in the ± basis. A herald is
/// one click in each output zone. Same-qubit photon pairs bunch into one zone.
SwapResult local_swap(const LinkState &ab, const LinkState &bc, const SwapConfig &cfg);
SwapResult local_swap(const HeraldedLink &ab, const HeraldedLink &bc, double retrieval_eta, double detector_eta);

/// Herald probability caused only by inputs where one middle qubit holds
/// S†_u S†_d and the other middle qubit is empty.
double two_excitation_elimination_check(const LinkState &ab, const LinkState &bc, const SwapConfig &cfg = {});

/// Nested pairwise swapping of 2^n adjacent links.
SwapResult chain_connect(const std::vector<LinkState> &links, const SwapConfig &cfg);

/// Post-selected fidelity against swap_bell_state of the end qubits.
double postselected_fidelity(const SwapResult &result);

}  // namespace qrep::protocol
