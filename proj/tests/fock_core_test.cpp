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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracle/compare.hpp"
#include "oracle/dense_fock.hpp"
#include "oracle/symbolic.hpp"
#include "qrep/fock_state.hpp"
#include "qrep/measurement.hpp"
#include "qrep/mode_transform.hpp"

namespace qrep {
namespace {

Registry photons(int n) {
    Registry r;
    for (int i = 0; i < n; ++i) {
        r.push_back(ModeId::photon("x", Polarization::kH, 0, "p" + std::to_string(i)));
    }
    return r;
}

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = {g(rng), g(rng)};
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

// Random state with `terms` basis vectors of total excitation <= cap.
FockState random_state(const Registry &reg, int cap, int terms, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(reg.size()) - 1);
    std::uniform_int_distribution<int> level(0, cap);
    std::normal_distribution<double> g;
    AmplitudeMap amps;
    for (int t = 0; t < terms; ++t) {
        Occupation occ(reg.size(), 0);
        const int n = level(rng);
        for (int k = 0; k < n; ++k) {
            occ[static_cast<size_t>(pick(rng))] += 1;
        }
        amps[occ] += Amplitude(g(rng), g(rng));
    }
    return FockState::from_amplitudes(reg, cap, amps);
}

TEST(FockState, VacuumHasSingleUnitAmplitude) {
    const FockState v = FockState::vacuum(photons(2), 4);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v.amplitude(Occupation{0, 0}), Amplitude(1.0));
    EXPECT_DOUBLE_EQ(v.squared_norm(), 1.0);
}

TEST(FockState, DuplicateModesRejected) {
    const ModeId a = ModeId::photon("x", Polarization::kH, 0, "p");
    EXPECT_THROW(FockState::vacuum({a, a}, 2), std::invalid_argument);
}

TEST(FockState, AmplitudeOverCapRejected) {
    EXPECT_THROW(FockState::from_amplitudes(photons(2), 2, {{{2, 1}, 1.0}}), std::invalid_argument);
    EXPECT_THROW(FockState::from_amplitudes(photons(2), 2, {{{1}, 1.0}}), std::invalid_argument);
}

TEST(FockState, ExcitedLayerOrthogonalToVacuum) {
    const Registry reg = photons(2);
    CreationPolynomial twice;
    twice.add(1.0, {reg[0], reg[0]});
    const FockState v = FockState::vacuum(reg, 4);
    const FockState s = apply_polynomial(v, twice);
    EXPECT_EQ(inner_product(v, s), Amplitude(0.0));
    EXPECT_NEAR(std::abs(s.amplitude(Occupation{2, 0}) - std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(FockState, RamanPolynomialAmplitudes) {
    const double chi = 0.01;
    const ModeId s = ModeId::atom("A", "u");
    const ModeId a = ModeId::photon("A", Polarization::kV, 0, "q");
    CreationPolynomial p;
    p.add(1.0, {});
    p.add(std::sqrt(chi), {s, a});
    p.add(chi / 2.0, {s, s, a, a});
    const FockState out = apply_polynomial(FockState::vacuum({s, a}, 4), p);

    oracle::Poly q = oracle::Poly::constant(1.0) +
                     oracle::Poly::var(s.str()) * oracle::Poly::var(a.str()) * std::sqrt(chi) +
                     oracle::Poly::var(s.str()) * oracle::Poly::var(s.str()) * oracle::Poly::var(a.str()) *
                         oracle::Poly::var(a.str()) * (chi / 2.0);
    EXPECT_LT(oracle::max_deviation(out, q), 1e-15);
    EXPECT_NEAR(out.amplitude(Occupation{1, 1}).real(), 0.1, 1e-15);
    EXPECT_NEAR(out.amplitude(Occupation{2, 2}).real(), 0.01, 1e-15);
    EXPECT_NEAR(out.squared_norm(), 1.0 + chi + chi * chi, 1e-15);
}

TEST(FockState, EmptyProductIsIdentity) {
    std::mt19937_64 rng(1);
    const FockState s = random_state(photons(3), 3, 6, rng);
    CreationPolynomial one;
    one.add(1.0, {});
    const FockState t = apply_polynomial(s, one);
    EXPECT_LT((t - s).squared_norm(), 1e-30);
}

TEST(FockState, PolynomialDropsOverCapTerms) {
    const Registry reg = photons(2);
    const FockState full = FockState::from_amplitudes(reg, 2, {{{1, 1}, 1.0}});
    CreationPolynomial p;
    p.add(1.0, {reg[0]});
    EXPECT_TRUE(apply_polynomial(full, p).empty());
}

TEST(FockState, PolynomialIsLinear) {
    std::mt19937_64 rng(2);
    const Registry reg = photons(3);
    const FockState a = random_state(reg, 4, 5, rng);
    const FockState b = random_state(reg, 4, 5, rng);
    CreationPolynomial p;
    p.add({0.3, -0.2}, {reg[0], reg[2]});
    p.add(0.7, {reg[1]});
    const Amplitude c(1.5, 0.5);
    const FockState lhs = apply_polynomial(a.scaled(c) + b, p);
    const FockState rhs = apply_polynomial(a, p).scaled(c) + apply_polynomial(b, p);
    EXPECT_LT((lhs - rhs).squared_norm(), 1e-24);

    CreationPolynomial p2;
    p2.add({0.6, -0.4}, {reg[0], reg[2]});
    p2.add(1.4, {reg[1]});
    EXPECT_LT((apply_polynomial(a, p2) - apply_polynomial(a, p).scaled(2.0)).squared_norm(), 1e-24);
}

TEST(FockState, PolynomialMatchesDenseCreationOperators) {
    std::mt19937_64 rng(3);
    const Registry reg = photons(4);
    const FockState s = random_state(reg, 4, 4, rng).with_cap(4);
    CreationPolynomial p;
    p.add(0.5, {reg[0], reg[1]});
    p.add({0.0, 1.0}, {reg[3], reg[3]});
    const FockState got = apply_polynomial(s, p);

    oracle::DenseFock a = oracle::to_dense(s, 4);
    a.create(1);
    a.create(0);
    oracle::DenseFock b = oracle::to_dense(s, 4);
    b.create(3);
    b.create(3);
    oracle::DenseFock want(4, 4);
    want.vec() = 0.5 * a.vec() + Amplitude(0.0, 1.0) * b.vec();
    EXPECT_LT(oracle::max_deviation(got, want), 1e-12);
}

TEST(FockState, RaisingCapKeepsExistingAmplitudes) {
    const ModeId s = ModeId::atom("A", "u");
    const ModeId a = ModeId::photon("A", Polarization::kV, 0, "q");
    CreationPolynomial p;
    p.add(1.0, {});
    p.add(0.3, {s, a});
    p.add(0.045, {s, s, a, a});
    FockState prev;
    for (int cap = 0; cap <= 6; ++cap) {
        const FockState cur = apply_polynomial(FockState::vacuum({s, a}, cap), p);
        if (cap > 0) {
            for (const auto &[occ, amp] : prev.amplitudes()) {
                EXPECT_EQ(cur.amplitude(occ), amp);
            }
            EXPECT_GE(cur.squared_norm(), prev.squared_norm());
        }
        prev = cur;
    }
    const FockState low = prev.with_cap(2);
    EXPECT_EQ(low.size(), 2u);
    EXPECT_EQ(low.with_cap(6).size(), 2u);
}

TEST(FockState, ReorderAndModeHelpers) {
    const Registry reg = photons(3);
    const FockState s = FockState::from_amplitudes(reg, 3, {{{1, 0, 2}, 0.5}, {{0, 1, 0}, 0.25}});
    const FockState r = s.reordered({reg[2], reg[0], reg[1]});
    EXPECT_EQ(r.amplitude(Occupation{2, 1, 0}), Amplitude(0.5));
    EXPECT_EQ(inner_product(s, r), Amplitude(0.3125));
    const ModeId extra = ModeId::photon("y", Polarization::kV, 1, "z");
    const FockState w = s.with_modes({extra});
    EXPECT_EQ(w.registry().size(), 4u);
    EXPECT_THROW(s.without_modes({reg[0]}), std::invalid_argument);
    EXPECT_EQ(w.without_modes({extra}).registry(), reg);
    EXPECT_THROW(s.index_of(extra), std::invalid_argument);
    EXPECT_THROW(inner_product(s, w), std::invalid_argument);
}

TEST(FockState, FidelityBasics) {
    const Registry reg = photons(2);
    const FockState a = FockState::from_amplitudes(reg, 2, {{{1, 0}, 1.0}});
    const FockState b = FockState::from_amplitudes(reg, 2, {{{0, 1}, 1.0}});
    EXPECT_DOUBLE_EQ(fidelity(a, a.scaled({0.0, 3.0})), 1.0);
    EXPECT_DOUBLE_EQ(fidelity(a, b), 0.0);
    EXPECT_THROW(fidelity(a, FockState::from_amplitudes(reg, 2, {})), std::domain_error);
    EXPECT_THROW(FockState::from_amplitudes(reg, 2, {}).normalized(), std::domain_error);
}

TEST(FockState, PruneDropsTinyAmplitudes) {
    const FockState s = FockState::from_amplitudes(photons(1), 1, {{{0}, 1e-16}, {{1}, 1.0}});
    EXPECT_EQ(s.size(), 1u);
}

TEST(ModeTransform, RejectsBadMatrices) {
    const Registry reg = photons(2);
    EXPECT_THROW(ModeTransform(reg, reg, Eigen::MatrixXcd::Constant(2, 2, 1.0)), std::invalid_argument);
    EXPECT_THROW(ModeTransform(reg, reg, Eigen::MatrixXcd::Identity(3, 2)), std::invalid_argument);
    EXPECT_THROW(ModeTransform({reg[0], reg[0]}, reg, Eigen::MatrixXcd::Identity(2, 2)), std::invalid_argument);
    const FockState s = FockState::vacuum({reg[0]}, 2);
    EXPECT_THROW(apply_transform(s, ModeTransform(reg, reg, Eigen::MatrixXcd::Identity(2, 2))), std::invalid_argument);
}

TEST(ModeTransform, HongOuMandel) {
    const Registry reg = photons(2);
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd bs(2, 2);
    bs << r, r, r, -r;
    const FockState in = FockState::from_amplitudes(reg, 2, {{{1, 1}, 1.0}});
    const FockState out = apply_transform(in, ModeTransform(reg, reg, bs));
    EXPECT_LT(std::abs(out.amplitude(Occupation{1, 1})), 1e-15);
    EXPECT_NEAR(out.amplitude(Occupation{2, 0}).real(), r, 1e-15);
    EXPECT_NEAR(out.amplitude(Occupation{0, 2}).real(), -r, 1e-15);
    EXPECT_NEAR(out.squared_norm(), 1.0, 1e-15);
}

TEST(ModeTransform, IdentityLeavesStateUnchanged) {
    std::mt19937_64 rng(4);
    const Registry reg = photons(3);
    const FockState s = random_state(reg, 4, 8, rng);
    const FockState t = apply_transform(s, ModeTransform(reg, reg, Eigen::MatrixXcd::Identity(3, 3)));
    EXPECT_LT((t - s).squared_norm(), 1e-28);
}

TEST(ModeTransform, UnitaryRoundTripPreservesState) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const Registry reg = photons(4);
        const FockState s = random_state(reg, 4, 10, rng);
        const ModeTransform u(reg, reg, random_unitary(4, rng));
        EXPECT_LT(u.unitarity_defect(), 1e-12);
        const FockState t = apply_transform(s, u);
        EXPECT_NEAR(t.squared_norm(), s.squared_norm(), 1e-12 * s.squared_norm());
        const FockState back = apply_transform(t, u.adjoint()).reordered(reg);
        EXPECT_LT(std::sqrt((back - s).squared_norm()), 1e-12);
    }
}

TEST(ModeTransform, AgreesWithDenseOracle) {
    std::mt19937_64 rng(6);
    struct Case {
        int modes;
        int cap;
        int terms;
    };
    for (const Case c : {Case{2, 4, 8}, Case{3, 4, 12}, Case{5, 4, 30}, Case{6, 3, 30}, Case{6, 4, 8}}) {
        const Registry reg = photons(c.modes);
        const FockState s = random_state(reg, c.cap, c.terms, rng);
        const Eigen::MatrixXcd u = random_unitary(c.modes, rng);
        const FockState got = apply_transform(s, ModeTransform(reg, reg, u));
        const oracle::DenseFock want = oracle::to_dense(s, c.cap).transformed(u);
        EXPECT_LT(oracle::max_deviation(got, want), 1e-10) << c.modes << " modes, cap " << c.cap;
    }
}

TEST(ModeTransform, IsometryMatchesCompletedUnitary) {
    std::mt19937_64 rng(7);
    const Registry in = photons(2);
    Registry out = in;
    const ModeId l0 = ModeId::photon("x", Polarization::kH, 0, "l0");
    const ModeId l1 = ModeId::photon("x", Polarization::kH, 0, "l1");
    out.push_back(l0);
    out.push_back(l1);
    const Eigen::MatrixXcd full = random_unitary(4, rng);
    const Eigen::MatrixXcd iso = full.leftCols(2);
    const FockState s = random_state(in, 3, 6, rng);
    const FockState got = apply_transform(s, ModeTransform(in, out, iso));
    ASSERT_EQ(got.registry(), out);
    const oracle::DenseFock want = oracle::to_dense(s.with_modes({l0, l1}), 3).transformed(full);
    EXPECT_LT(oracle::max_deviation(got, want), 1e-10);
}

TEST(ModeTransform, RelabelMovesOccupation) {
    const Registry reg = photons(2);
    const ModeId target = ModeId::photon("y", Polarization::kV, 2, "t");
    const FockState s = FockState::from_amplitudes(reg, 3, {{{2, 1}, 1.0}});
    const FockState t = apply_transform(s, ModeTransform::relabel({{reg[0], target}}));
    EXPECT_NEAR(t.amplitude({{reg[1], 1}, {target, 2}}).real(), 1.0, 1e-15);
    EXPECT_FALSE(t.has_mode(reg[0]));
}

TEST(Measurement, VacuumModeGivesCertainNoClick) {
    const FockState v = FockState::vacuum(photons(2), 2);
    const auto br = measure_modes(v, {photons(2)[0]}, false);
    ASSERT_EQ(br.size(), 1u);
    EXPECT_EQ(br[0].outcome, std::vector<int>{0});
    EXPECT_DOUBLE_EQ(br[0].probability, 1.0);
}

TEST(Measurement, OneArmOfSplitPhoton) {
    const Registry reg = photons(2);
    const double r = 1.0 / std::sqrt(2.0);
    const FockState s = FockState::from_amplitudes(reg, 1, {{{1, 0}, r}, {{0, 1}, r}});
    const auto br = measure_modes(s, {reg[0]}, true);
    ASSERT_EQ(br.size(), 2u);
    for (const auto &b : br) {
        EXPECT_NEAR(b.probability, 0.5, 1e-15);
        EXPECT_NEAR(b.state.squared_norm(), 1.0, 1e-15);
        EXPECT_EQ(b.state.registry(), Registry{reg[1]});
    }
}

TEST(Measurement, NonResolvingClickSumsPhotonNumbers) {
    const Registry reg = photons(1);
    const Amplitude alpha(0.3, 0.1);
    const Amplitude beta(-0.2, 0.4);
    const Amplitude vac = std::sqrt(1.0 - std::norm(alpha) - std::norm(beta));
    const FockState s = FockState::from_amplitudes(reg, 2, {{{0}, vac}, {{1}, alpha}, {{2}, beta}});
    const auto coarse = measure_modes(s, reg, false);
    EXPECT_NEAR(pattern_probability(coarse, {1}), std::norm(alpha) + std::norm(beta), 1e-15);
    const auto fine = measure_modes(s, reg, true);
    EXPECT_NEAR(pattern_probability(fine, {1}) + pattern_probability(fine, {2}), std::norm(alpha) + std::norm(beta),
                1e-15);
    EXPECT_THROW(measure_modes(s, {}, true), std::invalid_argument);
}

TEST(Measurement, BranchesSumToSquaredNorm) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const Registry reg = photons(4);
        const FockState s = random_state(reg, 4, 12, rng);
        for (bool resolving : {true, false}) {
            const auto br = measure_modes(s, {reg[1], reg[3]}, resolving);
            EXPECT_NEAR(total_probability(br), s.squared_norm(), 1e-12 * s.squared_norm());
            for (const auto &b : br) {
                EXPECT_NEAR(b.state.squared_norm(), 1.0, 1e-12);
            }
        }
        EXPECT_NEAR(total_probability(trace_out(s, {reg[0]})), s.squared_norm(), 1e-12 * s.squared_norm());
    }
}

TEST(Measurement, CompactMergesPhaseEquivalentStates) {
    const Registry reg = photons(2);
    const FockState a = FockState::from_amplitudes(reg, 1, {{{1, 0}, 1.0}});
    const FockState b = FockState::from_amplitudes(reg, 1, {{{0, 1}, 1.0}});
    auto ens = compact({{0.25, a}, {0.5, a.scaled({0.0, 1.0})}, {0.25, b}, {0.0, b}});
    ASSERT_EQ(ens.size(), 2u);
    EXPECT_NEAR(ens[0].weight + ens[1].weight, 1.0, 1e-15);
}

}  // namespace
}  // namespace qrep
