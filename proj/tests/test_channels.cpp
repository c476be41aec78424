// Copyright 2026 The dcqd Authors
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


#include <random>

#include <gtest/gtest.h>

#include "dcqd/protocol.hpp"

using namespace dcqd;

namespace {

DensityMatrix random_pure(std::mt19937_64 &rng, int n) {
    std::normal_distribution<double> g;
    Vector v(static_cast<Eigen::Index>(dim_of(n)));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(g(rng), g(rng));
    return DensityMatrix::from_vector(v / v.norm());
}

}  // namespace

TEST(Channels, AmplitudeDamping) {
    const auto one = DensityMatrix::basis(1, 1);
    EXPECT_LT(max_abs_diff(apply_channel(one, amplitude_damping(1.0, 1, 1)).matrix(),
                           DensityMatrix::basis(1, 0).matrix()),
              1e-15);
    EXPECT_LT(max_abs_diff(apply_channel(one, amplitude_damping(0.0, 1, 1)).matrix(), one.matrix()), 1e-15);
    const auto ad = amplitude_damping(0.4, 1, 1);
    ASSERT_EQ(ad.kraus().size(), 2U);
    EXPECT_NEAR(std::abs(ad.kraus()[1](0, 1) - std::sqrt(0.4)), 0.0, 1e-15);
    EXPECT_THROW(amplitude_damping(1.5, 1, 1), std::invalid_argument);
    EXPECT_THROW(depolarizing(-0.1, 1, 1), std::invalid_argument);
    EXPECT_THROW(amplitude_damping(0.1, 3, 2), std::exception);
}

TEST(Channels, Depolarizing) {
    std::mt19937_64 rng(21);
    const auto dp0 = depolarizing(0.0, 1, 1);
    const auto full = depolarizing(0.75, 1, 1);
    for (int t = 0; t < 5; ++t) {
        const auto rho = random_pure(rng, 1);
        EXPECT_LT(max_abs_diff(apply_channel(rho, dp0).matrix(), rho.matrix()), 1e-15);
        EXPECT_LT(max_abs_diff(apply_channel(rho, full).matrix(), Matrix::Identity(2, 2) * 0.5), 1e-15);
    }
    const auto dp = depolarizing(0.1, 1, 1);
    ASSERT_EQ(dp.kraus().size(), 4U);
    EXPECT_NEAR(dp.kraus()[0].cwiseAbs().maxCoeff(), std::sqrt(0.9), 1e-15);
    for (int k = 1; k < 4; ++k) EXPECT_NEAR(dp.kraus()[k].cwiseAbs().maxCoeff(), std::sqrt(0.1 / 3), 1e-15);
    const auto mixed = DensityMatrix::maximally_mixed(2);
    EXPECT_LT(max_abs_diff(apply_channel(mixed, depolarizing(0.3, 2, 2)).matrix(), mixed.matrix()), 1e-15);
}

TEST(Channels, IncompleteKrausRejected) {
    EXPECT_THROW(QuantumChannel(1, {gates::pauli_x() * 0.5}, "half", {1}), ContractViolation);
}

TEST(Channels, SingleKrausEqualsUnitary) {
    std::mt19937_64 rng(22);
    const Matrix h = (gates::pauli_x() + gates::pauli_z()) / std::sqrt(2.0);
    const Matrix u = kron(h, gates::pauli_y());
    for (int t = 0; t < 5; ++t) {
        const auto rho = random_pure(rng, 2);
        EXPECT_LT(max_abs_diff(apply_channel(rho, unitary_channel(u, "HY", {1, 2})).matrix(), apply_unitary(rho, u).matrix()),
                  1e-12);
    }
}

TEST(Channels, Composition) {
    std::mt19937_64 rng(23);
    const auto ad = amplitude_damping(0.3, 1, 2);
    const auto id = identity_channel(2);
    for (std::size_t b = 0; b < 4; ++b) {
        const auto rho = DensityMatrix::basis(2, b);
        EXPECT_LT(max_abs_diff(apply_channel(rho, compose(id, ad)).matrix(), apply_channel(rho, ad).matrix()), 1e-15);
    }
    const auto s1 = build_s1();
    const auto dp = depolarizing_on(0.1, s1.ancilla_sites(), s1.n());
    EXPECT_EQ(dp.kraus().size(), 256U);
    const auto ad6 = amplitude_damping(0.4, 1, 6);
    const auto probe = prepare_probe(s1);
    const auto composed = apply_channel(probe, compose(dp, ad6));
    auto sequential = apply_channel(probe, ad6);
    for (int s : s1.ancilla_sites()) sequential = apply_channel(sequential, depolarizing(0.1, s, 6));
    EXPECT_LT(max_abs_diff(composed.matrix(), sequential.matrix()), 1e-12);
}

TEST(Channels, DisjointChannelsCommute) {
    std::mt19937_64 rng(24);
    const auto ad = amplitude_damping(0.4, 1, 6);
    std::vector<QuantumChannel> dp;
    for (int s : {3, 4, 5, 6}) dp.push_back(depolarizing(0.1, s, 6));
    std::vector<QuantumChannel> ad_first{ad}, ad_last = dp;
    ad_first.insert(ad_first.end(), dp.begin(), dp.end());
    ad_last.push_back(ad);
    for (int t = 0; t < 20; ++t) {
        const auto rho = random_pure(rng, 6);
        EXPECT_LT(max_abs_diff(apply_channels(rho, ad_first).matrix(), apply_channels(rho, ad_last).matrix()), 1e-12);
    }
}

TEST(Channels, TheoreticalChi) {
    const auto chi0 = theoretical_chi_ad(0.0);
    Matrix expect = Matrix::Zero(16, 16);
    expect(0, 0) = 1.0;
    EXPECT_LT(max_abs_diff(chi0.matrix(), expect), 1e-15);
    // Table order: 0 II, 1 XI, 2 YI, 3 ZI.
    const auto chi = theoretical_chi_ad(0.4);
    EXPECT_NEAR(chi(0, 0).real(), 0.78729833462, 1e-10);
    EXPECT_NEAR(chi(3, 3).real(), 0.01270166538, 1e-10);
    EXPECT_NEAR(chi(1, 1).real(), 0.1, 1e-15);
    EXPECT_NEAR(chi(2, 2).real(), 0.1, 1e-15);
    EXPECT_NEAR(chi(0, 3).real(), 0.1, 1e-15);
    EXPECT_NEAR(std::abs(chi(2, 1) - cplx(0, 0.1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(chi(1, 2) - cplx(0, -0.1)), 0.0, 1e-15);
    for (double g = 0.0; g <= 1.0; g += 0.05) {
        const auto c = theoretical_chi_ad(g);
        EXPECT_NEAR(c.trace(), 1.0, 1e-14);
        EXPECT_TRUE(is_hermitian(c.matrix()));
    }
}

TEST(Channels, ChiFormMatchesKrausForm) {
    for (double g : {0.0, 0.1, 0.4, 0.9, 1.0}) {
        const auto chi = theoretical_chi_ad(g);
        const auto ad = amplitude_damping(g, 1, 2);
        for (std::size_t b = 0; b < 4; ++b) {
            const auto rho = DensityMatrix::basis(2, b);
            EXPECT_LT(max_abs_diff(chi.apply(rho.matrix()), apply_channel(rho, ad).matrix()), 1e-12);
        }
        EXPECT_LT(max_abs_diff(chi_from_kraus(2, {ad.kraus()[0], ad.kraus()[1]}).matrix(), chi.matrix()), 1e-12);
    }
}
