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
#include <set>

#include <gtest/gtest.h>

#include "dcqd/stabilizer_code.hpp"

using namespace dcqd;

namespace {

std::vector<std::string> formatted(const StabilizerCode &c) {
    std::vector<std::string> out;
    for (const auto &g : c.generators()) out.push_back(g.format());
    return out;
}

// Oracle: the syndrome read off dense commutation tests.
std::string dense_syndrome(const StabilizerCode &c, const PauliOperator &e) {
    std::string s;
    const Matrix me = to_matrix(e);
    for (const auto &g : c.generators()) {
        const Matrix mg = to_matrix(g);
        s.push_back(max_abs_diff(me * mg, mg * me) < 1e-12 ? '0' : '1');
    }
    return s;
}

}  // namespace

TEST(Codes, S0) {
    const auto s0 = build_s0();
    EXPECT_EQ(formatted(s0), (std::vector<std::string>{"XIXI", "IXIX", "ZIZI", "IZIZ"}));
    EXPECT_EQ(s0.r(), 4);
    EXPECT_EQ(s0.k(), 0);
    EXPECT_EQ(s0.principal_sites(), (std::vector<int>{1, 2}));
    EXPECT_EQ(s0.ancilla_sites(), (std::vector<int>{3, 4}));
    for (const auto &a : s0.generators())
        for (const auto &b : s0.generators()) EXPECT_TRUE(commutes(a, b));
}

TEST(Codes, S422Logicals) {
    const auto se = build_s422();
    EXPECT_EQ(formatted(se), (std::vector<std::string>{"XXXX", "ZZZZ"}));
    ASSERT_EQ(se.logicals().size(), 2U);
    const auto &l1 = se.logicals()[0], &l2 = se.logicals()[1];
    EXPECT_EQ(l1.x.format(), "XXII");
    EXPECT_EQ(l1.z.format(), "ZIZI");
    EXPECT_EQ(l2.x.format(), "IXIX");
    EXPECT_EQ(l2.z.format(), "IIZZ");
    EXPECT_FALSE(commutes(l1.x, l1.z));
    EXPECT_TRUE(commutes(l1.x, l2.z));
    EXPECT_FALSE(commutes(l2.x, l2.z));
    for (const auto &g : se.generators()) {
        for (const auto &l : se.logicals()) {
            EXPECT_TRUE(commutes(g, l.x));
            EXPECT_TRUE(commutes(g, l.z));
        }
    }
}

TEST(Codes, ConcatenationGivesS1InOrder) {
    const auto s1 = concatenate_ancilla(build_s0(), build_s422());
    EXPECT_EQ(formatted(s1),
              (std::vector<std::string>{"IIXXXX", "IIZZZZ", "XIXXII", "ZIZIZI", "IXIXIX", "IZIIZZ"}));
    EXPECT_EQ(s1.n(), 6);
    EXPECT_EQ(s1.k(), 0);
    EXPECT_EQ(s1.r(), 6);
    EXPECT_EQ(s1.ancilla_sites(), (std::vector<int>{3, 4, 5, 6}));
    EXPECT_EQ(s1.filter_prefix(), 2);
    EXPECT_EQ(StabilizerCode::symplectic_rank(s1.generators()), 6);
}

TEST(Codes, ConstructionErrors) {
    const auto gens = [](std::initializer_list<const char *> t) { return detail::parse_all(t); };
    EXPECT_THROW(StabilizerCode("bad", gens({"XI", "ZI"}), {1}, {2}), ConstructionError);
    EXPECT_THROW(StabilizerCode("dep", gens({"XX", "XX"}), {1}, {2}), ConstructionError);
    EXPECT_THROW(StabilizerCode("phase", gens({"iXX"}), {1}, {2}), ConstructionError);
    EXPECT_THROW(StabilizerCode("sites", gens({"XX", "ZZ"}), {1}, {1}), ConstructionError);
    EXPECT_THROW(StabilizerCode("prefix", gens({"XX", "ZZ"}), {1}, {2}, 1), ConstructionError);
    // Inner code without logical operators cannot carry the outer ancilla letters.
    const StabilizerCode no_logicals("plain", gens({"XXXX", "ZZZZ"}), {1, 2, 3, 4}, {});
    EXPECT_THROW(concatenate_ancilla(build_s0(), no_logicals), std::exception);
}

TEST(Codes, Codeword) {
    const auto s1 = build_s1();
    const Vector v = codeword_vector(s1);
    const std::set<int> expected{0b000000, 0b001111, 0b010101, 0b011010, 0b100011, 0b101100, 0b110110, 0b111001};
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double want = expected.count(static_cast<int>(i)) ? 1.0 / std::sqrt(8.0) : 0.0;
        EXPECT_NEAR(std::abs(v(i) - want), 0.0, 1e-12) << i;
    }
    for (const auto &g : s1.generators()) EXPECT_NEAR((v.adjoint() * to_matrix(g) * v)(0, 0).real(), 1.0, 1e-12);
    const StabilizerCode k1("k1", detail::parse_all({"ZZ"}), {1}, {2});
    EXPECT_THROW(codeword_vector(k1), Unsupported);
}

TEST(Codes, SyndromeExamples) {
    const auto s1 = build_s1();
    EXPECT_EQ(syndrome_of_error(s1, PauliOperator::parse("XIIIII")).str(), "000100");
    EXPECT_EQ(syndrome_of_error(s1, PauliOperator::identity(6)).str(), "000000");
    EXPECT_EQ(syndrome_of_error(s1, PauliOperator::parse("IIXIII")).str(), "010100");
    EXPECT_THROW(syndrome_of_error(s1, PauliOperator::parse("XX")), DimensionError);
}

TEST(Codes, SyndromeIsLinearAndMatchesDense) {
    const auto s1 = build_s1();
    std::mt19937_64 rng(5);
    for (int t = 0; t < 1000; ++t) {
        const PauliOperator a(6, rng() & 63, rng() & 63), b(6, rng() & 63, rng() & 63);
        EXPECT_EQ(syndrome_of_error(s1, a * b), syndrome_of_error(s1, a) ^ syndrome_of_error(s1, b));
        if (t < 100) EXPECT_EQ(syndrome_of_error(s1, a).str(), dense_syndrome(s1, a));
    }
}

TEST(Codes, NormalizerEqualsStabilizerGroup) {
    const auto s1 = build_s1();
    // Group elements up to phase by subset products of the generators.
    std::set<std::pair<std::uint64_t, std::uint64_t>> group;
    for (int mask = 0; mask < 64; ++mask) {
        PauliOperator p = PauliOperator::identity(6);
        for (int j = 0; j < 6; ++j)
            if (mask >> j & 1) p = p * s1.generator(j);
        group.insert({p.x_mask(), p.z_mask()});
    }
    int normalizer = 0;
    for (std::uint64_t x = 0; x < 64; ++x) {
        for (std::uint64_t z = 0; z < 64; ++z) {
            const PauliOperator p(6, x, z);
            if (syndrome_of_error(s1, p).is_trivial()) {
                ++normalizer;
                EXPECT_TRUE(group.count({x, z})) << p;
            }
        }
    }
    EXPECT_EQ(normalizer, 64);
}

TEST(Codes, LocatedTable) {
    const auto rows = located_error_table(build_s1());
    ASSERT_EQ(rows.size(), 16U);
    EXPECT_EQ(rows[7].principal.letters(), "XX");
    EXPECT_EQ(rows[7].syndrome.str(), "000101");
    EXPECT_EQ(rows[8].principal.letters(), "XY");
    EXPECT_EQ(rows[8].syndrome.str(), "000111");
    EXPECT_EQ(rows[15].principal.letters(), "ZZ");
    EXPECT_EQ(rows[15].syndrome.str(), "001010");
    std::set<std::uint32_t> seen;
    for (const auto &r : rows) {
        EXPECT_EQ(r.syndrome.prefix(2), 0U);
        seen.insert(r.syndrome.index());
    }
    EXPECT_EQ(seen.size(), 16U);
}

TEST(Codes, Partition) {
    const auto s1 = build_s1();
    const auto part = partition_error_set(s1);
    EXPECT_EQ(part.located.size(), 16U);
    EXPECT_EQ(part.ancilla_weight_one.size(), 12U);
    EXPECT_EQ(part.composite.size(), 192U);
    for (const auto &e : part.ancilla_weight_one) EXPECT_NE(syndrome_of_error(s1, e).prefix(2), 0U);
    for (const auto &e : part.composite) EXPECT_NE(syndrome_of_error(s1, e).prefix(2), 0U);
}

TEST(Codes, QecConditionMatrix) {
    const auto s1 = build_s1();
    std::vector<PauliOperator> located;
    for (const auto &r : located_error_table(s1)) located.push_back(r.full);
    const Matrix c = qec_condition_matrix(s1, located);
    EXPECT_LT(max_abs_diff(c, Matrix::Identity(16, 16)), 1e-12);
    // E_b = E_a times a stabilizer element is a degenerate pair.
    const auto a = PauliOperator::parse("XIIIII");
    const auto b = a * s1.generator(0);
    const Matrix d = qec_condition_matrix(s1, {a, b});
    EXPECT_NEAR(std::abs(d(0, 1)), 1.0, 1e-12);
    EXPECT_TRUE(is_hermitian(d));
}

TEST(Codes, HammingBound) {
    auto h = located_hamming_bound(2, 0, 4);
    EXPECT_TRUE(h.satisfied);
    EXPECT_TRUE(h.saturated);
    EXPECT_EQ(h.lhs, 16U);
    h = located_hamming_bound(2, 0, 3);
    EXPECT_FALSE(h.satisfied);
    EXPECT_EQ(h.margin(), -8);
    h = located_hamming_bound(1, 0, 2);
    EXPECT_TRUE(h.saturated);
    EXPECT_TRUE(located_hamming_bound(2, 0, 6).satisfied);
}

TEST(Codes, DecoderIsInjective) {
    const auto s1 = build_s1();
    const auto dec = syndrome_decoder(s1);
    for (const auto &r : located_error_table(s1)) EXPECT_EQ(dec[r.syndrome.index()], r.index);
}
