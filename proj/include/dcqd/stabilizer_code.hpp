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

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcqd/errors.hpp"
#include "dcqd/linalg.hpp"
#include "dcqd/pauli.hpp"

namespace dcqd {

/// Generator eigenvalue record; bit j is 0 for +1 and 1 for -1 of generator j.
/// Generator 0 is the leftmost character of str().
class Syndrome {
  public:
    static constexpr int kMaxBits = 32;

    Syndrome() = default;
    Syndrome(int length, std::uint32_t value) : length_(length), value_(value) {
        if (length < 0 || length > kMaxBits) throw DimensionError("syndrome length out of range");
        if (length < kMaxBits && (value >> length) != 0) throw DimensionError("syndrome value wider than length");
    }

    static Syndrome from_string(std::string_view bits) {
        std::uint32_t v = 0;
        for (std::size_t k = 0; k < bits.size(); ++k) {
            if (bits[k] != '0' && bits[k] != '1') throw ParseError("syndrome bit must be 0 or 1", k + 1);
            v = (v << 1) | static_cast<std::uint32_t>(bits[k] - '0');
        }
        return Syndrome(static_cast<int>(bits.size()), v);
    }

    int size() const { return length_; }
    /// Integer with generator 0 as the most significant bit.
    std::uint32_t index() const { return value_; }
    bool bit(int j) const { return (value_ >> (length_ - 1 - j)) & 1U; }
    bool is_trivial() const { return value_ == 0; }

    /// The first `count` bits as an integer.
    std::uint32_t prefix(int count) const { return count == 0 ? 0 : value_ >> (length_ - count); }

    std::string str() const {
        std::string s;
        for (int j = 0; j < length_; ++j) s.push_back(bit(j) ? '1' : '0');
        return s;
    }

    Syndrome operator^(const Syndrome &o) const {
        if (o.length_ != length_) throw DimensionError("syndrome lengths differ");
        return Syndrome(length_, value_ ^ o.value_);
    }

    friend bool operator==(const Syndrome &, const Syndrome &) = default;

  private:
    int length_ = 0;
    std::uint32_t value_ = 0;
};

/// Logical operator pair for one encoded qubit.
struct LogicalPair {
    PauliOperator x;
    PauliOperator z;
};

/// Stabilizer code with a principal/ancilla site partition.
///
/// The first `filter_prefix()` generators act only on the ancilla and exist to
/// flag ancilla noise; a syndrome whose prefix over them is nonzero is rejected.
class StabilizerCode {
  public:
    StabilizerCode(std::string label, std::vector<PauliOperator> generators, std::vector<int> principal_sites,
                   std::vector<int> ancilla_sites, int filter_prefix = 0, std::vector<LogicalPair> logicals = {})
        : label_(std::move(label)),
          generators_(std::move(generators)),
          principal_(std::move(principal_sites)),
          ancilla_(std::move(ancilla_sites)),
          filter_prefix_(filter_prefix),
          logicals_(std::move(logicals)) {
        if (generators_.empty()) throw ConstructionError("code needs at least one generator");
        n_ = generators_.front().num_qubits();
        for (const auto &g : generators_) {
            if (g.num_qubits() != n_) throw ConstructionError("generators act on different register sizes");
            if (!g.is_hermitian()) throw ConstructionError("generator " + g.format() + " is not Hermitian");
        }
        if (static_cast<int>(generators_.size()) > n_ || static_cast<int>(generators_.size()) > Syndrome::kMaxBits) {
            throw ConstructionError("more generators than qubits");
        }
        for (std::size_t a = 0; a < generators_.size(); ++a) {
            for (std::size_t b = a + 1; b < generators_.size(); ++b) {
                if (!commutes(generators_[a], generators_[b])) {
                    throw ConstructionError("generators " + generators_[a].format() + " and " +
                                            generators_[b].format() + " anticommute");
                }
            }
        }
        if (symplectic_rank(generators_) != static_cast<int>(generators_.size())) {
            throw ConstructionError("generators of " + label_ + " are dependent");
        }
        std::vector<int> all = principal_;
        all.insert(all.end(), ancilla_.begin(), ancilla_.end());
        std::sort(all.begin(), all.end());
        std::vector<int> expected(static_cast<std::size_t>(n_));
        std::iota(expected.begin(), expected.end(), 1);
        if (all != expected) throw ConstructionError("principal and ancilla sites must partition 1..n");
        if (filter_prefix_ < 0 || filter_prefix_ > num_generators()) {
            throw ConstructionError("filter prefix longer than generator list");
        }
        for (int j = 0; j < filter_prefix_; ++j) {
            for (int s : principal_) {
                if (generators_[static_cast<std::size_t>(j)].letter(s) != 'I') {
                    throw ConstructionError("filter generator " + generators_[static_cast<std::size_t>(j)].format() +
                                            " touches the principal system");
                }
            }
        }
        for (const auto &l : logicals_) {
            for (const auto &g : generators_) {
                if (!commutes(l.x, g) || !commutes(l.z, g)) {
                    throw ConstructionError("logical operator does not commute with stabilizer");
                }
            }
        }
    }

    const std::string &label() const { return label_; }
    int n() const { return n_; }
    int r() const { return static_cast<int>(generators_.size()); }
    int k() const { return n_ - r(); }
    int num_generators() const { return r(); }
    const std::vector<PauliOperator> &generators() const { return generators_; }
    const PauliOperator &generator(int j) const { return generators_.at(static_cast<std::size_t>(j)); }
    const std::vector<int> &principal_sites() const { return principal_; }
    const std::vector<int> &ancilla_sites() const { return ancilla_; }
    int filter_prefix() const { return filter_prefix_; }
    const std::vector<LogicalPair> &logicals() const { return logicals_; }

    /// GF(2) rank of the symplectic vectors of `ops`.
    static int symplectic_rank(const std::vector<PauliOperator> &ops) {
        // Packs (x, z) into 128 bits; n <= 64.
        std::vector<std::array<std::uint64_t, 2>> rows;
        for (const auto &p : ops) rows.push_back({p.x_mask(), p.z_mask()});
        int rank = 0;
        for (int word = 0; word < 2; ++word) {
            for (int b = 63; b >= 0; --b) {
                const std::uint64_t m = std::uint64_t{1} << b;
                auto pivot = std::find_if(rows.begin() + rank, rows.end(), [&](const auto &r) { return (r[word] & m) != 0; });
                if (pivot == rows.end()) continue;
                std::iter_swap(rows.begin() + rank, pivot);
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    if (static_cast<int>(i) != rank && (rows[i][word] & m) != 0) {
                        rows[i][0] ^= rows[static_cast<std::size_t>(rank)][0];
                        rows[i][1] ^= rows[static_cast<std::size_t>(rank)][1];
                    }
                }
                ++rank;
            }
        }
        return rank;
    }

  private:
    std::string label_;
    int n_ = 0;
    std::vector<PauliOperator> generators_;
    std::vector<int> principal_;
    std::vector<int> ancilla_;
    int filter_prefix_ = 0;
    std::vector<LogicalPair> logicals_;
};

namespace detail {

inline std::vector<PauliOperator> parse_all(std::initializer_list<const char *> texts) {
    std::vector<PauliOperator> out;
    for (const char *t : texts) out.push_back(PauliOperator::parse(t));
    return out;
}

}  // namespace detail

/// [[4,0,2]] characterization code on principal {1,2} and ancilla {3,4}.
inline StabilizerCode build_s0() {
    return StabilizerCode("[[4,0,2]]", detail::parse_all({"XIXI", "IXIX", "ZIZI", "IZIZ"}), {1, 2}, {3, 4});
}

/// [[4,2,2]] error-detecting code with logical pairs (XXII, ZIZI) and (IXIX, IIZZ).
inline StabilizerCode build_s422() {
    std::vector<LogicalPair> logicals{
        {PauliOperator::parse("XXII"), PauliOperator::parse("ZIZI")},
        {PauliOperator::parse("IXIX"), PauliOperator::parse("IIZZ")},
    };
    return StabilizerCode("[[4,2,2]]", detail::parse_all({"XXXX", "ZZZZ"}), {}, {1, 2, 3, 4}, 2, std::move(logicals));
}

/// Replaces each ancilla qubit of `outer` by a logical qubit of `inner`.
///
/// The j-th ancilla site of `outer` maps to logical pair j of `inner`
/// (X -> X̄_j, Z -> Z̄_j, Y -> i·X̄_j·Z̄_j). The result lists the inner
/// stabilizers first (they become the filter prefix), then the mapped outer
/// generators stably ordered by the first principal site they touch.
inline StabilizerCode concatenate_ancilla(const StabilizerCode &outer, const StabilizerCode &inner) {
    const auto &p_sites = outer.principal_sites();
    const auto &a_sites = outer.ancilla_sites();
    const int np = static_cast<int>(p_sites.size());
    for (int q = 0; q < np; ++q) {
        if (p_sites[static_cast<std::size_t>(q)] != q + 1) {
            throw ConstructionError("outer code must place its principal system on the leading sites");
        }
    }
    if (static_cast<int>(inner.logicals().size()) != static_cast<int>(a_sites.size()) ||
        inner.k() != static_cast<int>(a_sites.size())) {
        throw ConstructionError("inner code must encode exactly one logical qubit per outer ancilla site");
    }
    const int n = np + inner.n();

    auto lift_inner = [&](const PauliOperator &p) {
        // Inner operator placed after the principal sites.
        return PauliOperator(n, p.x_mask(), p.z_mask(), p.phase());
    };

    std::vector<PauliOperator> gens;
    for (const auto &g : inner.generators()) gens.push_back(lift_inner(g));

    std::vector<std::pair<int, PauliOperator>> mapped;
    for (const auto &g : outer.generators()) {
        std::string principal_text;
        for (int s : p_sites) principal_text.push_back(g.letter(s));
        PauliOperator anc = PauliOperator::identity(inner.n());
        for (std::size_t j = 0; j < a_sites.size(); ++j) {
            const auto &lp = inner.logicals()[j];
            switch (g.letter(a_sites[j])) {
                case 'X': anc = anc * lp.x; break;
                case 'Z': anc = anc * lp.z; break;
                case 'Y': anc = anc * (lp.x * lp.z).with_phase((lp.x * lp.z).phase() + 1); break;
                default: break;
            }
        }
        const std::string text = principal_text + std::string(static_cast<std::size_t>(inner.n()), 'I');
        PauliOperator full = PauliOperator::parse(text) * lift_inner(anc);
        full = full.with_phase(full.phase() + g.phase());
        int first_site = np + 1;
        for (int s : p_sites) {
            if (g.letter(s) != 'I') {
                first_site = s;
                break;
            }
        }
        mapped.emplace_back(first_site, full);
    }
    std::stable_sort(mapped.begin(), mapped.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    for (auto &m : mapped) gens.push_back(m.second);

    std::vector<int> anc_sites(static_cast<std::size_t>(inner.n()));
    std::iota(anc_sites.begin(), anc_sites.end(), np + 1);
    const std::string label = "[[" + std::to_string(n) + "," + std::to_string(outer.k()) + ",2]]";
    return StabilizerCode(label, std::move(gens), p_sites, std::move(anc_sites), inner.r());
}

/// The concatenated [[6,0,2]] characterization code.
inline StabilizerCode build_s1() { return concatenate_ancilla(build_s0(), build_s422()); }

inline Syndrome syndrome_of_error(const StabilizerCode &code, const PauliOperator &e) {
    if (e.num_qubits() != code.n()) throw DimensionError("error and code act on different registers");
    std::uint32_t v = 0;
    for (const auto &g : code.generators()) v = (v << 1) | (commutes(g, e) ? 0U : 1U);
    return Syndrome(code.r(), v);
}

/// Projector onto the common +1 eigenspace, ∏ (1 + g)/2.
inline Matrix codespace_projector(const StabilizerCode &code) {
    require_dense_size(code.n());
    const auto d = static_cast<Eigen::Index>(dim_of(code.n()));
    Matrix proj = Matrix::Identity(d, d);
    for (const auto &g : code.generators()) {
        proj = proj * (Matrix::Identity(d, d) + to_matrix(g)) * 0.5;
    }
    return proj;
}

/// Unit codeword of a k = 0 code, phase fixed so its first nonzero amplitude is real positive.
inline Vector codeword_vector(const StabilizerCode &code) {
    if (code.k() != 0) throw Unsupported("codeword() is only defined for k = 0 codes");
    const Matrix proj = codespace_projector(code);
    Eigen::Index best = 0;
    proj.colwise().norm().maxCoeff(&best);
    Vector v = proj.col(best);
    v.normalize();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12) {
            v *= std::abs(v(i)) / v(i);
            break;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Located errors

/// Two-qubit (in general n_p-qubit) Pauli basis in table order: by weight,
/// then support sites, then letters with X < Y < Z.
inline std::vector<PauliOperator> located_basis(int n_p) {
    if (n_p < 1 || n_p > 8) throw DimensionError("principal size must be in [1, 8]");
    std::vector<std::string> texts;
    const std::size_t count = std::size_t{1} << (2 * n_p);
    static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
    for (std::size_t code = 0; code < count; ++code) {
        std::string t;
        for (int q = 0; q < n_p; ++q) t.push_back(kLetters[(code >> (2 * (n_p - 1 - q))) & 3U]);
        texts.push_back(std::move(t));
    }
    auto key = [](const std::string &t) {
        int w = 0;
        std::string sites;
        std::string letters;
        for (std::size_t q = 0; q < t.size(); ++q) {
            if (t[q] != 'I') {
                ++w;
                sites.push_back(static_cast<char>('a' + q));
                letters.push_back(t[q]);
            }
        }
        return std::make_tuple(w, sites, letters);
    };
    std::stable_sort(texts.begin(), texts.end(), [&](const auto &a, const auto &b) { return key(a) < key(b); });
    std::vector<PauliOperator> out;
    for (const auto &t : texts) out.push_back(PauliOperator::parse(t));
    return out;
}

/// Table position of a principal-only Pauli (phase ignored), or nullopt.
inline std::optional<int> located_index(const PauliOperator &p) {
    const auto basis = located_basis(p.num_qubits());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].equal_up_to_phase(p)) return static_cast<int>(i);
    }
    return std::nullopt;
}

/// Embeds a principal-register Pauli onto the code register (identity on the ancilla).
inline PauliOperator embed_principal(const StabilizerCode &code, const PauliOperator &p) {
    if (p.num_qubits() != static_cast<int>(code.principal_sites().size())) {
        throw DimensionError("principal operator size differs from principal system");
    }
    std::string text(static_cast<std::size_t>(code.n()), 'I');
    for (std::size_t q = 0; q < code.principal_sites().size(); ++q) {
        text[static_cast<std::size_t>(code.principal_sites()[q] - 1)] = p.letter(static_cast<int>(q) + 1);
    }
    return PauliOperator::parse(text).with_phase(p.phase());
}

struct LocatedRow {
    int index;
    PauliOperator principal;  ///< operator on the principal register
    PauliOperator full;       ///< same operator on the whole code register
    Syndrome syndrome;
};

inline std::vector<LocatedRow> located_error_table(const StabilizerCode &code) {
    const int np = static_cast<int>(code.principal_sites().size());
    std::vector<LocatedRow> rows;
    int i = 0;
    for (const auto &p : located_basis(np)) {
        auto full = embed_principal(code, p);
        rows.push_back({i++, p, full, syndrome_of_error(code, full)});
    }
    return rows;
}

/// Maps syndrome index -> located row index, or -1 where no located error has that syndrome.
inline std::vector<int> syndrome_decoder(const StabilizerCode &code) {
    std::vector<int> lut(std::size_t{1} << code.r(), -1);
    for (const auto &row : located_error_table(code)) {
        auto &slot = lut[row.syndrome.index()];
        if (slot != -1) throw ConstructionError("code is degenerate on located errors");
        slot = row.index;
    }
    return lut;
}

struct ErrorSetPartition {
    std::vector<PauliOperator> located;
    std::vector<PauliOperator> ancilla_weight_one;
    std::vector<PauliOperator> composite;
};

inline ErrorSetPartition partition_error_set(const StabilizerCode &code) {
    ErrorSetPartition part;
    for (const auto &row : located_error_table(code)) part.located.push_back(row.full);
    for (int s : code.ancilla_sites()) {
        for (char c : {'X', 'Y', 'Z'}) part.ancilla_weight_one.push_back(PauliOperator::single(code.n(), s, c));
    }
    for (const auto &l : part.located) {
        for (const auto &a : part.ancilla_weight_one) part.composite.push_back(l * a);
    }
    return part;
}

/// C_ab = <0|E_a† E_b|0> over the codeword of a k = 0 code.
inline Matrix qec_condition_matrix(const StabilizerCode &code, const std::vector<PauliOperator> &errors) {
    const Vector psi = codeword_vector(code);
    std::vector<Vector> images;
    images.reserve(errors.size());
    for (const auto &e : errors) {
        if (e.num_qubits() != code.n()) throw DimensionError("error acts on a different register");
        images.push_back(to_matrix(e) * psi);
    }
    const auto m = static_cast<Eigen::Index>(errors.size());
    Matrix c(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) {
            c(a, b) = images[static_cast<std::size_t>(a)].dot(images[static_cast<std::size_t>(b)]);
        }
    }
    return c;
}

struct HammingBoundResult {
    std::uint64_t lhs;  ///< Σ_j C(n_p, j) 3^j 2^k
    std::uint64_t rhs;  ///< 2^n
    bool satisfied;
    bool saturated;
    std::int64_t margin() const { return static_cast<std::int64_t>(rhs) - static_cast<std::int64_t>(lhs); }
};

/// Located quantum Hamming bound Σ_{j=0}^{n_p} C(n_p, j) 3^j 2^k <= 2^n.
inline HammingBoundResult located_hamming_bound(int n_p, int k, int n) {
    if (n_p < 1 || k < 0 || n < 1) throw std::invalid_argument("Hamming bound arguments must be positive");
    if (n > 62 || 2 * n_p + k > 62) throw std::invalid_argument("Hamming bound arguments too large");
    std::uint64_t sum = 0;
    std::uint64_t binom = 1;
    std::uint64_t pow3 = 1;
    for (int j = 0; j <= n_p; ++j) {
        sum += binom * pow3;
        binom = binom * static_cast<std::uint64_t>(n_p - j) / static_cast<std::uint64_t>(j + 1);
        pow3 *= 3;
    }
    const std::uint64_t lhs = sum << k;
    const std::uint64_t rhs = std::uint64_t{1} << n;
    return {lhs, rhs, lhs <= rhs, lhs == rhs};
}

}  // namespace dcqd
