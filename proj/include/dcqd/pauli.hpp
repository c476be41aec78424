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

#include <bit>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dcqd/errors.hpp"
#include "dcqd/linalg.hpp"

namespace dcqd {

/// n-qubit Pauli operator i^phase * (P_1 ⊗ ... ⊗ P_n) in symplectic form.
///
/// Site q (1-based, q = 1 leftmost in text and the most significant tensor
/// factor) is stored at bit (n - q) of the x/z masks, so a mask is directly a
/// computational-basis index. Letters decode as (x,z): (0,0)=I (1,0)=X
/// (1,1)=Y (0,1)=Z, where Y is the Hermitian Pauli Y, not XZ.
class PauliOperator {
  public:
    static constexpr int kMaxQubits = 64;

    PauliOperator() = default;

    /// Identity on n qubits.
    explicit PauliOperator(int n) : n_(n) { check_n(n); }

    PauliOperator(int n, std::uint64_t x_mask, std::uint64_t z_mask, int phase = 0)
        : n_(n), x_(x_mask), z_(z_mask), phase_(((phase % 4) + 4) % 4) {
        check_n(n);
        const std::uint64_t valid = mask_for(n);
        if ((x_ & ~valid) != 0 || (z_ & ~valid) != 0) {
            throw DimensionError("Pauli masks have bits outside the register");
        }
    }

    static PauliOperator identity(int n) { return PauliOperator(n); }

    /// Single letter ('I','X','Y','Z') at 1-based `site`.
    static PauliOperator single(int n, int site, char letter) {
        PauliOperator p(n);
        p.set_letter(site, letter);
        return p;
    }

    /// Parses "[+|-][i]LETTERS"; see format().
    static PauliOperator parse(std::string_view text) {
        std::size_t pos = 0;
        int phase = 0;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            if (text[pos] == '-') phase = 2;
            ++pos;
        }
        if (pos < text.size() && text[pos] == 'i') {
            phase += 1;
            ++pos;
        }
        const std::size_t letters = text.size() - pos;
        if (letters == 0) throw ParseError("Pauli text has no letters", pos + 1);
        if (letters > static_cast<std::size_t>(kMaxQubits)) {
            throw ParseError("Pauli text longer than 64 letters", kMaxQubits + pos + 1);
        }
        PauliOperator p(static_cast<int>(letters));
        for (std::size_t k = 0; k < letters; ++k) {
            const char c = text[pos + k];
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
                throw ParseError(std::string("invalid Pauli letter '") + c + "'", pos + k + 1);
            }
            p.set_letter(static_cast<int>(k) + 1, c);
        }
        p.phase_ = phase % 4;
        return p;
    }

    /// Canonical text: phase prefix in {"", "i", "-", "-i"} then letters.
    std::string format() const {
        static constexpr const char *kPrefix[4] = {"", "i", "-", "-i"};
        std::string out = kPrefix[phase_];
        for (int q = 1; q <= n_; ++q) out.push_back(letter(q));
        return out;
    }

    /// Letters only, without the phase prefix.
    std::string letters() const {
        std::string out;
        for (int q = 1; q <= n_; ++q) out.push_back(letter(q));
        return out;
    }

    int num_qubits() const { return n_; }
    std::uint64_t x_mask() const { return x_; }
    std::uint64_t z_mask() const { return z_; }
    /// Exponent of i in {0,1,2,3}.
    int phase() const { return phase_; }
    cplx phase_factor() const {
        static const cplx kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return kI[phase_];
    }

    bool x_bit(int site) const { return (x_ >> bit(site)) & 1U; }
    bool z_bit(int site) const { return (z_ >> bit(site)) & 1U; }

    char letter(int site) const {
        static constexpr char kLetters[4] = {'I', 'Z', 'X', 'Y'};
        return kLetters[(x_bit(site) ? 2 : 0) + (z_bit(site) ? 1 : 0)];
    }

    /// Same operator with phase reset to +1.
    PauliOperator unsigned_part() const { return PauliOperator(n_, x_, z_, 0); }

    PauliOperator with_phase(int phase) const { return PauliOperator(n_, x_, z_, phase); }

    /// Hermitian iff the phase is real (±1).
    bool is_hermitian() const { return (phase_ & 1) == 0; }

    bool is_identity_up_to_phase() const { return x_ == 0 && z_ == 0; }

    friend bool operator==(const PauliOperator &, const PauliOperator &) = default;

    bool equal_up_to_phase(const PauliOperator &o) const { return n_ == o.n_ && x_ == o.x_ && z_ == o.z_; }

  private:
    static void check_n(int n) {
        if (n < 1 || n > kMaxQubits) throw DimensionError("Pauli qubit count must be in [1, 64]");
    }

    static std::uint64_t mask_for(int n) { return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

    int bit(int site) const {
        if (site < 1 || site > n_) throw DimensionError("site " + std::to_string(site) + " outside register");
        return n_ - site;
    }

    void set_letter(int site, char letter) {
        const std::uint64_t m = std::uint64_t{1} << bit(site);
        x_ &= ~m;
        z_ &= ~m;
        if (letter == 'X' || letter == 'Y') x_ |= m;
        if (letter == 'Z' || letter == 'Y') z_ |= m;
    }

    int n_ = 1;
    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
    int phase_ = 0;
};

inline std::ostream &operator<<(std::ostream &os, const PauliOperator &p) { return os << p.format(); }

inline void require_same_size(const PauliOperator &a, const PauliOperator &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw DimensionError("Pauli qubit counts differ: " + std::to_string(a.num_qubits()) + " vs " +
                             std::to_string(b.num_qubits()));
    }
}

/// Exact product a·b, phase included.
inline PauliOperator multiply(const PauliOperator &a, const PauliOperator &b) {
    require_same_size(a, b);
    // Y = i·X·Z per site, so a = i^(pa + |xa&za|) X^xa Z^za. Moving Z^za past
    // X^xb costs (-1)^|za&xb|; the merged X^x Z^z gains i^-|x&z| back into Y form.
    const std::uint64_t x = a.x_mask() ^ b.x_mask();
    const std::uint64_t z = a.z_mask() ^ b.z_mask();
    int e = a.phase() + b.phase();
    e += std::popcount(a.x_mask() & a.z_mask());
    e += std::popcount(b.x_mask() & b.z_mask());
    e += 2 * std::popcount(a.z_mask() & b.x_mask());
    e -= std::popcount(x & z);
    return PauliOperator(a.num_qubits(), x, z, e);
}

inline PauliOperator operator*(const PauliOperator &a, const PauliOperator &b) { return multiply(a, b); }

/// a† (also a⁻¹).
inline PauliOperator inverse(const PauliOperator &a) { return a.with_phase(4 - a.phase()); }

inline bool commutes(const PauliOperator &a, const PauliOperator &b) {
    require_same_size(a, b);
    const int s = std::popcount(a.x_mask() & b.z_mask()) + std::popcount(a.z_mask() & b.x_mask());
    return (s & 1) == 0;
}

inline int weight(const PauliOperator &a) { return std::popcount(a.x_mask() | a.z_mask()); }

/// Sites (1-based, ascending) carrying a non-identity letter.
inline std::vector<int> support(const PauliOperator &a) {
    std::vector<int> out;
    for (int q = 1; q <= a.num_qubits(); ++q) {
        if (a.letter(q) != 'I') out.push_back(q);
    }
    return out;
}

/// Restriction to `sites` (in the order given), phase dropped.
inline PauliOperator restrict_to(const PauliOperator &a, const std::vector<int> &sites) {
    std::string text;
    for (int s : sites) text.push_back(a.letter(s));
    return PauliOperator::parse(text);
}

/// Dense 2^n x 2^n matrix, qubit 1 the most significant factor.
inline Matrix to_matrix(const PauliOperator &a, int max_qubits = kMaxDenseQubits) {
    const int n = a.num_qubits();
    require_dense_size(n, max_qubits);
    const std::size_t d = dim_of(n);
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    // P|b> = i^(phase + |x&z|) (-1)^|b&z| |b ^ x>
    const int base = a.phase() + std::popcount(a.x_mask() & a.z_mask());
    static const cplx kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (std::uint64_t b = 0; b < d; ++b) {
        const int e = base + 2 * std::popcount(b & a.z_mask());
        m(static_cast<Eigen::Index>(b ^ a.x_mask()), static_cast<Eigen::Index>(b)) = kI[e % 4];
    }
    return m;
}

}  // namespace dcqd

template <>
struct std::hash<dcqd::PauliOperator> {
    std::size_t operator()(const dcqd::PauliOperator &p) const noexcept {
        std::size_t h = std::hash<std::uint64_t>{}(p.x_mask());
        h ^= std::hash<std::uint64_t>{}(p.z_mask() * 0x9e3779b97f4a7c15ULL) + (h << 6) + (h >> 2);
        return h ^ (static_cast<std::size_t>(p.num_qubits()) << 2) ^ static_cast<std::size_t>(p.phase());
    }
};
