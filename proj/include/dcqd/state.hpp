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
#include <atomic>
#include <bit>
#include <cstdint>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dcqd/errors.hpp"
#include "dcqd/linalg.hpp"
#include "dcqd/pauli.hpp"

namespace dcqd {

inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
/// Born probabilities within this distance of 0 or 1 are snapped to the bound.
inline constexpr double kProbabilitySnap = 1e-12;

namespace detail {
#ifdef NDEBUG
inline std::atomic<bool> g_check_invariants{false};
#else
inline std::atomic<bool> g_check_invariants{true};
#endif
}  // namespace detail

/// Toggles the (eigendecomposition-based) density matrix checks on every engine result.
inline void set_invariant_checks(bool enabled) { detail::g_check_invariants.store(enabled); }
inline bool invariant_checks_enabled() { return detail::g_check_invariants.load(); }

inline double min_eigenvalue(const Matrix &hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

/// Dense density matrix on n qubits (qubit 1 most significant).
class DensityMatrix {
  public:
    DensityMatrix() = default;

    /// Wraps `data`; validates dimension, and the state invariants when checks are on.
    DensityMatrix(int n, Matrix data) : n_(n), data_(std::move(data)) {
        require_dense_size(n);
        const auto d = static_cast<Eigen::Index>(dim_of(n));
        if (data_.rows() != d || data_.cols() != d) throw DimensionError("density matrix has wrong dimension");
        if (invariant_checks_enabled()) validate();
    }

    static DensityMatrix from_vector(const Vector &psi) {
        const auto d = psi.size();
        int n = 0;
        while ((Eigen::Index{1} << n) < d) ++n;
        if ((Eigen::Index{1} << n) != d) throw DimensionError("state vector length is not a power of two");
        const Vector v = psi / psi.norm();
        return DensityMatrix(n, v * v.adjoint());
    }

    /// |b><b| for computational basis index b.
    static DensityMatrix basis(int n, std::size_t b) {
        require_dense_size(n);
        const auto d = static_cast<Eigen::Index>(dim_of(n));
        Matrix m = Matrix::Zero(d, d);
        m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = 1.0;
        return DensityMatrix(n, std::move(m));
    }

    static DensityMatrix maximally_mixed(int n) {
        require_dense_size(n);
        const auto d = static_cast<Eigen::Index>(dim_of(n));
        return DensityMatrix(n, Matrix::Identity(d, d) / static_cast<double>(d));
    }

    int num_qubits() const { return n_; }
    Eigen::Index dim() const { return data_.rows(); }
    const Matrix &matrix() const { return data_; }

    double trace() const { return data_.trace().real(); }
    double purity() const { return (data_ * data_).trace().real(); }

    /// Throws InvalidState unless Hermitian, unit trace and numerically PSD.
    void validate() const {
        if (!is_hermitian(data_)) throw InvalidState("density matrix is not Hermitian");
        if (std::abs(data_.trace() - cplx(1.0, 0.0)) > kTraceTol) {
            throw InvalidState("density matrix trace " + std::to_string(data_.trace().real()) + " != 1");
        }
        const double lo = min_eigenvalue(data_);
        if (lo < -kPsdTol) throw InvalidState("density matrix eigenvalue " + std::to_string(lo) + " below -1e-9");
    }

  private:
    int n_ = 1;
    Matrix data_ = Matrix::Identity(2, 2) * 0.5;
};

inline DensityMatrix apply_unitary(const DensityMatrix &rho, const Matrix &u) {
    if (u.rows() != rho.dim() || u.cols() != rho.dim()) throw DimensionError("unitary dimension mismatch");
    if (!is_unitary(u)) throw ContractViolation("operator is not unitary to 1e-10");
    Matrix out = u * rho.matrix() * u.adjoint();
    return DensityMatrix(rho.num_qubits(), (out + out.adjoint()) * 0.5);
}

/// Tr[O rho], real part; throws if O is not Hermitian or the imaginary residue exceeds 1e-10.
inline double expectation(const DensityMatrix &rho, const Matrix &op) {
    if (op.rows() != rho.dim() || op.cols() != rho.dim()) throw DimensionError("observable dimension mismatch");
    if (!is_hermitian(op)) throw ContractViolation("observable is not Hermitian");
    const cplx t = op.cwiseProduct(rho.matrix().transpose()).sum();
    if (std::abs(t.imag()) > 1e-10) throw ContractViolation("expectation has imaginary residue");
    return t.real();
}

/// Tr[P rho] for a Hermitian Pauli without materializing P densely.
inline double pauli_expectation(const DensityMatrix &rho, const PauliOperator &p) {
    if (p.num_qubits() != rho.num_qubits()) throw DimensionError("Pauli and state sizes differ");
    if (!p.is_hermitian()) throw ContractViolation("Pauli observable must have real phase");
    return expectation(rho, to_matrix(p));
}

struct MeasurementRecord {
    int generator_index = -1;
    int outcome = +1;  ///< +1 or -1
    double probability = 1.0;
};

namespace detail {

/// Column coefficients of a Pauli: P|b> = coeff(b) |b ^ x>.
inline std::vector<cplx> pauli_coefficients(const PauliOperator &p) {
    static const cplx kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::size_t d = dim_of(p.num_qubits());
    const int base = p.phase() + std::popcount(p.x_mask() & p.z_mask());
    std::vector<cplx> c(d);
    for (std::size_t b = 0; b < d; ++b) c[b] = kI[(base + 2 * std::popcount(b & p.z_mask())) % 4];
    return c;
}

}  // namespace detail

/// P·M without materializing P.
inline Matrix pauli_left(const PauliOperator &p, const Matrix &m) {
    const auto c = detail::pauli_coefficients(p);
    const std::uint64_t x = p.x_mask();
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const auto src = static_cast<Eigen::Index>(static_cast<std::uint64_t>(r) ^ x);
        out.row(r) = c[static_cast<std::size_t>(src)] * m.row(src);
    }
    return out;
}

/// M·P without materializing P.
inline Matrix pauli_right(const Matrix &m, const PauliOperator &p) {
    const auto c = detail::pauli_coefficients(p);
    const std::uint64_t x = p.x_mask();
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
        const auto src = static_cast<Eigen::Index>(static_cast<std::uint64_t>(col) ^ x);
        out.col(col) = m.col(src) * c[static_cast<std::size_t>(col)];
    }
    return out;
}

/// Tr[P rho] (complex in general).
inline cplx pauli_trace(const PauliOperator &p, const Matrix &rho) {
    const auto c = detail::pauli_coefficients(p);
    const std::uint64_t x = p.x_mask();
    cplx t = 0;
    for (std::size_t r = 0; r < c.size(); ++r) {
        const std::size_t src = r ^ x;
        t += c[src] * rho(static_cast<Eigen::Index>(src), static_cast<Eigen::Index>(r));
    }
    return t;
}

/// Born probability of the +1 outcome of Hermitian Pauli `g`, snapped to {0,1} within kProbabilitySnap.
inline double plus_probability(const DensityMatrix &rho, const PauliOperator &g) {
    double p = 0.5 * (1.0 + pauli_trace(g, rho.matrix()).real());
    if (p < kProbabilitySnap) p = 0.0;
    if (p > 1.0 - kProbabilitySnap) p = 1.0;
    return p;
}

/// Post-measurement state (1 ± g) rho (1 ± g) / (4 p).
inline DensityMatrix project_pauli(const DensityMatrix &rho, const PauliOperator &g, int outcome, double probability) {
    if (probability <= 0.0) throw ImpossibleOutcome("selected measurement branch has zero probability");
    const Matrix &m = rho.matrix();
    const Matrix gm = pauli_left(g, m);
    const double sign = static_cast<double>(outcome);
    Matrix out = m + sign * gm + sign * pauli_right(m, g) + pauli_right(gm, g);
    out /= 4.0 * probability;
    return DensityMatrix(rho.num_qubits(), (out + out.adjoint()) * 0.5);
}

/// Projective measurement of Hermitian Pauli `g`. Outcome is +1 iff `u < p₊`.
inline std::pair<MeasurementRecord, DensityMatrix> measure_generator(const DensityMatrix &rho, const PauliOperator &g,
                                                                     double u, int generator_index = -1) {
    if (g.num_qubits() != rho.num_qubits()) throw DimensionError("Pauli and state sizes differ");
    if (!g.is_hermitian()) throw ContractViolation("measured Pauli must have a real phase");
    const double p_plus = plus_probability(rho, g);
    const int outcome = u < p_plus ? +1 : -1;
    const double p = outcome == +1 ? p_plus : 1.0 - p_plus;
    return {MeasurementRecord{generator_index, outcome, p}, project_pauli(rho, g, outcome, p)};
}

/// Partial trace of a raw 2^n x 2^n matrix onto `keep` (1-based sites, ascending output order).
inline Matrix partial_trace_matrix(const Matrix &m, int n, const std::vector<int> &keep) {
    require_dense_size(n);
    if (m.rows() != static_cast<Eigen::Index>(dim_of(n)) || m.cols() != m.rows()) {
        throw DimensionError("partial trace input has wrong dimension");
    }
    std::set<int> kept(keep.begin(), keep.end());
    if (kept.empty()) throw DimensionError("partial trace must keep at least one site");
    for (int s : kept) {
        if (s < 1 || s > n) throw DimensionError("partial trace site outside register");
    }
    std::vector<int> kept_bits;  // basis-index bit positions, most significant first
    std::vector<int> traced_bits;
    for (int q = 1; q <= n; ++q) (kept.count(q) ? kept_bits : traced_bits).push_back(n - q);
    const int nk = static_cast<int>(kept_bits.size());
    const int nt = static_cast<int>(traced_bits.size());
    auto compose = [&](std::size_t a, std::size_t t) {
        std::size_t idx = 0;
        for (int i = 0; i < nk; ++i) {
            if ((a >> (nk - 1 - i)) & 1U) idx |= std::size_t{1} << kept_bits[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < nt; ++i) {
            if ((t >> (nt - 1 - i)) & 1U) idx |= std::size_t{1} << traced_bits[static_cast<std::size_t>(i)];
        }
        return static_cast<Eigen::Index>(idx);
    };
    const std::size_t dk = std::size_t{1} << nk;
    const std::size_t dt = std::size_t{1} << nt;
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t a = 0; a < dk; ++a) {
        for (std::size_t b = 0; b < dk; ++b) {
            cplx acc = 0;
            for (std::size_t t = 0; t < dt; ++t) acc += m(compose(a, t), compose(b, t));
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
        }
    }
    return out;
}

/// Reduced state on `keep` (1-based sites); output qubits follow ascending site order.
inline DensityMatrix partial_trace(const DensityMatrix &rho, const std::vector<int> &keep) {
    const std::set<int> kept(keep.begin(), keep.end());
    return DensityMatrix(static_cast<int>(kept.size()), partial_trace_matrix(rho.matrix(), rho.num_qubits(), keep));
}

/// Tensor product rho ⊗ sigma.
inline DensityMatrix tensor(const DensityMatrix &rho, const DensityMatrix &sigma) {
    return DensityMatrix(rho.num_qubits() + sigma.num_qubits(), kron(rho.matrix(), sigma.matrix()));
}

}  // namespace dcqd
