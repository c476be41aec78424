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
#include <cmath>
#include <string>
#include <vector>

#include "dcqd/errors.hpp"
#include "dcqd/linalg.hpp"
#include "dcqd/process_matrix.hpp"
#include "dcqd/state.hpp"

namespace dcqd {

inline constexpr double kKrausTol = 1e-10;

/// CPTP map given by Kraus operators embedded on the full n-qubit register.
class QuantumChannel {
  public:
    QuantumChannel(int n, std::vector<Matrix> kraus, std::string label, std::vector<int> support)
        : n_(n), kraus_(std::move(kraus)), label_(std::move(label)), support_(std::move(support)) {
        require_dense_size(n);
        if (kraus_.empty()) throw ContractViolation("channel needs at least one Kraus operator");
        const auto d = static_cast<Eigen::Index>(dim_of(n));
        Matrix sum = Matrix::Zero(d, d);
        for (const auto &k : kraus_) {
            if (k.rows() != d || k.cols() != d) throw DimensionError("Kraus operator has wrong dimension");
            sum += k.adjoint() * k;
        }
        if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kKrausTol) {
            throw ContractViolation("Kraus operators of '" + label_ + "' are not complete");
        }
        std::sort(support_.begin(), support_.end());
        support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
    }

    int num_qubits() const { return n_; }
    const std::vector<Matrix> &kraus() const { return kraus_; }
    const std::string &label() const { return label_; }
    const std::vector<int> &support() const { return support_; }

  private:
    int n_;
    std::vector<Matrix> kraus_;
    std::string label_;
    std::vector<int> support_;
};

inline QuantumChannel identity_channel(int n) {
    const auto d = static_cast<Eigen::Index>(dim_of(n));
    return QuantumChannel(n, {Matrix::Identity(d, d)}, "identity", {});
}

/// Single unitary Kraus operator (a deterministic error such as X on one site).
inline QuantumChannel unitary_channel(const Matrix &u, std::string label, std::vector<int> support) {
    int n = 0;
    while ((Eigen::Index{1} << n) < u.rows()) ++n;
    if (!is_unitary(u)) throw ContractViolation("unitary channel operator is not unitary");
    return QuantumChannel(n, {u}, std::move(label), std::move(support));
}

inline QuantumChannel pauli_error_channel(const PauliOperator &p) {
    return unitary_channel(to_matrix(p), p.format(), support(p));
}

inline void require_probability(double v, const char *name) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

/// Amplitude damping at `site`: E0 = (1+√(1-γ))/2·1 + (1-√(1-γ))/2·Z, E1 = √γ (X + iY)/2.
inline QuantumChannel amplitude_damping(double gamma, int site, int n) {
    require_probability(gamma, "gamma");
    const double s = std::sqrt(1.0 - gamma);
    const Matrix e0 = 0.5 * (1.0 + s) * gates::identity2() + 0.5 * (1.0 - s) * gates::pauli_z();
    const Matrix e1 = 0.5 * std::sqrt(gamma) * (gates::pauli_x() + cplx(0, 1) * gates::pauli_y());
    return QuantumChannel(n, {gates::embed(e0, site, n), gates::embed(e1, site, n)},
                          "AD(" + std::to_string(gamma) + ")@" + std::to_string(site), {site});
}

/// Depolarizing at `site`: (1-p)ρ + p(XρX + YρY + ZρZ)/3.
inline QuantumChannel depolarizing(double p, int site, int n) {
    require_probability(p, "p");
    const double a = std::sqrt(1.0 - p);
    const double b = std::sqrt(p / 3.0);
    return QuantumChannel(n,
                          {gates::embed(a * gates::identity2(), site, n), gates::embed(b * gates::pauli_x(), site, n),
                           gates::embed(b * gates::pauli_y(), site, n), gates::embed(b * gates::pauli_z(), site, n)},
                          "DP(" + std::to_string(p) + ")@" + std::to_string(site), {site});
}

/// outer ∘ inner: inner acts first. Kraus set is every product outer_i · inner_j.
inline QuantumChannel compose(const QuantumChannel &outer, const QuantumChannel &inner) {
    if (outer.num_qubits() != inner.num_qubits()) throw DimensionError("composed channels act on different registers");
    std::vector<Matrix> kraus;
    kraus.reserve(outer.kraus().size() * inner.kraus().size());
    for (const auto &a : outer.kraus()) {
        for (const auto &b : inner.kraus()) kraus.push_back(a * b);
    }
    std::vector<int> sup = outer.support();
    sup.insert(sup.end(), inner.support().begin(), inner.support().end());
    return QuantumChannel(outer.num_qubits(), std::move(kraus), outer.label() + "∘" + inner.label(), std::move(sup));
}

/// Independent depolarizing on each listed site, composed in list order.
inline QuantumChannel depolarizing_on(double p, const std::vector<int> &sites, int n) {
    QuantumChannel ch = identity_channel(n);
    for (int s : sites) ch = compose(depolarizing(p, s, n), ch);
    return ch;
}

inline DensityMatrix apply_channel(const DensityMatrix &rho, const QuantumChannel &ch) {
    if (ch.num_qubits() != rho.num_qubits()) throw DimensionError("channel and state sizes differ");
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    for (const auto &k : ch.kraus()) out.noalias() += k * rho.matrix() * k.adjoint();
    return DensityMatrix(rho.num_qubits(), (out + out.adjoint()) * 0.5);
}

/// Applies channels in list order (first entry acts first).
inline DensityMatrix apply_channels(DensityMatrix rho, const std::vector<QuantumChannel> &chain) {
    for (const auto &ch : chain) rho = apply_channel(rho, ch);
    return rho;
}

/// Closed-form χ of amplitude damping on principal qubit 1, over the two-qubit basis.
/// Stored Hermitian: χ_YX = +iγ/4, χ_XY = -iγ/4.
inline ProcessMatrix theoretical_chi_ad(double gamma) {
    require_probability(gamma, "gamma");
    const double s = std::sqrt(1.0 - gamma);
    ProcessMatrix chi(2);
    constexpr int I = 0, X = 1, Y = 2, Z = 3;  // II, XI, YI, ZI
    chi(I, I) = (1.0 + s) * (1.0 + s) / 4.0;
    chi(X, X) = gamma / 4.0;
    chi(Y, Y) = gamma / 4.0;
    chi(Z, Z) = (1.0 - s) * (1.0 - s) / 4.0;
    chi(I, Z) = gamma / 4.0;
    chi(Z, I) = gamma / 4.0;
    chi(Y, X) = cplx(0.0, gamma / 4.0);
    chi(X, Y) = cplx(0.0, -gamma / 4.0);
    return chi;
}

}  // namespace dcqd
