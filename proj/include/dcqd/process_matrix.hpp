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

#include <string>
#include <vector>

#include "dcqd/errors.hpp"
#include "dcqd/linalg.hpp"
#include "dcqd/pauli.hpp"
#include "dcqd/stabilizer_code.hpp"

namespace dcqd {

/// Process matrix χ over the located Pauli basis of an n_p-qubit principal system,
/// rows/columns in table order (II, XI, YI, ZI, IX, ... for n_p = 2).
class ProcessMatrix {
  public:
    ProcessMatrix() : ProcessMatrix(2) {}

    explicit ProcessMatrix(int principal_qubits)
        : np_(principal_qubits),
          data_(Matrix::Zero(static_cast<Eigen::Index>(basis_size(principal_qubits)),
                             static_cast<Eigen::Index>(basis_size(principal_qubits)))) {}

    ProcessMatrix(int principal_qubits, Matrix data) : np_(principal_qubits), data_(std::move(data)) {
        const auto m = static_cast<Eigen::Index>(basis_size(np_));
        if (data_.rows() != m || data_.cols() != m) throw DimensionError("process matrix must be d^2 x d^2");
    }

    static std::size_t basis_size(int np) {
        if (np < 1 || np > 4) throw DimensionError("process matrices support 1..4 principal qubits");
        return std::size_t{1} << (2 * np);
    }

    int principal_qubits() const { return np_; }
    /// Principal Hilbert-space dimension d.
    int d() const { return 1 << np_; }
    Eigen::Index size() const { return data_.rows(); }
    const Matrix &matrix() const { return data_; }
    Matrix &matrix() { return data_; }

    cplx operator()(Eigen::Index m, Eigen::Index n) const { return data_(m, n); }
    cplx &operator()(Eigen::Index m, Eigen::Index n) { return data_(m, n); }

    std::vector<PauliOperator> basis() const { return located_basis(np_); }
    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        for (const auto &p : basis()) out.push_back(p.letters());
        return out;
    }

    /// E(rho) = Σ χ_mn F_m rho F_n† on the principal register.
    Matrix apply(const Matrix &rho) const {
        const auto dd = static_cast<Eigen::Index>(d());
        if (rho.rows() != dd || rho.cols() != dd) throw DimensionError("input state dimension differs from d");
        std::vector<Matrix> f;
        for (const auto &p : basis()) f.push_back(to_matrix(p));
        Matrix out = Matrix::Zero(dd, dd);
        for (Eigen::Index m = 0; m < size(); ++m) {
            const Matrix left = f[static_cast<std::size_t>(m)] * rho;
            for (Eigen::Index n = 0; n < size(); ++n) {
                if (data_(m, n) == cplx(0.0, 0.0)) continue;
                out += data_(m, n) * left * f[static_cast<std::size_t>(n)].adjoint();
            }
        }
        return out;
    }

    /// (χ + χ†)/2.
    ProcessMatrix hermitian_part() const { return ProcessMatrix(np_, (data_ + data_.adjoint()) * 0.5); }

    double trace() const { return data_.trace().real(); }

  private:
    int np_;
    Matrix data_;
};

/// χ of a map given by Kraus operators on the principal register: χ_mn = Σ_a c_am c_an*, c_am = Tr(F_m E_a)/d.
inline ProcessMatrix chi_from_kraus(int principal_qubits, const std::vector<Matrix> &kraus) {
    ProcessMatrix chi(principal_qubits);
    const auto basis = chi.basis();
    const double d = static_cast<double>(chi.d());
    std::vector<Matrix> f;
    for (const auto &p : basis) f.push_back(to_matrix(p));
    for (const auto &e : kraus) {
        if (e.rows() != chi.d() || e.cols() != chi.d()) throw DimensionError("Kraus operator dimension differs from d");
        Vector c(chi.size());
        for (Eigen::Index m = 0; m < chi.size(); ++m) c(m) = (f[static_cast<std::size_t>(m)].adjoint() * e).trace() / d;
        chi.matrix() += c * c.adjoint();
    }
    return chi;
}

}  // namespace dcqd
