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

#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "dcqd/errors.hpp"

namespace dcqd {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest register the dense engine will materialize.
inline constexpr int kMaxDenseQubits = 8;

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kHermitianTol = 1e-10;

inline std::size_t dim_of(int n) { return std::size_t{1} << n; }

inline void require_dense_size(int n, int max_qubits = kMaxDenseQubits) {
    if (n < 1 || n > max_qubits) {
        throw SizeError("register of " + std::to_string(n) + " qubits outside dense range [1, " +
                        std::to_string(max_qubits) + "]");
    }
}

/// Kronecker product with `a` as the more significant factor.
inline Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline bool is_unitary(const Matrix &u, double tol = kUnitaryTol) {
    if (u.rows() != u.cols()) return false;
    return (u * u.adjoint() - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_hermitian(const Matrix &m, double tol = kHermitianTol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline double max_abs_diff(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("matrix shapes differ");
    }
    return (a - b).cwiseAbs().maxCoeff();
}

namespace gates {

inline Matrix identity2() { return Matrix::Identity(2, 2); }

inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

inline Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

/// Embeds a single-qubit operator at 1-based `site` of an n-qubit register.
inline Matrix embed(const Matrix &op, int site, int n) {
    if (op.rows() != 2 || op.cols() != 2) throw DimensionError("embed expects a 2x2 operator");
    if (site < 1 || site > n) throw DimensionError("site " + std::to_string(site) + " outside register");
    require_dense_size(n);
    Matrix out = Matrix::Identity(1, 1);
    for (int q = 1; q <= n; ++q) {
        out = kron(out, q == site ? op : identity2());
    }
    return out;
}

}  // namespace gates

}  // namespace dcqd
