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
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dcqd/channels.hpp"
#include "dcqd/errors.hpp"
#include "dcqd/linalg.hpp"
#include "dcqd/process_matrix.hpp"
#include "dcqd/protocol.hpp"
#include "dcqd/random.hpp"
#include "dcqd/stabilizer_code.hpp"
#include "dcqd/state.hpp"

namespace dcqd {

// ---------------------------------------------------------------------------
// Fidelity

/// Below this eigenvalue a reconstructed output state triggers a warning before clamping.
inline constexpr double kClampWarnThreshold = -1e-3;

namespace detail {

/// Eigenvalues in [-kPsdTol, 0) are clamped to 0 and the trace renormalized; anything lower throws.
inline Matrix clamp_state(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) * 0.5);
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < -kPsdTol) {
        throw InvalidState("state eigenvalue " + std::to_string(ev.minCoeff()) + " below -1e-9");
    }
    ev = ev.cwiseMax(0.0);
    const double t = ev.sum();
    if (t <= 0) throw InvalidState("state has zero trace");
    return es.eigenvectors() * (ev / t).cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

/// Square root of a PSD matrix. Eigenvalues within rounding noise of zero are treated as zero,
/// since √ would inflate 1e-17 noise to 3e-9.
inline Matrix psd_sqrt(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    Eigen::VectorXd ev = es.eigenvalues();
    const double floor = 64 * std::numeric_limits<double>::epsilon() * std::max(ev.cwiseAbs().maxCoeff(), 1.0);
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) < floor ? 0.0 : std::sqrt(ev(i));
    return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// Root fidelity F(ρ, σ) = Tr √(√ρ σ √ρ), evaluated as the trace norm of √ρ √σ.
inline double fidelity(const Matrix &rho, const Matrix &sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() || rho.rows() != rho.cols()) {
        throw DimensionError("fidelity inputs differ in dimension");
    }
    const Matrix prod = detail::psd_sqrt(detail::clamp_state(rho)) * detail::psd_sqrt(detail::clamp_state(sigma));
    return Eigen::JacobiSVD<Matrix>(prod).singularValues().sum();
}

inline double fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    return fidelity(rho.matrix(), sigma.matrix());
}

/// Projects a Hermitian matrix onto the state set by zeroing negative eigenvalues and renormalizing.
struct ClampedState {
    Matrix state;
    double min_eigenvalue;
};

inline ClampedState clamp_to_state(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) * 0.5);
    Eigen::VectorXd ev = es.eigenvalues();
    const double lo = ev.minCoeff();
    ev = ev.cwiseMax(0.0);
    const double t = ev.sum();
    if (t <= 0) throw InvalidState("reconstructed state has no positive weight");
    return {es.eigenvectors() * (ev / t).cast<cplx>().asDiagonal() * es.eigenvectors().adjoint(), lo};
}

struct FidelityResult {
    double value = 0.0;
    std::string input_state;
    std::string reconstructed_label;
    std::string reference_label;
    double min_eigenvalue = 0.0;  ///< of the reconstructed output before clamping
    std::vector<std::string> warnings;
};

/// Applies χ̂ and the closed-form amplitude-damping χ to |00><00|, keeps qubit 1, and compares.
inline FidelityResult channel_fidelity_vs_theory(const ProcessMatrix &chi_hat, double gamma) {
    if (chi_hat.principal_qubits() != 2) throw DimensionError("expected a two-qubit principal process matrix");
    const Matrix rho0 = DensityMatrix::basis(2, 0).matrix();
    const Matrix out_hat = partial_trace_matrix(chi_hat.apply(rho0), 2, {1});
    const Matrix out_ref = partial_trace_matrix(theoretical_chi_ad(gamma).apply(rho0), 2, {1});
    FidelityResult r;
    r.input_state = "|0><0| (qubit 1), |0><0| (qubit 2)";
    r.reconstructed_label = "reconstructed";
    r.reference_label = "AD(" + std::to_string(gamma) + ")";
    const auto clamped = clamp_to_state(out_hat);
    r.min_eigenvalue = clamped.min_eigenvalue;
    if (clamped.min_eigenvalue < kClampWarnThreshold) {
        r.warnings.push_back("reconstructed output eigenvalue " + std::to_string(clamped.min_eigenvalue) +
                             " clamped to 0");
    }
    r.value = fidelity(clamped.state, clamp_to_state(out_ref).state);
    return r;
}

// ---------------------------------------------------------------------------
// Process-matrix comparison

struct ChiDistance {
    Matrix difference;  ///< a - b
    double max_abs;
};

inline ChiDistance chi_distance_report(const ProcessMatrix &a, const ProcessMatrix &b) {
    if (a.size() != b.size()) throw DimensionError("process matrices differ in size");
    Matrix diff = a.matrix() - b.matrix();
    const double m = diff.cwiseAbs().maxCoeff();
    return {std::move(diff), m};
}

// ---------------------------------------------------------------------------
// Failure-rate analysis

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

/// p_j = (1-p)^(n-j) C(n, j) p^j: probability that independent depolarizing noise has weight j.
inline double binomial_weight_probability(double p, int j, int n = 4) {
    require_probability(p, "p");
    if (j < 0 || j > n) throw std::invalid_argument("weight outside [0, n]");
    return std::pow(1.0 - p, n - j) * binomial(n, j) * std::pow(p, j);
}

/// Exact rational a / b.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

inline Rational make_rational(std::uint64_t num, std::uint64_t den) {
    const std::uint64_t g = std::gcd(num, den);
    return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

enum class AncillaErrorClass { Detected, StabilizerEquivalent, Impostor };

struct WeightClassCounts {
    int weight = 0;
    std::uint64_t total = 0;
    std::uint64_t detected = 0;
    std::uint64_t stabilizer = 0;  ///< all-zero syndrome (the identity counted separately at weight 0)
    std::uint64_t impostor = 0;    ///< passes the filter with a non-trivial located syndrome
};

struct FailureOracle {
    int ancilla_qubits = 0;
    std::vector<PauliOperator> errors;  ///< every ancilla-supported Pauli, base-4 order over ancilla sites
    std::vector<AncillaErrorClass> classes;
    std::vector<WeightClassCounts> by_weight;
    std::vector<Rational> coefficients;                 ///< counts stabilizer-equivalent errors as failures
    std::vector<Rational> state_corrupting_coefficients;  ///< impostors only

    /// Σ_w c_w p_w(p), the filter failure probability.
    double failure_probability(double p) const { return eval(coefficients, p); }
    double state_corrupting_probability(double p) const { return eval(state_corrupting_coefficients, p); }

  private:
    double eval(const std::vector<Rational> &c, double p) const {
        double s = 0.0;
        for (int w = 0; w <= ancilla_qubits; ++w) {
            s += c[static_cast<std::size_t>(w)].value() * binomial_weight_probability(p, w, ancilla_qubits);
        }
        return s;
    }
};

/// Ancilla-supported Pauli with base-4 digit index (digit per ancilla site, first site most significant,
/// 0=I 1=X 2=Y 3=Z).
inline PauliOperator ancilla_error(const StabilizerCode &code, std::size_t index) {
    const auto &sites = code.ancilla_sites();
    std::string text(static_cast<std::size_t>(code.n()), 'I');
    static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
    for (std::size_t a = 0; a < sites.size(); ++a) {
        const std::size_t digit = (index >> (2 * (sites.size() - 1 - a))) & 3U;
        text[static_cast<std::size_t>(sites[a] - 1)] = kLetters[digit];
    }
    return PauliOperator::parse(text);
}

/// Classifies every ancilla-supported Pauli by its syndrome under `code`'s filter.
inline FailureOracle failure_oracle(const StabilizerCode &code) {
    FailureOracle o;
    o.ancilla_qubits = static_cast<int>(code.ancilla_sites().size());
    if (o.ancilla_qubits < 1 || o.ancilla_qubits > 8) throw DimensionError("failure oracle needs 1..8 ancilla qubits");
    const std::size_t count = std::size_t{1} << (2 * o.ancilla_qubits);
    o.by_weight.resize(static_cast<std::size_t>(o.ancilla_qubits) + 1);
    for (int w = 0; w <= o.ancilla_qubits; ++w) o.by_weight[static_cast<std::size_t>(w)].weight = w;
    for (std::size_t idx = 0; idx < count; ++idx) {
        auto e = ancilla_error(code, idx);
        const Syndrome s = syndrome_of_error(code, e);
        AncillaErrorClass c;
        if (!filter_accept(code, s)) {
            c = AncillaErrorClass::Detected;
        } else if (s.is_trivial()) {
            c = AncillaErrorClass::StabilizerEquivalent;
        } else {
            c = AncillaErrorClass::Impostor;
        }
        auto &row = o.by_weight[static_cast<std::size_t>(weight(e))];
        ++row.total;
        if (c == AncillaErrorClass::Detected) ++row.detected;
        if (c == AncillaErrorClass::StabilizerEquivalent) ++row.stabilizer;
        if (c == AncillaErrorClass::Impostor) ++row.impostor;
        o.errors.push_back(std::move(e));
        o.classes.push_back(c);
    }
    for (const auto &row : o.by_weight) {
        const std::uint64_t stab = row.weight == 0 ? 0 : row.stabilizer;
        o.coefficients.push_back(make_rational(stab + row.impostor, row.total));
        o.state_corrupting_coefficients.push_back(make_rational(row.impostor, row.total));
    }
    return o;
}

struct FailureRateReport {
    double p = 0.0;
    double p_identity_syndrome = 0.0;  ///< frequency of the all-zero syndrome
    double p_identity_operator = 0.0;  ///< (1-p)^n_A
    double delta_p1 = 0.0;             ///< all-zero syndrome caused by a non-identity error
    double p_00 = 0.0;                 ///< accepted, non-trivial syndrome
    double p_F = 0.0;                  ///< p_00 + delta_p1
    double analytic_p_F = 0.0;
    double identity_operator_frequency = 0.0;  ///< sampled frequency of the identity error
    double analytic_state_corrupting_p_F = 0.0;
    std::uint64_t shots = 0;

    /// One binomial standard error of p_F around the analytic value.
    double sigma() const {
        return std::sqrt(std::max(analytic_p_F * (1.0 - analytic_p_F), 0.0) / static_cast<double>(shots));
    }
};

/// Syndrome of each ancilla error obtained by simulating its action on the probe and measuring
/// every generator with the dense engine; indexed like ancilla_error().
inline std::vector<std::uint32_t> simulated_ancilla_syndromes(const StabilizerCode &code) {
    const DensityMatrix probe = prepare_probe(code);
    const std::size_t count = std::size_t{1} << (2 * code.ancilla_sites().size());
    std::vector<std::uint32_t> out(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        DensityMatrix state = apply_unitary(probe, to_matrix(ancilla_error(code, idx)));
        std::uint32_t bits = 0;
        for (int j = 0; j < code.r(); ++j) {
            auto [m, post] = measure_generator(state, code.generator(j), 0.5, j);
            if (m.probability != 1.0) throw ContractViolation("Pauli error left the probe outside a syndrome subspace");
            bits = (bits << 1) | (m.outcome == -1 ? 1U : 0U);
            state = std::move(post);
        }
        out[idx] = bits;
    }
    return out;
}

/// Monte-Carlo failure rate under independent depolarizing noise on the ancilla (principal noiseless).
///
/// Depolarizing noise is a Pauli mixture, so each shot samples a Pauli on every ancilla qubit and
/// reads the syndrome that error produces on the probe.
inline std::vector<FailureRateReport> failure_rate_experiment(const StabilizerCode &code,
                                                              const std::vector<double> &p_values,
                                                              std::uint64_t shots, std::uint64_t seed,
                                                              int threads = 1) {
    if (shots == 0) throw ContractViolation("failure sweep needs at least one shot");
    const FailureOracle oracle = failure_oracle(code);
    const auto syndromes = simulated_ancilla_syndromes(code);
    const int na = oracle.ancilla_qubits;
    const int prefix = code.filter_prefix();
    const int r = code.r();
    std::vector<FailureRateReport> out;
    for (std::size_t k = 0; k < p_values.size(); ++k) {
        const double p = p_values[k];
        require_probability(p, "p");
        const std::uint64_t point_seed = derive_seed(seed, k);
        struct Tally {
            std::uint64_t zero = 0, identity = 0, zero_nonidentity = 0, accepted_nonzero = 0;
        };
        const int workers = std::max(1, threads);
        std::vector<Tally> partial(static_cast<std::size_t>(workers));
        auto work = [&](int w) {
            const std::uint64_t begin = shots * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(workers);
            const std::uint64_t end = shots * static_cast<std::uint64_t>(w + 1) / static_cast<std::uint64_t>(workers);
            Tally &t = partial[static_cast<std::size_t>(w)];
            for (std::uint64_t s = begin; s < end; ++s) {
                CounterStream stream(point_seed, 0, s);
                std::size_t idx = 0;
                for (int a = 0; a < na; ++a) {
                    const double u = stream.next_uniform();
                    std::size_t digit = 0;
                    if (u >= 1.0 - p) digit = 1 + std::min<std::size_t>(2, static_cast<std::size_t>((u - (1.0 - p)) / (p / 3.0)));
                    idx = (idx << 2) | digit;
                }
                const std::uint32_t syn = syndromes[idx];
                const bool accepted = prefix == 0 || (syn >> (r - prefix)) == 0;
                if (idx == 0) ++t.identity;
                if (syn == 0) {
                    ++t.zero;
                    if (idx != 0) ++t.zero_nonidentity;
                } else if (accepted) {
                    ++t.accepted_nonzero;
                }
            }
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
            for (auto &t : pool) t.join();
        }
        Tally tot;
        for (const auto &t : partial) {
            tot.zero += t.zero;
            tot.identity += t.identity;
            tot.zero_nonidentity += t.zero_nonidentity;
            tot.accepted_nonzero += t.accepted_nonzero;
        }
        const double n = static_cast<double>(shots);
        FailureRateReport rep;
        rep.p = p;
        rep.shots = shots;
        rep.p_identity_syndrome = static_cast<double>(tot.zero) / n;
        rep.p_identity_operator = std::pow(1.0 - p, na);
        rep.identity_operator_frequency = static_cast<double>(tot.identity) / n;
        rep.delta_p1 = static_cast<double>(tot.zero_nonidentity) / n;
        rep.p_00 = static_cast<double>(tot.accepted_nonzero) / n;
        rep.p_F = rep.p_00 + rep.delta_p1;
        rep.analytic_p_F = oracle.failure_probability(p);
        rep.analytic_state_corrupting_p_F = oracle.state_corrupting_probability(p);
        out.push_back(rep);
    }
    return out;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs at least two matched points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0 || y[i] <= 0) throw std::invalid_argument("log-log slope needs positive data");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace dcqd
