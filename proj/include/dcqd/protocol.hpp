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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dcqd/channels.hpp"
#include "dcqd/errors.hpp"
#include "dcqd/linalg.hpp"
#include "dcqd/pauli.hpp"
#include "dcqd/process_matrix.hpp"
#include "dcqd/random.hpp"
#include "dcqd/stabilizer_code.hpp"
#include "dcqd/state.hpp"

namespace dcqd {

// ---------------------------------------------------------------------------
// Preprocessing settings

enum class PreprocessingKind { Identity, CoherenceUnitary, CoherenceProjective };

/// Operation applied between the unknown process and syndrome extraction:
/// nothing, U_j = (1 + iF_j)/√2, or a projective measurement of F_j.
struct PreprocessingOp {
    PreprocessingKind kind = PreprocessingKind::Identity;
    int f_index = -1;  ///< located-operator index j; -1 for Identity

    static PreprocessingOp identity() { return {}; }
    static PreprocessingOp unitary(int j) { return {PreprocessingKind::CoherenceUnitary, j}; }
    static PreprocessingOp projective(int j) { return {PreprocessingKind::CoherenceProjective, j}; }

    bool has_outcome() const { return kind == PreprocessingKind::CoherenceProjective; }

    /// "I", "U<j>" or "P<j>".
    std::string name() const {
        switch (kind) {
            case PreprocessingKind::Identity: return "I";
            case PreprocessingKind::CoherenceUnitary: return "U" + std::to_string(f_index);
            case PreprocessingKind::CoherenceProjective: return "P" + std::to_string(f_index);
        }
        return "?";
    }

    /// Stream id used to key the random draws of this setting: 0, j, or 15 + j for two principal qubits.
    std::uint64_t stream_id(std::size_t basis_size) const {
        switch (kind) {
            case PreprocessingKind::Identity: return 0;
            case PreprocessingKind::CoherenceUnitary: return static_cast<std::uint64_t>(f_index);
            case PreprocessingKind::CoherenceProjective: return basis_size - 1 + static_cast<std::uint64_t>(f_index);
        }
        return 0;
    }

    friend bool operator==(const PreprocessingOp &, const PreprocessingOp &) = default;
    friend auto operator<=>(const PreprocessingOp &, const PreprocessingOp &) = default;
};

inline void validate_op(const PreprocessingOp &op, const StabilizerCode &code) {
    const auto m = static_cast<int>(ProcessMatrix::basis_size(static_cast<int>(code.principal_sites().size())));
    if (op.kind == PreprocessingKind::Identity) {
        if (op.f_index != -1) throw ContractViolation("identity preprocessing carries no operator index");
        return;
    }
    if (op.f_index < 0 || op.f_index >= m) {
        throw ContractViolation("preprocessing index " + std::to_string(op.f_index) + " outside located basis");
    }
}

/// F_j on the full code register, phase +1.
inline PauliOperator preprocessing_pauli(const PreprocessingOp &op, const StabilizerCode &code) {
    validate_op(op, code);
    if (op.kind == PreprocessingKind::Identity) throw ContractViolation("identity preprocessing has no operator");
    const auto basis = located_basis(static_cast<int>(code.principal_sites().size()));
    return embed_principal(code, basis[static_cast<std::size_t>(op.f_index)]);
}

/// U_j = (1 + iF_j)/√2 on the code register.
inline Matrix preprocessing_unitary(const PreprocessingOp &op, const StabilizerCode &code) {
    if (op.kind != PreprocessingKind::CoherenceUnitary) throw ContractViolation("not a unitary preprocessing setting");
    const Matrix f = to_matrix(preprocessing_pauli(op, code));
    const auto d = f.rows();
    return (Matrix::Identity(d, d) + cplx(0, 1) * f) / std::sqrt(2.0);
}

/// All 31 settings of a full characterization: I, then U_1..U_15, then P_1..P_15.
inline std::vector<PreprocessingOp> full_settings(const StabilizerCode &code) {
    const auto m = static_cast<int>(ProcessMatrix::basis_size(static_cast<int>(code.principal_sites().size())));
    std::vector<PreprocessingOp> ops{PreprocessingOp::identity()};
    for (int j = 1; j < m; ++j) ops.push_back(PreprocessingOp::unitary(j));
    for (int j = 1; j < m; ++j) ops.push_back(PreprocessingOp::projective(j));
    return ops;
}

// ---------------------------------------------------------------------------
// Filtering and decoding

/// True iff the syndrome shows no ancilla noise (filter-prefix bits all zero).
inline bool filter_accept(const StabilizerCode &code, const Syndrome &s) {
    if (s.size() != code.r()) throw DimensionError("syndrome length differs from generator count");
    return s.prefix(code.filter_prefix()) == 0;
}

/// Decodes syndromes to located indices with or without ancilla filtering.
/// With the filter off, prefix bits are ignored and the remainder is read as a located syndrome.
class SyndromeInterpreter {
  public:
    SyndromeInterpreter(const StabilizerCode &code, bool filter_on)
        : r_(code.r()), prefix_(code.filter_prefix()), filter_on_(filter_on), lut_(syndrome_decoder(code)) {}

    int syndrome_bits() const { return r_; }

    /// Located index, or -1 when the shot is discarded.
    int located(std::uint32_t syndrome_index) const {
        const int tail = r_ - prefix_;
        const std::uint32_t tail_mask = tail >= 32 ? ~0U : ((1U << tail) - 1U);
        if (filter_on_ && prefix_ > 0 && (syndrome_index >> tail) != 0) return -1;
        return lut_[syndrome_index & tail_mask];
    }

  private:
    int r_;
    int prefix_;
    bool filter_on_;
    std::vector<int> lut_;
};

// ---------------------------------------------------------------------------
// Shots

struct ShotRecord {
    PreprocessingOp preprocessing;
    std::optional<int> projective_outcome;
    Syndrome syndrome;
};

/// Preprocessing applied to an already-evolved state; projective settings are handled by the measurement stage.
inline DensityMatrix apply_preprocessing_unitary(const DensityMatrix &state, const PreprocessingOp &op,
                                                 const StabilizerCode &code) {
    if (op.kind == PreprocessingKind::CoherenceUnitary) return apply_unitary(state, preprocessing_unitary(op, code));
    return state;
}

/// Observables measured in sequence for `op`: F_j first for projective settings, then the generators.
inline std::vector<PauliOperator> measurement_sequence(const PreprocessingOp &op, const StabilizerCode &code) {
    std::vector<PauliOperator> seq;
    if (op.has_outcome()) seq.push_back(preprocessing_pauli(op, code));
    for (const auto &g : code.generators()) seq.push_back(g);
    return seq;
}

/// One Monte-Carlo event: channel, preprocessing, then sequential generator measurement with collapse.
inline ShotRecord run_shot(const DensityMatrix &probe, const QuantumChannel &channel, const PreprocessingOp &op,
                           const StabilizerCode &code, CounterStream &stream) {
    validate_op(op, code);
    if (probe.num_qubits() != code.n()) throw DimensionError("probe and code sizes differ");
    DensityMatrix state = apply_preprocessing_unitary(apply_channel(probe, channel), op, code);
    ShotRecord rec{op, std::nullopt, Syndrome(code.r(), 0)};
    if (op.has_outcome()) {
        auto [m, post] = measure_generator(state, preprocessing_pauli(op, code), stream.next_uniform());
        rec.projective_outcome = m.outcome;
        state = std::move(post);
    }
    std::uint32_t bits = 0;
    for (int j = 0; j < code.r(); ++j) {
        auto [m, post] = measure_generator(state, code.generator(j), stream.next_uniform(), j);
        bits = (bits << 1) | (m.outcome == -1 ? 1U : 0U);
        state = std::move(post);
    }
    rec.syndrome = Syndrome(code.r(), bits);
    return rec;
}

/// Outcome tree of a sequence of commuting Pauli measurements on a fixed state.
///
/// Built with the same measurement arithmetic as run_shot, so walking it with a
/// stream yields exactly the outcomes run_shot would draw from that stream.
/// Leaf keys pack outcomes most-significant-first with bit 1 for -1.
class MeasurementTree {
  public:
    MeasurementTree(const DensityMatrix &state, const std::vector<PauliOperator> &observables)
        : depth_(static_cast<int>(observables.size())) {
        for (const auto &o : observables) {
            if (!o.is_hermitian()) throw ContractViolation("tree observables must be Hermitian");
            if (o.num_qubits() != state.num_qubits()) throw DimensionError("observable and state sizes differ");
        }
        build(state, observables, 0);
    }

    int depth() const { return depth_; }

    std::uint32_t sample(CounterStream &stream) const {
        int node = 0;
        std::uint32_t key = 0;
        for (int level = 0; level < depth_; ++level) {
            const Node &nd = nodes_[static_cast<std::size_t>(node)];
            const bool plus = stream.next_uniform() < nd.p_plus;
            key = (key << 1) | (plus ? 0U : 1U);
            node = plus ? nd.child_plus : nd.child_minus;
        }
        return key;
    }

    /// Exact leaf probabilities (product of conditional Born probabilities), indexed by key.
    std::vector<double> leaf_probabilities() const {
        std::vector<double> out(std::size_t{1} << depth_, 0.0);
        collect(0, 0, 0, 1.0, out);
        return out;
    }

  private:
    struct Node {
        double p_plus = 1.0;
        int child_plus = -1;
        int child_minus = -1;
    };

    int build(const DensityMatrix &state, const std::vector<PauliOperator> &obs, int level) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        if (level == depth_) return id;
        const PauliOperator &g = obs[static_cast<std::size_t>(level)];
        const double p = plus_probability(state, g);
        nodes_[static_cast<std::size_t>(id)].p_plus = p;
        if (p > 0.0) {
            const int c = build(project_pauli(state, g, +1, p), obs, level + 1);
            nodes_[static_cast<std::size_t>(id)].child_plus = c;
        }
        if (p < 1.0) {
            const int c = build(project_pauli(state, g, -1, 1.0 - p), obs, level + 1);
            nodes_[static_cast<std::size_t>(id)].child_minus = c;
        }
        return id;
    }

    void collect(int node, int level, std::uint32_t key, double prob, std::vector<double> &out) const {
        if (level == depth_) {
            out[key] += prob;
            return;
        }
        const Node &nd = nodes_[static_cast<std::size_t>(node)];
        if (nd.child_plus >= 0) collect(nd.child_plus, level + 1, key << 1, prob * nd.p_plus, out);
        if (nd.child_minus >= 0) collect(nd.child_minus, level + 1, (key << 1) | 1U, prob * (1.0 - nd.p_plus), out);
    }

    int depth_;
    std::vector<Node> nodes_;
};

// ---------------------------------------------------------------------------
// Histograms

/// Per-setting table over (outcome, syndrome) slots: slot = outcome_bit · 2^r + syndrome,
/// outcome_bit 1 meaning the -1 eigenvalue of F_j. Non-projective settings use slots [0, 2^r).
template <class T>
struct SettingTable {
    PreprocessingOp op;
    int syndrome_bits = 0;
    std::vector<T> weights;

    SettingTable() = default;
    SettingTable(PreprocessingOp o, int r)
        : op(o), syndrome_bits(r), weights((std::size_t{1} << r) * (o.has_outcome() ? 2 : 1), T{}) {}

    T total() const {
        T t{};
        for (const auto &w : weights) t += w;
        return t;
    }

    std::size_t slot(int outcome, std::uint32_t syndrome) const {
        return (outcome == -1 ? std::size_t{1} << syndrome_bits : 0) + syndrome;
    }

    T at(int outcome, std::uint32_t syndrome) const { return weights.at(slot(outcome, syndrome)); }

    SettingTable &operator+=(const SettingTable &o) {
        if (o.op != op || o.weights.size() != weights.size()) throw DimensionError("merging mismatched settings");
        for (std::size_t i = 0; i < weights.size(); ++i) weights[i] += o.weights[i];
        return *this;
    }
};

using SettingCounts = SettingTable<std::uint64_t>;
using SettingProbabilities = SettingTable<double>;

/// Shot counts for every setting of a run.
struct SyndromeHistogram {
    std::vector<SettingCounts> settings;

    std::uint64_t total_shots() const {
        std::uint64_t t = 0;
        for (const auto &s : settings) t += s.total();
        return t;
    }

    std::uint64_t accepted_shots(const SyndromeInterpreter &interp) const {
        std::uint64_t a = 0;
        for (const auto &s : settings) {
            for (std::size_t slot = 0; slot < s.weights.size(); ++slot) {
                const auto syn = static_cast<std::uint32_t>(slot & ((std::size_t{1} << s.syndrome_bits) - 1));
                if (interp.located(syn) >= 0) a += s.weights[slot];
            }
        }
        return a;
    }

    const SettingCounts *find(const PreprocessingOp &op) const {
        for (const auto &s : settings) {
            if (s.op == op) return &s;
        }
        return nullptr;
    }
};

inline SettingProbabilities to_frequencies(const SettingCounts &c) {
    SettingProbabilities p(c.op, c.syndrome_bits);
    const double total = static_cast<double>(c.total());
    if (total == 0) return p;
    for (std::size_t i = 0; i < c.weights.size(); ++i) p.weights[i] = static_cast<double>(c.weights[i]) / total;
    return p;
}

// ---------------------------------------------------------------------------
// Backends

/// Draws `shots` events of one setting. Shot s uses stream (seed, setting stream id, s);
/// the result does not depend on `threads`.
inline SettingCounts sample_setting(const DensityMatrix &evolved, const PreprocessingOp &op, const StabilizerCode &code,
                                    std::uint64_t shots, std::uint64_t seed, int threads = 1) {
    validate_op(op, code);
    const DensityMatrix state = apply_preprocessing_unitary(evolved, op, code);
    const MeasurementTree tree(state, measurement_sequence(op, code));
    const std::uint64_t stream_id =
        op.stream_id(ProcessMatrix::basis_size(static_cast<int>(code.principal_sites().size())));
    const int workers = std::max(1, threads);
    std::vector<SettingCounts> partial(static_cast<std::size_t>(workers), SettingCounts(op, code.r()));
    auto work = [&](int w) {
        const std::uint64_t begin = shots * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(workers);
        const std::uint64_t end = shots * static_cast<std::uint64_t>(w + 1) / static_cast<std::uint64_t>(workers);
        auto &counts = partial[static_cast<std::size_t>(w)].weights;
        for (std::uint64_t s = begin; s < end; ++s) {
            CounterStream stream(seed, stream_id, s);
            ++counts[tree.sample(stream)];
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto &t : pool) t.join();
    }
    SettingCounts out(op, code.r());
    for (const auto &p : partial) out += p;
    return out;
}

/// Syndrome-subspace projectors Π_s = ∏_j (1 + (-1)^{s_j} g_j)/2, indexed by syndrome.
class SyndromeProjectors {
  public:
    explicit SyndromeProjectors(const StabilizerCode &code) : r_(code.r()) {
        require_dense_size(code.n());
        const auto d = static_cast<Eigen::Index>(dim_of(code.n()));
        std::vector<Matrix> level{Matrix::Identity(d, d)};
        for (const auto &g : code.generators()) {
            const Matrix gd = to_matrix(g);
            const Matrix plus = (Matrix::Identity(d, d) + gd) * 0.5;
            const Matrix minus = (Matrix::Identity(d, d) - gd) * 0.5;
            std::vector<Matrix> next;
            next.reserve(level.size() * 2);
            for (const auto &m : level) {
                next.push_back(m * plus);
                next.push_back(m * minus);
            }
            level = std::move(next);
        }
        projectors_ = std::move(level);
    }

    int syndrome_bits() const { return r_; }
    const Matrix &operator[](std::size_t s) const { return projectors_.at(s); }
    std::size_t size() const { return projectors_.size(); }

    /// p_s = Tr[Π_s rho] for every syndrome.
    std::vector<double> probabilities(const Matrix &rho) const {
        std::vector<double> out(projectors_.size());
        for (std::size_t s = 0; s < projectors_.size(); ++s) {
            out[s] = projectors_[s].cwiseProduct(rho.transpose()).sum().real();
        }
        return out;
    }

  private:
    int r_;
    std::vector<Matrix> projectors_;
};

/// Exact (outcome, syndrome) probabilities of one setting via syndrome-projector traces.
inline SettingProbabilities exact_setting(const DensityMatrix &evolved, const PreprocessingOp &op,
                                          const StabilizerCode &code, const SyndromeProjectors &projectors) {
    validate_op(op, code);
    SettingProbabilities out(op, code.r());
    const std::size_t ns = std::size_t{1} << code.r();
    if (op.kind == PreprocessingKind::CoherenceProjective) {
        const Matrix f = to_matrix(preprocessing_pauli(op, code));
        const auto d = f.rows();
        for (int outcome : {+1, -1}) {
            const Matrix proj = (Matrix::Identity(d, d) + static_cast<double>(outcome) * f) * 0.5;
            const Matrix branch = proj * evolved.matrix() * proj;
            const auto p = projectors.probabilities(branch);
            for (std::size_t s = 0; s < ns; ++s) out.weights[out.slot(outcome, static_cast<std::uint32_t>(s))] = p[s];
        }
    } else {
        const DensityMatrix state = apply_preprocessing_unitary(evolved, op, code);
        const auto p = projectors.probabilities(state.matrix());
        for (std::size_t s = 0; s < ns; ++s) out.weights[s] = p[s];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Estimators

/// Filtered, renormalized view of one setting: q(o, i) for located index i.
struct FilteredSetting {
    PreprocessingOp op;
    std::vector<double> plus;   ///< outcome +1 (or no outcome), per located index
    std::vector<double> minus;  ///< outcome -1, per located index (zero for non-projective)
    double accepted_fraction = 0.0;
};

inline FilteredSetting filter_setting(const SettingProbabilities &p, const SyndromeInterpreter &interp,
                                      std::size_t basis_size) {
    FilteredSetting f{p.op, std::vector<double>(basis_size, 0.0), std::vector<double>(basis_size, 0.0), 0.0};
    const std::size_t ns = std::size_t{1} << p.syndrome_bits;
    double accepted = 0.0;
    for (std::size_t slot = 0; slot < p.weights.size(); ++slot) {
        const int i = interp.located(static_cast<std::uint32_t>(slot % ns));
        if (i < 0) continue;
        (slot < ns ? f.plus : f.minus)[static_cast<std::size_t>(i)] += p.weights[slot];
        accepted += p.weights[slot];
    }
    const double total = p.total();
    f.accepted_fraction = total > 0 ? accepted / total : 0.0;
    if (accepted > 0) {
        for (auto &v : f.plus) v /= accepted;
        for (auto &v : f.minus) v /= accepted;
    }
    return f;
}

/// χ_ii = accepted frequency of located syndrome e_i; sums to 1 over the accepted shots.
inline std::vector<double> estimate_diagonal(const SettingProbabilities &identity_setting,
                                             const SyndromeInterpreter &interp, std::size_t basis_size) {
    if (identity_setting.op.kind != PreprocessingKind::Identity) {
        throw ContractViolation("diagonal estimate needs the identity setting");
    }
    return filter_setting(identity_setting, interp, basis_size).plus;
}

/// (J, φ_J) with φ_J F_J = F_i† F_j over the located basis.
struct CoherencePartner {
    int J;
    int phase;  ///< exponent of i
};

inline CoherencePartner coherence_partner(const std::vector<PauliOperator> &basis, int i, int j) {
    const auto &fi = basis.at(static_cast<std::size_t>(i));
    const PauliOperator prod = inverse(fi) * basis.at(static_cast<std::size_t>(j));
    const auto J = located_index(prod);
    if (!J) throw ContractViolation("located basis is not closed under multiplication");
    return {*J, prod.phase()};
}

/// Sparse element estimates accumulated from coherence settings.
class CoherenceAccumulator {
  public:
    explicit CoherenceAccumulator(int principal_qubits)
        : np_(principal_qubits), basis_(located_basis(principal_qubits)),
          sum_(Matrix::Zero(static_cast<Eigen::Index>(basis_.size()), static_cast<Eigen::Index>(basis_.size()))),
          count_(basis_.size() * basis_.size(), 0) {}

    /// Adds the estimates of χ_Ji for every i from settings U_j and P_j.
    void add(const std::vector<double> &diag, const FilteredSetting &u, const FilteredSetting &p) {
        if (u.op.kind != PreprocessingKind::CoherenceUnitary || p.op.kind != PreprocessingKind::CoherenceProjective ||
            u.op.f_index != p.op.f_index) {
            throw ContractViolation("coherence estimate needs matching U_j and P_j settings");
        }
        const int j = u.op.f_index;
        static const cplx kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        for (int i = 0; i < static_cast<int>(basis_.size()); ++i) {
            const auto [J, phase] = coherence_partner(basis_, i, j);
            if (J == i) continue;
            const auto ui = static_cast<std::size_t>(i);
            const double im = 0.5 * (diag[ui] + diag[static_cast<std::size_t>(J)]) - u.plus[ui];
            const double re = p.plus[ui] - p.minus[ui];
            const cplx est = cplx(re, im) / kI[phase];
            sum_(J, i) += est;
            ++count_[static_cast<std::size_t>(J) * basis_.size() + ui];
        }
    }

    bool has(int m, int n) const { return count_[static_cast<std::size_t>(m) * basis_.size() + static_cast<std::size_t>(n)] > 0; }

    cplx raw(int m, int n) const {
        const auto c = count_[static_cast<std::size_t>(m) * basis_.size() + static_cast<std::size_t>(n)];
        return c == 0 ? cplx(0, 0) : sum_(m, n) / static_cast<double>(c);
    }

    /// Element estimate averaged with the conjugate of its transpose partner when both exist.
    cplx element(int m, int n) const {
        const bool a = has(m, n);
        const bool b = has(n, m);
        if (a && b) return 0.5 * (raw(m, n) + std::conj(raw(n, m)));
        if (a) return raw(m, n);
        if (b) return std::conj(raw(n, m));
        return {0.0, 0.0};
    }

  private:
    int np_;
    std::vector<PauliOperator> basis_;
    Matrix sum_;
    std::vector<int> count_;
};

/// Full χ from the identity setting and every U_j/P_j pair, j = 1 .. d²-1.
inline ProcessMatrix estimate_offdiagonal(const SettingProbabilities &identity_setting,
                                          const std::vector<SettingProbabilities> &coherence_settings,
                                          const StabilizerCode &code, bool filter_on = true) {
    const int np = static_cast<int>(code.principal_sites().size());
    const std::size_t m = ProcessMatrix::basis_size(np);
    const SyndromeInterpreter interp(code, filter_on);
    const auto diag = estimate_diagonal(identity_setting, interp, m);

    std::map<int, const SettingProbabilities *> u_by_j;
    std::map<int, const SettingProbabilities *> p_by_j;
    for (const auto &s : coherence_settings) {
        if (s.op.kind == PreprocessingKind::CoherenceUnitary) u_by_j[s.op.f_index] = &s;
        if (s.op.kind == PreprocessingKind::CoherenceProjective) p_by_j[s.op.f_index] = &s;
    }
    std::string missing;
    for (int j = 1; j < static_cast<int>(m); ++j) {
        if (!u_by_j.count(j)) missing += " U" + std::to_string(j);
        if (!p_by_j.count(j)) missing += " P" + std::to_string(j);
    }
    if (!missing.empty()) throw IncompleteData("missing preprocessing settings:" + missing);

    CoherenceAccumulator acc(np);
    for (int j = 1; j < static_cast<int>(m); ++j) {
        acc.add(diag, filter_setting(*u_by_j[j], interp, m), filter_setting(*p_by_j[j], interp, m));
    }
    ProcessMatrix chi(np);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            const auto ia = static_cast<Eigen::Index>(a);
            const auto ib = static_cast<Eigen::Index>(b);
            chi(ia, ib) = a == b ? cplx(diag[a], 0.0) : acc.element(static_cast<int>(a), static_cast<int>(b));
        }
    }
    return chi.hermitian_part();
}

// ---------------------------------------------------------------------------
// End-to-end runs

enum class Backend { Sampling, Exact };

struct RunOptions {
    Backend backend = Backend::Exact;
    std::uint64_t shots_per_setting = 100000;
    std::uint64_t seed = 1;
    int threads = 1;
    bool filter_on = true;
};

struct CharacterizationResult {
    ProcessMatrix chi;
    std::vector<double> diagonal;
    std::vector<SettingProbabilities> distributions;  ///< normalized per setting (frequencies or exact)
    SyndromeHistogram histogram;                      ///< empty for the exact backend
    double accepted_fraction = 0.0;                   ///< identity setting
};

/// Evolves the probe through `noise` (applied in list order).
inline DensityMatrix prepare_probe(const StabilizerCode &code) { return DensityMatrix::from_vector(codeword_vector(code)); }

inline DensityMatrix evolve_probe(const StabilizerCode &code, const std::vector<QuantumChannel> &noise) {
    return apply_channels(prepare_probe(code), noise);
}

namespace detail {

inline std::vector<SettingProbabilities> run_settings(const StabilizerCode &code, const DensityMatrix &evolved,
                                                      const std::vector<PreprocessingOp> &ops, const RunOptions &opt,
                                                      SyndromeHistogram *hist) {
    std::vector<SettingProbabilities> out;
    if (opt.backend == Backend::Exact) {
        const SyndromeProjectors proj(code);
        for (const auto &op : ops) out.push_back(exact_setting(evolved, op, code, proj));
        return out;
    }
    if (opt.shots_per_setting == 0) throw ContractViolation("sampling backend needs at least one shot per setting");
    for (const auto &op : ops) {
        auto counts = sample_setting(evolved, op, code, opt.shots_per_setting, opt.seed, opt.threads);
        out.push_back(to_frequencies(counts));
        if (hist) hist->settings.push_back(std::move(counts));
    }
    return out;
}

}  // namespace detail

inline CharacterizationResult characterize(const StabilizerCode &code, const std::vector<QuantumChannel> &noise,
                                           const RunOptions &opt) {
    const DensityMatrix evolved = evolve_probe(code, noise);
    CharacterizationResult res;
    res.distributions = detail::run_settings(code, evolved, full_settings(code), opt, &res.histogram);
    const std::vector<SettingProbabilities> coherence(res.distributions.begin() + 1, res.distributions.end());
    res.chi = estimate_offdiagonal(res.distributions.front(), coherence, code, opt.filter_on);
    const SyndromeInterpreter interp(code, opt.filter_on);
    const std::size_t m = static_cast<std::size_t>(res.chi.size());
    res.diagonal = estimate_diagonal(res.distributions.front(), interp, m);
    res.accepted_fraction = filter_setting(res.distributions.front(), interp, m).accepted_fraction;
    return res;
}

struct PartialResult {
    std::map<std::pair<int, int>, cplx> elements;
    std::vector<PreprocessingOp> settings_run;
};

/// Estimates only the requested (m, n) elements, running the identity setting plus U_j/P_j
/// for the unique j with F_j ∝ F_n F_m of each off-diagonal request.
inline PartialResult partial_characterize(const StabilizerCode &code, const std::vector<QuantumChannel> &noise,
                                          const RunOptions &opt, const std::vector<std::pair<int, int>> &elements) {
    const int np = static_cast<int>(code.principal_sites().size());
    const auto basis = located_basis(np);
    const auto m = static_cast<int>(basis.size());
    std::set<int> needed;
    for (const auto &[a, b] : elements) {
        if (a < 0 || a >= m || b < 0 || b >= m) throw ContractViolation("requested element index outside basis");
        if (a == b) continue;
        needed.insert(*located_index(basis[static_cast<std::size_t>(b)] * basis[static_cast<std::size_t>(a)]));
    }
    std::vector<PreprocessingOp> ops{PreprocessingOp::identity()};
    for (int j : needed) ops.push_back(PreprocessingOp::unitary(j));
    for (int j : needed) ops.push_back(PreprocessingOp::projective(j));

    const DensityMatrix evolved = evolve_probe(code, noise);
    const auto dists = detail::run_settings(code, evolved, ops, opt, nullptr);
    const SyndromeInterpreter interp(code, opt.filter_on);
    const auto diag = estimate_diagonal(dists.front(), interp, static_cast<std::size_t>(m));
    CoherenceAccumulator acc(np);
    const std::size_t half = needed.size();
    for (std::size_t k = 0; k < half; ++k) {
        acc.add(diag, filter_setting(dists[1 + k], interp, static_cast<std::size_t>(m)),
                filter_setting(dists[1 + half + k], interp, static_cast<std::size_t>(m)));
    }
    PartialResult out;
    out.settings_run = ops;
    for (const auto &[a, b] : elements) {
        out.elements[{a, b}] = a == b ? cplx(diag[static_cast<std::size_t>(a)], 0.0) : acc.element(a, b);
    }
    return out;
}

}  // namespace dcqd
