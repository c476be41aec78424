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

#include "dcqd/io.hpp"

namespace dcqd {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

inline CheckResult check_located_table(const StabilizerCode &code) {
    const auto bad = located_table_mismatches(code);
    return {"located-table golden", bad.empty(), bad.empty() ? "16 rows match" : bad.front()};
}

inline CheckResult check_codeword(const StabilizerCode &code) {
    const Vector v = codeword_vector(code);
    double worst = 0.0;
    for (const auto &g : code.generators()) worst = std::max(worst, (to_matrix(g) * v - v).cwiseAbs().maxCoeff());
    return {"probe stabilized by " + code.label(), worst < 1e-12, "max residual " + std::to_string(worst)};
}

/// Exact-backend reconstruction of a noiseless-ancilla amplitude-damping channel.
inline CheckResult check_exact_identity(const StabilizerCode &code, double gamma) {
    RunOptions opt;
    opt.backend = Backend::Exact;
    const auto res = characterize(code, {amplitude_damping(gamma, 1, code.n())}, opt);
    const double d = chi_distance_report(res.chi, theoretical_chi_ad(gamma)).max_abs;
    std::ostringstream os;
    os << "max |chi - chi_AD| = " << d;
    return {"exact reconstruction on " + code.label(), d < 1e-10, os.str()};
}

inline CheckResult check_oracle_counts(const StabilizerCode &code) {
    const auto o = failure_oracle(code);
    std::ostringstream os;
    for (const auto &c : o.coefficients) os << c.str() << ' ';
    const bool ok = o.ancilla_qubits == 4 && o.coefficients[1].num == 0 && o.coefficients[2].str() == "1/3" &&
                    o.coefficients[3].str() == "2/9" && o.coefficients[4].str() == "7/27";
    return {"failure-oracle coefficients", ok, os.str()};
}

/// Every weight-one ancilla error must be rejected, checked against dense simulation.
inline CheckResult check_filter_soundness(const StabilizerCode &code) {
    const auto syn = simulated_ancilla_syndromes(code);
    int accepted = 0, total = 0;
    for (std::size_t idx = 0; idx < syn.size(); ++idx) {
        if (weight(ancilla_error(code, idx)) != 1) continue;
        ++total;
        if (filter_accept(code, Syndrome(code.r(), syn[idx]))) ++accepted;
    }
    return {"weight-one ancilla errors rejected", accepted == 0 && total == 12,
            std::to_string(accepted) + " of " + std::to_string(total) + " accepted"};
}

/// Fast invariants run by `dcqd selftest`.
inline std::vector<CheckResult> run_selftest() {
    const auto s0 = build_s0();
    const auto s1 = build_s1();
    return {check_located_table(s1),      check_codeword(s0),          check_codeword(s1),
            check_exact_identity(s0, 0.4), check_exact_identity(s1, 0.4), check_oracle_counts(s1),
            check_filter_soundness(s1)};
}

}  // namespace dcqd
