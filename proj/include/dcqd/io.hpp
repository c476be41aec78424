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

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcqd/experiment.hpp"

namespace dcqd {

// ---------------------------------------------------------------------------
// Located-error table

/// Expected rows of the located-error table for the concatenated code, "i,E_i,e_i" with a header.
inline constexpr const char *kLocatedTableGolden =
    "i,E_i,e_i\n"
    "0,II,000000\n"
    "1,XI,000100\n"
    "2,YI,001100\n"
    "3,ZI,001000\n"
    "4,IX,000001\n"
    "5,IY,000011\n"
    "6,IZ,000010\n"
    "7,XX,000101\n"
    "8,XY,000111\n"
    "9,XZ,000110\n"
    "10,YX,001101\n"
    "11,YY,001111\n"
    "12,YZ,001110\n"
    "13,ZX,001001\n"
    "14,ZY,001011\n"
    "15,ZZ,001010\n";

inline std::string located_table_csv(const StabilizerCode &code) {
    std::ostringstream os;
    os << "i,E_i,e_i\n";
    for (const auto &row : located_error_table(code)) {
        os << row.index << ',' << row.principal.letters() << ',' << row.syndrome.str() << '\n';
    }
    return os.str();
}

/// Line-by-line differences between `code`'s table and the golden; empty when they agree.
inline std::vector<std::string> located_table_mismatches(const StabilizerCode &code) {
    std::istringstream got(located_table_csv(code));
    std::istringstream want(kLocatedTableGolden);
    std::vector<std::string> out;
    std::string g, w;
    int line = 0;
    while (true) {
        const bool hg = static_cast<bool>(std::getline(got, g));
        const bool hw = static_cast<bool>(std::getline(want, w));
        if (!hg && !hw) break;
        ++line;
        if (!hg) g = "<missing>";
        if (!hw) w = "<missing>";
        if (g != w) out.push_back("line " + std::to_string(line) + ": got '" + g + "', expected '" + w + "'");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const StabilizerCode &code) {
    nlohmann::json j;
    j["label"] = code.label();
    j["n"] = code.n();
    j["generators"] = nlohmann::json::array();
    for (const auto &g : code.generators()) j["generators"].push_back(g.format());
    j["principal_sites"] = code.principal_sites();
    j["ancilla_sites"] = code.ancilla_sites();
    j["filter_prefix"] = code.filter_prefix();
    return j;
}

/// Provenance block attached to every JSON output.
inline nlohmann::json meta_json(const ExperimentConfig &cfg) {
    return {{"config_hash", config_hash(cfg)}, {"seed", cfg.seed}, {"config", cfg.to_json()}};
}

/// One-line CSV header comment.
inline std::string csv_meta_line(const ExperimentConfig &cfg) {
    return "# config_hash=" + config_hash(cfg) + ", seed=" + std::to_string(cfg.seed) + "\n";
}

/// Prints doubles with 17 significant digits so values round-trip.
inline std::ostream &precise(std::ostream &os) { return os << std::setprecision(17); }

/// Labeled square matrix of Re or Im parts.
inline void write_matrix_csv(std::ostream &os, const Matrix &m, const std::vector<std::string> &labels, bool imag) {
    precise(os);
    os << "label";
    for (const auto &l : labels) os << ',' << l;
    os << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        os << labels.at(static_cast<std::size_t>(r));
        for (Eigen::Index c = 0; c < m.cols(); ++c) os << ',' << (imag ? m(r, c).imag() : m(r, c).real());
        os << '\n';
    }
}

/// Long-format difference table: one row per element.
inline void write_difference_csv(std::ostream &os, const Matrix &diff, const std::vector<std::string> &labels) {
    precise(os);
    os << "m,n,F_m,F_n,diff_real,diff_imag,abs_diff\n";
    for (Eigen::Index r = 0; r < diff.rows(); ++r) {
        for (Eigen::Index c = 0; c < diff.cols(); ++c) {
            os << r << ',' << c << ',' << labels.at(static_cast<std::size_t>(r)) << ','
               << labels.at(static_cast<std::size_t>(c)) << ',' << diff(r, c).real() << ',' << diff(r, c).imag() << ','
               << std::abs(diff(r, c)) << '\n';
        }
    }
}

inline nlohmann::json histograms_json(const CharacterizationRun &run) {
    nlohmann::json j;
    j["_meta"] = meta_json(run.config);
    j["backend"] = to_string(run.config.backend);
    j["settings"] = nlohmann::json::array();
    for (std::size_t k = 0; k < run.result.distributions.size(); ++k) {
        const auto &d = run.result.distributions[k];
        nlohmann::json s;
        s["setting"] = d.op.name();
        s["syndrome_bits"] = d.syndrome_bits;
        s["probabilities"] = d.weights;
        if (const auto *c = run.result.histogram.find(d.op)) s["counts"] = c->weights;
        j["settings"].push_back(std::move(s));
    }
    return j;
}

inline nlohmann::json fidelity_json(const CharacterizationRun &run) {
    const auto &f = run.fidelity;
    nlohmann::json j;
    j["_meta"] = meta_json(run.config);
    j["scenario"] = to_string(run.config.scenario);
    j["fidelity"] = f.value;
    j["input_state"] = f.input_state;
    j["reconstructed"] = f.reconstructed_label;
    j["reference"] = f.reference_label;
    j["min_eigenvalue"] = f.min_eigenvalue;
    j["warnings"] = f.warnings;
    j["max_abs_chi_difference"] = run.distance.max_abs;
    j["accepted_fraction"] = run.result.accepted_fraction;
    return j;
}

inline void write_failure_csv(std::ostream &os, const ExperimentConfig &cfg, const std::vector<FailureRateReport> &rows) {
    precise(os);
    os << csv_meta_line(cfg);
    os << "p,p_identity_syndrome,P_identity,delta_p1,p_00,p_F,analytic_p_F,identity_operator_freq,"
          "analytic_p_F_state_corrupting,sigma,shots\n";
    for (const auto &r : rows) {
        os << r.p << ',' << r.p_identity_syndrome << ',' << r.p_identity_operator << ',' << r.delta_p1 << ','
           << r.p_00 << ',' << r.p_F << ',' << r.analytic_p_F << ',' << r.identity_operator_frequency << ','
           << r.analytic_state_corrupting_p_F << ',' << r.sigma() << ',' << r.shots << '\n';
    }
}

inline nlohmann::json oracle_json(const FailureOracle &o) {
    nlohmann::json j;
    j["ancilla_qubits"] = o.ancilla_qubits;
    j["by_weight"] = nlohmann::json::array();
    for (std::size_t w = 0; w < o.by_weight.size(); ++w) {
        const auto &row = o.by_weight[w];
        j["by_weight"].push_back({{"weight", row.weight},
                                  {"total", row.total},
                                  {"detected", row.detected},
                                  {"stabilizer_equivalent", row.stabilizer},
                                  {"impostor", row.impostor},
                                  {"coefficient", o.coefficients[w].str()},
                                  {"state_corrupting_coefficient", o.state_corrupting_coefficients[w].str()}});
    }
    return j;
}

/// Writes `text` to dir/name, creating the directory.
inline std::filesystem::path write_text(const std::filesystem::path &dir, const std::string &name,
                                        const std::string &text) {
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << text;
    return path;
}

/// Writes every characterization artifact into cfg.output_dir.
inline void write_characterization(const CharacterizationRun &run) {
    const std::filesystem::path dir = run.config.output_dir;
    const auto labels = run.result.chi.labels();
    std::ostringstream re, im, diff;
    re << csv_meta_line(run.config);
    im << csv_meta_line(run.config);
    diff << csv_meta_line(run.config);
    write_matrix_csv(re, run.result.chi.matrix(), labels, false);
    write_matrix_csv(im, run.result.chi.matrix(), labels, true);
    write_difference_csv(diff, run.distance.difference, labels);
    write_text(dir, "chi_real.csv", re.str());
    write_text(dir, "chi_imag.csv", im.str());
    write_text(dir, "chi_diff_vs_theory.csv", diff.str());
    write_text(dir, "fidelity.json", fidelity_json(run).dump(2) + "\n");
    write_text(dir, "histograms.json", histograms_json(run).dump(2) + "\n");
}

inline void write_config_echo(const ExperimentConfig &cfg) {
    nlohmann::json j = cfg.to_json();
    j["_meta"] = {{"config_hash", config_hash(cfg)}, {"seed", cfg.seed}};
    write_text(cfg.output_dir, "config.json", j.dump(2) + "\n");
}

}  // namespace dcqd
