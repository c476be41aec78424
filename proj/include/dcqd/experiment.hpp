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

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcqd/analysis.hpp"
#include "dcqd/channels.hpp"
#include "dcqd/protocol.hpp"
#include "dcqd/stabilizer_code.hpp"

namespace dcqd {

/// Invalid experiment configuration; `field` names the offending key.
struct ConfigError : std::invalid_argument {
    ConfigError(const std::string &name, const std::string &msg)
        : std::invalid_argument(name + ": " + msg), field(name) {}
    std::string field;
};

enum class Scenario { Clean, S0Noisy, S1Noisy, S1Clean, FailureSweep, Table };

inline std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::Clean: return "clean";
        case Scenario::S0Noisy: return "s0_noisy";
        case Scenario::S1Noisy: return "s1_noisy";
        case Scenario::S1Clean: return "s1_clean";
        case Scenario::FailureSweep: return "failure_sweep";
        case Scenario::Table: return "table";
    }
    return "?";
}

inline Scenario parse_scenario(const std::string &s) {
    if (s == "clean") return Scenario::Clean;
    if (s == "s0_noisy") return Scenario::S0Noisy;
    if (s == "s1_noisy") return Scenario::S1Noisy;
    if (s == "s1_clean") return Scenario::S1Clean;
    if (s == "failure_sweep") return Scenario::FailureSweep;
    if (s == "table") return Scenario::Table;
    throw ConfigError("scenario", "unknown scenario '" + s + "'");
}

inline std::string to_string(Backend b) { return b == Backend::Exact ? "exact" : "sampling"; }

inline Backend parse_backend(const std::string &s) {
    if (s == "exact") return Backend::Exact;
    if (s == "sampling") return Backend::Sampling;
    throw ConfigError("backend", "expected 'sampling' or 'exact', got '" + s + "'");
}

struct ExperimentConfig {
    Scenario scenario = Scenario::S1Noisy;
    double gamma = 0.4;
    double p = 0.1;
    std::uint64_t shots_per_setting = 1000000;
    std::optional<std::uint64_t> shots_total;  ///< split evenly over the settings when set
    std::uint64_t seed = 20160101;
    Backend backend = Backend::Sampling;
    std::string output_dir = "dcqd_out";
    int threads = 1;
    bool filter = true;
    std::vector<double> p_grid{0.0, 0.02, 0.05, 0.1, 0.2, 0.3};
    std::string sweep_code = "s1";  ///< "s1" or "s0"

    /// Shots for each of the 31 settings of a full characterization.
    std::uint64_t effective_shots_per_setting(std::size_t settings = 31) const {
        return shots_total ? *shots_total / settings : shots_per_setting;
    }

    void validate() const {
        auto unit = [](double v, const char *name) {
            if (!(v >= 0.0 && v <= 1.0)) {
                std::ostringstream os;
                os << "must lie in [0, 1], got " << v;
                throw ConfigError(name, os.str());
            }
        };
        unit(gamma, "gamma");
        unit(p, "p");
        for (double v : p_grid) unit(v, "p_grid");
        if (backend == Backend::Sampling && effective_shots_per_setting() < 1) {
            throw ConfigError(shots_total ? "shots_total" : "shots", "sampling backend needs at least one shot per setting");
        }
        if (threads < 1) throw ConfigError("threads", "must be at least 1");
        if (sweep_code != "s1" && sweep_code != "s0") throw ConfigError("sweep_code", "expected 's1' or 's0'");
        if (p_grid.empty() && scenario == Scenario::FailureSweep) throw ConfigError("p_grid", "must not be empty");
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["scenario"] = to_string(scenario);
        j["gamma"] = gamma;
        j["p"] = p;
        j["shots"] = shots_per_setting;
        if (shots_total) j["shots_total"] = *shots_total;
        j["seed"] = seed;
        j["backend"] = to_string(backend);
        j["output_dir"] = output_dir;
        j["threads"] = threads;
        j["filter"] = filter;
        j["p_grid"] = p_grid;
        j["sweep_code"] = sweep_code;
        return j;
    }

    /// Overlays keys present in `j`; unknown keys are rejected.
    void merge(const nlohmann::json &j) {
        if (!j.is_object()) throw ConfigError("config", "document must be a JSON object");
        for (const auto &[key, value] : j.items()) {
            try {
                if (key == "scenario") scenario = parse_scenario(value.get<std::string>());
                else if (key == "gamma") gamma = value.get<double>();
                else if (key == "p") p = value.get<double>();
                else if (key == "shots" || key == "shots_per_setting") shots_per_setting = value.get<std::uint64_t>();
                else if (key == "shots_total") shots_total = value.get<std::uint64_t>();
                else if (key == "seed") seed = value.get<std::uint64_t>();
                else if (key == "backend") backend = parse_backend(value.get<std::string>());
                else if (key == "output_dir" || key == "out") output_dir = value.get<std::string>();
                else if (key == "threads") threads = value.get<int>();
                else if (key == "filter") filter = value.get<bool>();
                else if (key == "p_grid") p_grid = value.get<std::vector<double>>();
                else if (key == "sweep_code") sweep_code = value.get<std::string>();
                else throw ConfigError(key, "unknown configuration key");
            } catch (const nlohmann::json::exception &e) {
                throw ConfigError(key, std::string("wrong type: ") + e.what());
            }
        }
    }
};

/// FNV-1a over the canonical (sorted-key) JSON of the effective configuration.
inline std::string config_hash(const ExperimentConfig &cfg) {
    const std::string text = cfg.to_json().dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

/// Code and noise chain of a characterization scenario.
struct ScenarioSetup {
    StabilizerCode code;
    std::vector<QuantumChannel> noise;
};

/// `first` followed by one single-site depolarizing channel per ancilla qubit. Sequential
/// application equals the tensor-product channel and avoids a 4^n_A Kraus expansion.
inline std::vector<QuantumChannel> with_ancilla_depolarizing(const StabilizerCode &code, QuantumChannel first,
                                                             double p) {
    std::vector<QuantumChannel> chain{std::move(first)};
    for (int s : code.ancilla_sites()) chain.push_back(depolarizing(p, s, code.n()));
    return chain;
}

inline ScenarioSetup build_scenario(Scenario s, double gamma, double p) {
    switch (s) {
        case Scenario::Clean: {
            auto code = build_s0();
            return {code, {amplitude_damping(gamma, 1, code.n())}};
        }
        case Scenario::S0Noisy: {
            auto code = build_s0();
            return {code, with_ancilla_depolarizing(code, amplitude_damping(gamma, 1, code.n()), p)};
        }
        case Scenario::S1Noisy: {
            auto code = build_s1();
            return {code, with_ancilla_depolarizing(code, amplitude_damping(gamma, 1, code.n()), p)};
        }
        case Scenario::S1Clean: {
            auto code = build_s1();
            return {code, {amplitude_damping(gamma, 1, code.n())}};
        }
        default: break;
    }
    throw ConfigError("scenario", to_string(s) + " is not a characterization scenario");
}

struct CharacterizationRun {
    ExperimentConfig config;
    CharacterizationResult result;
    ProcessMatrix theory;
    ChiDistance distance;
    FidelityResult fidelity;
};

inline CharacterizationRun run_characterization(const ExperimentConfig &cfg) {
    cfg.validate();
    const auto setup = build_scenario(cfg.scenario, cfg.gamma, cfg.p);
    RunOptions opt;
    opt.backend = cfg.backend;
    opt.shots_per_setting = cfg.effective_shots_per_setting(full_settings(setup.code).size());
    opt.seed = cfg.seed;
    opt.threads = cfg.threads;
    opt.filter_on = cfg.filter;
    auto result = characterize(setup.code, setup.noise, opt);
    auto theory = theoretical_chi_ad(cfg.gamma);
    auto distance = chi_distance_report(result.chi, theory);
    auto fid = channel_fidelity_vs_theory(result.chi, cfg.gamma);
    return {cfg, std::move(result), std::move(theory), std::move(distance), std::move(fid)};
}

inline StabilizerCode sweep_code(const ExperimentConfig &cfg) { return cfg.sweep_code == "s0" ? build_s0() : build_s1(); }

inline std::vector<FailureRateReport> run_failure_sweep(const ExperimentConfig &cfg) {
    cfg.validate();
    if (cfg.shots_per_setting < 1) throw ConfigError("shots", "failure sweep needs at least one shot");
    return failure_rate_experiment(sweep_code(cfg), cfg.p_grid, cfg.shots_per_setting, cfg.seed, cfg.threads);
}

}  // namespace dcqd
