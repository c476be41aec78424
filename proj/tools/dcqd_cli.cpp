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


// Command-line front end: table, characterize, failure-sweep, selftest.
//
// Exit codes: 0 success, 1 a check failed, 2 invalid parameters.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcqd/selftest.hpp"

namespace {

struct Flags {
    std::string config_file;
    double gamma = 0;
    double p = 0;
    std::uint64_t shots = 0;
    std::uint64_t shots_total = 0;
    std::uint64_t seed = 0;
    std::string backend;
    std::string scenario;
    std::string out;
    int threads = 0;
    bool no_filter = false;
    std::vector<double> p_grid;
    std::string sweep_code;
};

void add_common(CLI::App *cmd, Flags &f) {
    cmd->add_option("--config", f.config_file, "JSON configuration file");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--shots", f.shots, "shots per setting (per grid point for failure-sweep)");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--threads", f.threads, "worker threads; results do not depend on it");
}

// Precedence: defaults < config file < explicit flags.
dcqd::ExperimentConfig resolve(const CLI::App &cmd, const Flags &f, dcqd::ExperimentConfig cfg) {
    if (!f.config_file.empty()) {
        std::ifstream in(f.config_file);
        if (!in) throw dcqd::ConfigError("config", "cannot read '" + f.config_file + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception &e) {
            throw dcqd::ConfigError("config", e.what());
        }
        cfg.merge(j);
    }
    auto given = [&](const char *name) { return cmd.get_option_no_throw(name) && cmd.count(name) > 0; };
    if (given("--gamma")) cfg.gamma = f.gamma;
    if (given("--p")) cfg.p = f.p;
    if (given("--shots")) cfg.shots_per_setting = f.shots;
    if (given("--shots-total")) cfg.shots_total = f.shots_total;
    if (given("--seed")) cfg.seed = f.seed;
    if (given("--backend")) cfg.backend = dcqd::parse_backend(f.backend);
    if (given("--scenario")) cfg.scenario = dcqd::parse_scenario(f.scenario);
    if (given("--out")) cfg.output_dir = f.out;
    if (given("--threads")) cfg.threads = f.threads;
    if (given("--no-filter")) cfg.filter = false;
    if (given("--p-grid")) cfg.p_grid = f.p_grid;
    if (given("--code")) cfg.sweep_code = f.sweep_code;
    cfg.validate();
    return cfg;
}

int cmd_table(const dcqd::ExperimentConfig &cfg, bool write) {
    const auto code = dcqd::build_s1();
    for (const auto &row : dcqd::located_error_table(code)) {
        std::cout << row.index << ": " << row.principal.letters() << ", " << row.syndrome.str() << '\n';
    }
    if (write) {
        const auto path = dcqd::write_text(cfg.output_dir, "table.csv", dcqd::located_table_csv(code));
        std::cout << "wrote " << path.string() << '\n';
    }
    const auto bad = dcqd::located_table_mismatches(code);
    for (const auto &b : bad) std::cerr << "golden mismatch, " << b << '\n';
    return bad.empty() ? 0 : 1;
}

int cmd_characterize(const dcqd::ExperimentConfig &cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto run = dcqd::run_characterization(cfg);
    dcqd::write_config_echo(cfg);
    dcqd::write_characterization(run);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "scenario=" << dcqd::to_string(cfg.scenario) << " backend=" << dcqd::to_string(cfg.backend)
              << " gamma=" << cfg.gamma << " p=" << cfg.p << " shots/setting=" << cfg.effective_shots_per_setting()
              << " fidelity=" << std::setprecision(6) << run.fidelity.value
              << " max|dchi|=" << run.distance.max_abs << " accepted=" << run.result.accepted_fraction
              << " (" << std::setprecision(3) << secs << " s)\n";
    for (const auto &w : run.fidelity.warnings) std::cerr << "warning: " << w << '\n';
    return 0;
}

int cmd_failure_sweep(const dcqd::ExperimentConfig &cfg) {
    const auto rows = dcqd::run_failure_sweep(cfg);
    dcqd::write_config_echo(cfg);
    std::ostringstream csv;
    dcqd::write_failure_csv(csv, cfg, rows);
    dcqd::write_text(cfg.output_dir, "failure_rate.csv", csv.str());
    nlohmann::json oracle = dcqd::oracle_json(dcqd::failure_oracle(dcqd::sweep_code(cfg)));
    oracle["_meta"] = dcqd::meta_json(cfg);
    dcqd::write_text(cfg.output_dir, "failure_oracle.json", oracle.dump(2) + "\n");
    std::cout << "p        p_F          analytic     z\n";
    for (const auto &r : rows) {
        const double s = r.sigma();
        std::cout << std::setw(8) << r.p << ' ' << std::setw(12) << r.p_F << ' ' << std::setw(12) << r.analytic_p_F
                  << ' ' << std::setw(8) << (s > 0 ? (r.p_F - r.analytic_p_F) / s : 0.0) << '\n';
    }
    return 0;
}

int cmd_selftest() {
    bool ok = true;
    for (const auto &c : dcqd::run_selftest()) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
        ok = ok && c.passed;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Characterize a two-qubit process with stabilizer-encoded ancillas"};
    app.require_subcommand(1);
    Flags f;

    auto *table = app.add_subcommand("table", "print the located-error syndrome table and check it");
    table->add_option("--out", f.out, "write table.csv into this directory");
    table->add_option("--config", f.config_file, "JSON configuration file");

    auto *charz = app.add_subcommand("characterize", "reconstruct the process matrix of a scenario");
    add_common(charz, f);
    charz->add_option("--scenario", f.scenario, "clean | s0_noisy | s1_noisy | s1_clean");
    charz->add_option("--gamma", f.gamma, "amplitude-damping strength");
    charz->add_option("--p", f.p, "ancilla depolarizing probability");
    charz->add_option("--backend", f.backend, "sampling | exact");
    charz->add_option("--shots-total", f.shots_total, "total shots, split evenly over the settings");
    charz->add_flag("--no-filter", f.no_filter, "accept every syndrome");

    auto *sweep = app.add_subcommand("failure-sweep", "Monte-Carlo filter failure rate against the oracle");
    add_common(sweep, f);
    sweep->add_option("--p-grid", f.p_grid, "depolarizing probabilities")->delimiter(',');
    sweep->add_option("--code", f.sweep_code, "s1 | s0");

    auto *self = app.add_subcommand("selftest", "fast invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (self->parsed()) return cmd_selftest();
        if (table->parsed()) {
            auto cfg = resolve(*table, f, dcqd::ExperimentConfig{});
            return cmd_table(cfg, table->count("--out") > 0 || !f.config_file.empty());
        }
        if (charz->parsed()) {
            dcqd::ExperimentConfig defaults;
            return cmd_characterize(resolve(*charz, f, defaults));
        }
        if (sweep->parsed()) {
            dcqd::ExperimentConfig defaults;
            defaults.scenario = dcqd::Scenario::FailureSweep;
            return cmd_failure_sweep(resolve(*sweep, f, defaults));
        }
    } catch (const dcqd::ConfigError &e) {
        std::cerr << "invalid parameter " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
