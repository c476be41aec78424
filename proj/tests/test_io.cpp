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


#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "dcqd/selftest.hpp"

using namespace dcqd;

namespace {

std::string slurp(const std::filesystem::path &p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path fresh_dir(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("dcqd_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Config, DefaultsValidate) {
    ExperimentConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_EQ(cfg.effective_shots_per_setting(), 1000000U);
}

TEST(Config, InvalidFieldsAreNamed) {
    ExperimentConfig cfg;
    cfg.gamma = 1.5;
    try {
        cfg.validate();
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.field, "gamma");
    }
    cfg = ExperimentConfig{};
    cfg.shots_per_setting = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.backend = Backend::Exact;
    EXPECT_NO_THROW(cfg.validate());
    cfg = ExperimentConfig{};
    cfg.p_grid = {0.1, -0.1};
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Config, MergeAndRoundTrip) {
    ExperimentConfig cfg;
    cfg.merge(nlohmann::json::parse(R"({"scenario":"s0_noisy","gamma":0.2,"backend":"exact","shots_total":3100})"));
    EXPECT_EQ(cfg.scenario, Scenario::S0Noisy);
    EXPECT_EQ(cfg.gamma, 0.2);
    EXPECT_EQ(cfg.backend, Backend::Exact);
    EXPECT_EQ(cfg.effective_shots_per_setting(), 100U);
    ExperimentConfig back;
    back.merge(cfg.to_json());
    EXPECT_EQ(back.to_json(), cfg.to_json());
    EXPECT_EQ(config_hash(back), config_hash(cfg));
    back.seed += 1;
    EXPECT_NE(config_hash(back), config_hash(cfg));
}

TEST(Config, MergeErrors) {
    ExperimentConfig cfg;
    try {
        cfg.merge(nlohmann::json::parse(R"({"gama":0.2})"));
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.field, "gama");
    }
    try {
        cfg.merge(nlohmann::json::parse(R"({"gamma":"big"})"));
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.field, "gamma");
    }
    EXPECT_THROW(cfg.merge(nlohmann::json::parse(R"({"scenario":"nope"})")), ConfigError);
    EXPECT_THROW(cfg.merge(nlohmann::json::parse(R"({"backend":"gpu"})")), ConfigError);
}

TEST(Scenarios, NoiseChains) {
    const auto clean = build_scenario(Scenario::Clean, 0.4, 0.1);
    EXPECT_EQ(clean.code.n(), 4);
    EXPECT_EQ(clean.noise.size(), 1U);
    const auto s1 = build_scenario(Scenario::S1Noisy, 0.4, 0.1);
    EXPECT_EQ(s1.code.n(), 6);
    EXPECT_EQ(s1.noise.size(), 5U);
    const auto s0 = build_scenario(Scenario::S0Noisy, 0.4, 0.1);
    EXPECT_EQ(s0.noise.size(), 3U);
    EXPECT_EQ(s0.noise[1].support(), std::vector<int>{3});
    EXPECT_THROW(build_scenario(Scenario::Table, 0.4, 0.1), ConfigError);
}

TEST(Io, LocatedTableGolden) {
    EXPECT_EQ(located_table_csv(build_s1()), kLocatedTableGolden);
    EXPECT_TRUE(located_table_mismatches(build_s1()).empty());
    std::ifstream golden(DCQD_GOLDEN_DIR "/located_table.csv");
    ASSERT_TRUE(golden.good());
    std::stringstream ss;
    ss << golden.rdbuf();
    EXPECT_EQ(ss.str(), kLocatedTableGolden);
}

TEST(Io, CorruptedGeneratorOrderFailsGolden) {
    const auto s1 = build_s1();
    auto gens = s1.generators();
    std::swap(gens[2], gens[3]);
    const StabilizerCode swapped("swapped", gens, s1.principal_sites(), s1.ancilla_sites(), 2);
    EXPECT_FALSE(located_table_mismatches(swapped).empty());
    EXPECT_FALSE(check_located_table(swapped).passed);
}

TEST(Io, CodeJson) {
    const auto j = to_json(build_s1());
    EXPECT_EQ(j["generators"][0], "IIXXXX");
    EXPECT_EQ(j["filter_prefix"], 2);
    EXPECT_EQ(j["ancilla_sites"].size(), 4U);
}

TEST(Io, CharacterizationFilesAreReproducible) {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::Clean;
    cfg.shots_per_setting = 2000;
    cfg.seed = 17;
    const auto dir_a = fresh_dir("a"), dir_b = fresh_dir("b");
    cfg.output_dir = dir_a.string();
    write_characterization(run_characterization(cfg));
    cfg.output_dir = dir_b.string();
    write_characterization(run_characterization(cfg));
    for (const char *f : {"chi_real.csv", "chi_imag.csv", "chi_diff_vs_theory.csv", "fidelity.json", "histograms.json"}) {
        const auto a = slurp(dir_a / f);
        ASSERT_FALSE(a.empty()) << f;
        // Output directory is part of the config, so compare bodies past the metadata.
        if (std::string(f).ends_with(".csv")) {
            EXPECT_EQ(a.substr(a.find('\n')), slurp(dir_b / f).substr(a.find('\n'))) << f;
            EXPECT_EQ(a.rfind("# config_hash=", 0), 0U);
        }
    }
    const auto fid = nlohmann::json::parse(slurp(dir_a / "fidelity.json"));
    EXPECT_TRUE(fid.contains("_meta"));
    EXPECT_GT(fid["fidelity"].get<double>(), 0.9);
    const auto hist = nlohmann::json::parse(slurp(dir_a / "histograms.json"));
    EXPECT_EQ(hist["settings"].size(), 31U);
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST(Io, ExactCleanDiffIsTiny) {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::Clean;
    cfg.backend = Backend::Exact;
    EXPECT_LT(run_characterization(cfg).distance.max_abs, 1e-10);
}

TEST(Io, PreciseCsvRoundTrips) {
    std::ostringstream os;
    precise(os) << 0.1 + 0.2;
    EXPECT_EQ(std::stod(os.str()), 0.1 + 0.2);
}

TEST(Io, FailureCsvColumns) {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::FailureSweep;
    cfg.shots_per_setting = 1000;
    cfg.p_grid = {0.0, 0.1};
    std::ostringstream os;
    write_failure_csv(os, cfg, run_failure_sweep(cfg));
    std::istringstream in(os.str());
    std::string meta, header, row0;
    std::getline(in, meta);
    std::getline(in, header);
    std::getline(in, row0);
    EXPECT_EQ(meta.rfind("# config_hash=", 0), 0U);
    EXPECT_EQ(header.rfind("p,p_identity_syndrome,P_identity,delta_p1,p_00,p_F,analytic_p_F", 0), 0U);
    EXPECT_EQ(row0.rfind("0,1,1,0,0,0,0,", 0), 0U);
}

TEST(Selftest, AllChecksPass) {
    for (const auto &c : run_selftest()) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}
