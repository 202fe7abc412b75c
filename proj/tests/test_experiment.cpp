// SPDX-License-Identifier: Apache-2.0
//
// bdris-ofdm: wideband BD-RIS modeling and optimization for OFDM links
// Copyright (C) 2026 The bdris-ofdm authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include "bdris/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace bdris;

namespace
{

// Small but complete scenario: 4 elements, 8 subcarriers, 2 trials, 3 power levels.
const char *small_config = R"(format_version: 1
grid: {center_hz: 2.4e9, bandwidth_hz: 300e6, subcarriers: 8}
channel:
  taps: {rt: 4, ri: 4, it: 4}
surface:
  elements: 4
  architectures:
    - {type: group, group_size: 1}
    - {type: group, group_size: 2}
admittance:
  - {mode: continuous}
power_dbm: [30, 40, 50]
noise_dbm: -80
trials: 2
seed: 7
solver:
  continuous: {restarts: 2}
)";

ScenarioConfig parse_ok(const std::string &text)
{
    auto r = validate_config(text);
    INFO((r.errors.empty() ? std::string() : r.errors.front()));
    REQUIRE(r.config.has_value());
    return *r.config;
}

bool mentions(const std::vector<std::string> &list, const std::string &needle)
{
    for (const auto &s : list)
        if (s.find(needle) != std::string::npos)
            return true;
    return false;
}

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("config - defaults and the noise notice")
{
    const auto r = validate_config("format_version: 1\nsurface:\n  architectures:\n    - {type: group, group_size: 3}\n");
    REQUIRE(r.config);
    CHECK(r.config->noise_dbm == -80.0);
    CHECK(mentions(r.notices, "noise_dbm"));
    CHECK(r.config->element_count == 36);
    CHECK(r.config->grid.subcarriers == 64);
    CHECK(r.config->trials == 20);
    CHECK(r.config->power_dbm == std::vector<double>{20, 25, 30, 35, 40, 45, 50});
    REQUIRE(r.config->designs.size() == 1);
    CHECK(r.config->designs[0].mode == AdmittanceMode::Continuous);
}

TEST_CASE("config - group size must divide the element count")
{
    const auto r = validate_config("format_version: 1\nsurface:\n  elements: 36\n  architectures:\n"
                                   "    - {type: group, group_size: 5}\n");
    CHECK_FALSE(r.config);
    CHECK(mentions(r.errors, "does not divide"));
    CHECK(mentions(r.errors, "line 5"));
}

TEST_CASE("config - enumeration ceiling arithmetic")
{
    // b = 3, U = 4: 2^12 codewords per block, well under 2^20.
    const auto ok = validate_config("format_version: 1\nsurface:\n  elements: 36\n  architectures:\n"
                                    "    - {type: group, group_size: 3}\nadmittance:\n"
                                    "  - {mode: discrete, bits: 3, block_size: 4}\n");
    REQUIRE(ok.config);
    CHECK(ok.config->designs[0].mode_label() == "discrete-b3-u4");

    const auto too_many = validate_config("format_version: 1\nsurface:\n  elements: 36\n  architectures:\n"
                                          "    - {type: group, group_size: 3}\nadmittance:\n"
                                          "  - {mode: discrete, bits: 4, block_size: 6}\n");
    CHECK_FALSE(too_many.config);
    CHECK(mentions(too_many.errors, "enumeration ceiling"));
}

TEST_CASE("config - default block size follows the resolution")
{
    const auto c = parse_ok("format_version: 1\nsurface:\n  architectures:\n    - {type: group, group_size: 3}\n"
                            "admittance:\n  - {mode: discrete, bits: 1}\n  - {mode: discrete, bits: 2}\n");
    REQUIRE(c.designs.size() == 2);
    CHECK(c.designs[0].block_size == 4);
    CHECK(c.designs[1].block_size == 2);
}

TEST_CASE("config - every violation is reported")
{
    const auto r = validate_config("format_version: 1\n"
                                   "grid: {subcarriers: -4}\n"
                                   "surface:\n  elements: 36\n  architectures:\n"
                                   "    - {type: ring, group_size: 5}\n"
                                   "trials: 0\n"
                                   "powr_dbm: [1]\n");
    CHECK_FALSE(r.config);
    CHECK(r.errors.size() >= 4);
    CHECK(mentions(r.errors, "grid.subcarriers"));
    CHECK(mentions(r.errors, "unknown architecture"));
    CHECK(mentions(r.errors, "trials"));
    CHECK(mentions(r.errors, "'powr_dbm': unknown key"));
}

TEST_CASE("config - syntax errors carry a position")
{
    const auto r = validate_config("format_version: 1\nsurface: [unclosed\n");
    CHECK_FALSE(r.config);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].rfind("line ", 0) == 0);
    CHECK(mentions(validate_config("surface: {architectures: [{type: group, group_size: 1}]}\n").errors,
                   "format_version"));
    CHECK(mentions(validate_config("format_version: 9\n").errors, "unsupported version"));
}

TEST_CASE("config - explicit model instead of a circuit")
{
    const auto c = parse_ok("format_version: 1\nsurface:\n  architectures:\n    - {type: forest, group_size: 2}\n"
                            "model: {alpha1: 1.94e-10, beta1: -1.92, alpha2: 6.53e-12, beta2: -0.0983,"
                            " b_min: -0.0234, b_max: 0.0601}\n");
    REQUIRE(c.model);
    const auto m = scenario_model(c);
    CHECK(m.alpha1 == 1.94e-10);
    CHECK(m.omega_c == c.grid.center_omega());
    CHECK(c.designs[0].architecture == Architecture::ForestConnected);
}

TEST_CASE("config - shipped scenario files parse")
{
    for (const char *name : {"default.yaml", "discrete.yaml"})
    {
        const auto path = std::filesystem::path(BDRIS_SOURCE_DIR) / "configs" / name;
        std::vector<std::string> notices;
        CHECK_NOTHROW(load_config(path, &notices));
    }
    CHECK_THROWS_AS(load_config("/nonexistent/x.yaml"), ConfigError);
}

TEST_CASE("experiment - row layout, pairing and determinism")
{
    const auto config = parse_ok(small_config);
    const auto table = run_experiment(config);
    // 2 designs x 3 powers x 2 trials
    REQUIRE(table.size() == 12u);
    CHECK(failed_row_count(table) == 0);
    const std::string csv = results_csv(table);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
    CHECK(csv.rfind("architecture,group_size,mode,model,p_dbm,trial,seed,rate,sum_gain,channel_hash,status,error\n",
                    0) == 0);

    // Sorted by design point, then power, then trial.
    CHECK(table[0].group_size == 1);
    CHECK(table[0].power_dbm == 30);
    CHECK(table[1].trial == 1);
    CHECK(table[6].group_size == 2);

    // Paired trials: every design sees the same channel within a trial, different ones across trials.
    std::set<std::uint64_t> hashes[2];
    for (const auto &r : table)
    {
        hashes[r.trial].insert(r.channel_hash);
        CHECK(r.seed == 7u + static_cast<std::uint64_t>(r.trial));
        CHECK(r.rate >= 0.0);
    }
    CHECK(hashes[0].size() == 1);
    CHECK(hashes[1].size() == 1);
    CHECK(*hashes[0].begin() != *hashes[1].begin());

    // Rates grow with power for a fixed design.
    CHECK(table[0].rate < table[2].rate);
    CHECK(table[2].rate < table[4].rate);

    // Same config, different thread count: identical text.
    auto threaded = config;
    threaded.threads = 2;
    CHECK(results_csv(run_experiment(threaded)) == csv);
}

TEST_CASE("experiment - solver failures become failed rows")
{
    auto config = parse_ok(small_config);
    config.designs.resize(1);
    config.designs[0].mode = AdmittanceMode::Discrete;
    config.designs[0].block_size = 3; // does not divide the 4 variables
    const auto table = run_experiment(config);
    CHECK(failed_row_count(table) == static_cast<int>(table.size()));
    const auto csv = results_csv(table);
    CHECK(csv.find(",failed,greedy: block size 3") != std::string::npos);
}

TEST_CASE("experiment - emitted files")
{
    const auto config = parse_ok(small_config);
    const auto table = run_experiment(config);
    const auto dir = std::filesystem::temp_directory_path() / "bdris_emit_test";
    std::filesystem::remove_all(dir);
    emit_results(table, dir / "a", true);
    emit_results(table, dir / "b", false);
    CHECK(slurp(dir / "a" / "results.csv") == slurp(dir / "b" / "results.csv"));
    CHECK(slurp(dir / "a" / "results.csv") == results_csv(table));
    CHECK(std::filesystem::exists(dir / "a" / "rates.svg"));
    CHECK_FALSE(std::filesystem::exists(dir / "b" / "rates.svg"));
    CHECK(slurp(dir / "a" / "rates.svg").find("<polyline") != std::string::npos);
    CHECK(slurp(dir / "a" / "timing.csv").rfind("architecture,group_size,mode,model,p_dbm,trial,wall_time\n", 0) == 0);
    CHECK_THROWS(emit_results({}, dir / "c", false));
    std::filesystem::remove_all(dir);
}
