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

#pragma once

#include "bdris/circuit_model.hpp"
#include "bdris/frequency_grid.hpp"
#include "bdris/ofdm_channel.hpp"
#include "bdris/optimizer.hpp"
#include "bdris/ris_network.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bdris
{

inline constexpr int config_format_version = 1;

/// One solver configuration evaluated at every trial and power level.
struct DesignPoint
{
    Architecture architecture = Architecture::GroupConnected;
    int group_size = 1;
    AdmittanceMode mode = AdmittanceMode::Continuous;
    int bits = 1;       // discrete / direct-quantized only
    int block_size = 4; // discrete only
    bool frequency_independent = false;

    /// "continuous", "discrete-b1-u4", "quantized-b1"
    std::string mode_label() const;
    /// "wideband" or "flat"
    std::string model_label() const;
};

struct ScenarioConfig
{
    FrequencyGrid grid;
    PathlossModel pathloss;
    TapCounts taps;
    int element_count = 36;
    double y0 = default_characteristic_admittance;

    std::vector<DesignPoint> designs;
    std::vector<double> power_dbm{20, 25, 30, 35, 40, 45, 50};
    double noise_dbm = -80.0;
    int trials = 20;
    std::uint64_t base_seed = 1;
    int threads = 0; ///< 0: hardware concurrency

    ContinuousSolverConfig continuous;
    int greedy_max_sweeps = 100;
    std::uint64_t enumeration_ceiling = 1ULL << 20;

    VaractorCircuit circuit;
    FrequencyBand fit_band;
    FitOptions fit;
    std::optional<LinearSusceptanceModel> model; ///< given directly instead of fitted
};

struct ConfigParseResult
{
    std::optional<ScenarioConfig> config;
    std::vector<std::string> errors;  ///< every violation found, each with line / field context
    std::vector<std::string> notices; ///< defaults applied that the user should know about
};

/// Parses and checks a scenario file (YAML). Never throws on bad input; collects all problems.
ConfigParseResult validate_config(const std::string &text);

/// Reads a file and runs validate_config; throws ConfigError listing every violation.
ScenarioConfig load_config(const std::filesystem::path &path, std::vector<std::string> *notices = nullptr);

/// The susceptance model the scenario uses (fitted from the circuit unless given).
LinearSusceptanceModel scenario_model(const ScenarioConfig &config);

struct ResultRow
{
    Architecture architecture = Architecture::GroupConnected;
    int group_size = 1;
    std::string mode;
    std::string model;
    double power_dbm = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double rate = 0.0;
    double sum_gain = 0.0;
    std::uint64_t channel_hash = 0;
    bool failed = false;
    std::string error;
    double wall_time = 0.0; ///< seconds spent on the design (Stage 1 + Stage 2); not written to results.csv
    int design_index = 0;
    int power_index = 0;
};

using ResultTable = std::vector<ResultRow>;

/// Runs every design point at every trial and power level. Rows are sorted by
/// (design point, power, trial) regardless of thread scheduling.
ResultTable run_experiment(const ScenarioConfig &config);

int failed_row_count(const ResultTable &table);

/// Deterministic CSV text of the table (no timing column).
std::string results_csv(const ResultTable &table);
std::string timing_csv(const ResultTable &table);
/// Line chart of the mean rate versus power per design point.
std::string rate_chart_svg(const ResultTable &table);

/// Writes results.csv, timing.csv and (optionally) rates.svg into `directory`.
void emit_results(const ResultTable &table, const std::filesystem::path &directory, bool plots);

} // namespace bdris
