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

// Command-line front end: run a scenario, print a circuit fit, or run the self-checks.

#include "bdris/experiment.hpp"
#include "bdris/verification.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>

using namespace bdris;

namespace
{

int cmd_run(const std::string &config_path, const std::string &out_dir, const std::optional<std::uint64_t> &seed,
            const std::optional<int> &trials, bool no_plots)
{
    std::vector<std::string> notices;
    ScenarioConfig config = load_config(config_path, &notices);
    for (const auto &n : notices)
        std::cerr << "notice: " << n << "\n";
    if (seed)
        config.base_seed = *seed;
    if (trials)
    {
        if (*trials < 1)
            throw ConfigError("--trials must be positive");
        config.trials = *trials;
    }

    const ResultTable table = run_experiment(config);
    emit_results(table, out_dir, !no_plots);

    // Mean rate per design point and power, on stdout.
    std::map<std::pair<int, int>, std::pair<double, int>> mean;
    for (const auto &r : table)
        if (!r.failed)
        {
            auto &m = mean[{r.design_index, r.power_index}];
            m.first += r.rate;
            m.second += 1;
        }
    std::printf("%-10s %3s %-16s %-8s %7s %10s\n", "arch", "grp", "mode", "model", "P_dBm", "mean_rate");
    for (size_t d = 0; d < config.designs.size(); ++d)
        for (size_t p = 0; p < config.power_dbm.size(); ++p)
        {
            const auto &dp = config.designs[d];
            const auto it = mean.find({static_cast<int>(d), static_cast<int>(p)});
            const double v = it == mean.end() ? 0.0 : it->second.first / it->second.second;
            std::printf("%-10s %3d %-16s %-8s %7.2f %10.4f\n", to_string(dp.architecture).c_str(), dp.group_size,
                        dp.mode_label().c_str(), dp.model_label().c_str(), config.power_dbm[p], v);
        }

    const int failed = failed_row_count(table);
    std::fprintf(stderr, "%zu rows written to %s, %d failed\n", table.size(), out_dir.c_str(), failed);
    return failed == 0 ? 0 : 1;
}

int cmd_fit(const std::string &config_path)
{
    const ScenarioConfig config = load_config(config_path);
    if (config.model)
    {
        const auto &m = *config.model;
        std::printf("model given in config (no fit)\nalpha1 = %.6e\nbeta1  = %.6f\nalpha2 = %.6e\nbeta2  = %.6f\n"
                    "b_min  = %.6e\nb_max  = %.6e\n",
                    m.alpha1, m.beta1, m.alpha2, m.beta2, m.b_min, m.b_max);
        return 0;
    }
    const FitResult fit = fit_linear_model(config.circuit, config.grid.center_omega(), config.fit_band, config.fit);
    const auto &m = fit.model;
    std::printf("method = %s\n", config.fit.method == FitMethod::EndpointSecant ? "secant" : "least-squares");
    std::printf("alpha1 = %.6e  (F1 slope, s)\n", m.alpha1);
    std::printf("beta1  = %.6f\n", m.beta1);
    std::printf("alpha2 = %.6e  (F2 slope, S*s)\n", m.alpha2);
    std::printf("beta2  = %.6f  (S)\n", m.beta2);
    std::printf("b_min  = %.6e S\nb_max  = %.6e S\n", m.b_min, m.b_max);
    std::printf("F1(wc) = %.6f\nF2(wc) = %.6e S\n", m.slope(m.omega_c), m.intercept(m.omega_c));
    std::printf("nmse   = %.4f %%\n", 100.0 * fit.nmse);
    return 0;
}

int cmd_verify(std::uint64_t seed)
{
    bool ok = true;
    for (const auto &r : run_all_checks(seed))
    {
        std::printf("[%s] %-22s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"bdris: wideband BD-RIS modeling and optimization for OFDM links"};
    app.require_subcommand(1);

    std::string run_config, out_dir = "results";
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    bool no_plots = false;
    auto *run = app.add_subcommand("run", "run a scenario and write results.csv / timing.csv / rates.svg");
    run->add_option("config", run_config, "scenario file (YAML)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory")->capture_default_str();
    run->add_option("--seed", seed, "override the base seed");
    run->add_option("--trials", trials, "override the trial count");
    run->add_flag("--no-plots", no_plots, "skip the SVG chart");

    std::string fit_config;
    auto *fit = app.add_subcommand("fit-circuit", "print the fitted linear susceptance model");
    fit->add_option("config", fit_config, "scenario file (YAML)")->required()->check(CLI::ExistingFile);

    std::uint64_t verify_seed = 2024;
    auto *verify = app.add_subcommand("verify", "run the built-in oracle checks");
    verify->add_option("--seed", verify_seed, "seed for the random instances")->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    try
    {
        if (*run)
            return cmd_run(run_config, out_dir, seed, trials, no_plots);
        if (*fit)
            return cmd_fit(fit_config);
        if (*verify)
            return cmd_verify(verify_seed);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
