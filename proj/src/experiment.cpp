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

#include "bdris/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <system_error>
#include <thread>

namespace bdris
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<ResultRow> run_trial(const ScenarioConfig &config, const LinearSusceptanceModel &model, int trial)
{
    const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(trial);
    const TapChannels taps = generate_taps(seed, config.element_count, config.taps, config.pathloss);
    const std::uint64_t hash = channel_digest(taps);
    const AdmittanceChannels channels = admittance_channels(freq_channels(taps, config.grid.subcarriers), config.y0);
    const double noise = dbm_to_watts(config.noise_dbm);

    std::vector<ResultRow> rows;
    for (size_t d = 0; d < config.designs.size(); ++d)
    {
        const DesignPoint &point = config.designs[d];
        ResultRow base;
        base.architecture = point.architecture;
        base.group_size = point.group_size;
        base.mode = point.mode_label();
        base.model = point.model_label();
        base.trial = trial;
        base.seed = seed;
        base.channel_hash = hash;
        base.design_index = static_cast<int>(d);

        const auto start = Clock::now();
        std::optional<SurfaceDesign> design;
        std::string error;
        try
        {
            const RisTopology topology{point.architecture, config.element_count, point.group_size};
            const SumGainProblem problem = SumGainProblem::make(channels, topology, model, config.grid);
            DesignSettings settings;
            settings.mode = point.mode;
            settings.frequency_independent = point.frequency_independent;
            settings.continuous = config.continuous;
            settings.greedy = GreedyConfig{point.bits, point.block_size, config.greedy_max_sweeps,
                                           config.enumeration_ceiling};
            design = design_surface(problem, settings, seed);
        }
        catch (const std::exception &e)
        {
            error = e.what();
        }
        const double design_time = seconds_since(start);

        for (size_t p = 0; p < config.power_dbm.size(); ++p)
        {
            ResultRow row = base;
            row.power_dbm = config.power_dbm[p];
            row.power_index = static_cast<int>(p);
            const auto stage2 = Clock::now();
            if (design)
            {
                try
                {
                    const RunResult run = allocate_power(*design, dbm_to_watts(row.power_dbm), noise);
                    row.rate = run.rate;
                    row.sum_gain = run.sum_gain;
                    if (!std::isfinite(row.rate) || row.rate < 0.0)
                        throw SolverError("non-finite rate");
                }
                catch (const std::exception &e)
                {
                    row.failed = true;
                    row.error = e.what();
                }
            }
            else
            {
                row.failed = true;
                row.error = error;
            }
            row.wall_time = design_time + seconds_since(stage2);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

// Shortest round-trip text, fixed '.' radix independent of the locale.
std::string number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hex64(std::uint64_t v)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string sanitize(std::string s)
{
    for (char &ch : s)
        if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"')
            ch = ';';
    return s;
}

void write_file(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
    out << text;
    out.flush();
    if (!out)
        throw std::system_error(errno, std::generic_category(), "cannot write " + path.string());
}

std::string design_key(const ResultRow &r)
{
    return to_string(r.architecture) + "-" + std::to_string(r.group_size) + " " + r.mode +
           (r.model == "flat" ? " (flat)" : "");
}

} // namespace

ResultTable run_experiment(const ScenarioConfig &config)
{
    if (config.designs.empty())
        throw ConfigError("run_experiment: no design points");
    const LinearSusceptanceModel model = scenario_model(config);

    std::vector<std::vector<ResultRow>> per_trial(static_cast<size_t>(config.trials));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int t = next++; t < config.trials; t = next++)
            per_trial[static_cast<size_t>(t)] = run_trial(config, model, t);
    };
    int threads = config.threads > 0 ? config.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, config.trials);
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto &th : pool)
        th.join();

    ResultTable table;
    for (auto &rows : per_trial)
        for (auto &row : rows)
            table.push_back(std::move(row));
    std::sort(table.begin(), table.end(), [](const ResultRow &a, const ResultRow &b) {
        return std::tie(a.design_index, a.power_index, a.trial) < std::tie(b.design_index, b.power_index, b.trial);
    });
    return table;
}

int failed_row_count(const ResultTable &table)
{
    return static_cast<int>(std::count_if(table.begin(), table.end(), [](const ResultRow &r) { return r.failed; }));
}

std::string results_csv(const ResultTable &table)
{
    std::string out = "architecture,group_size,mode,model,p_dbm,trial,seed,rate,sum_gain,channel_hash,status,error\n";
    for (const auto &r : table)
    {
        out += to_string(r.architecture) + ',' + std::to_string(r.group_size) + ',' + r.mode + ',' + r.model + ',' +
               number(r.power_dbm) + ',' + std::to_string(r.trial) + ',' + std::to_string(r.seed) + ',' +
               (r.failed ? std::string() : number(r.rate)) + ',' + (r.failed ? std::string() : number(r.sum_gain)) +
               ',' + hex64(r.channel_hash) + ',' + (r.failed ? "failed" : "ok") + ',' + sanitize(r.error) + '\n';
    }
    return out;
}

std::string timing_csv(const ResultTable &table)
{
    std::string out = "architecture,group_size,mode,model,p_dbm,trial,wall_time\n";
    for (const auto &r : table)
        out += to_string(r.architecture) + ',' + std::to_string(r.group_size) + ',' + r.mode + ',' + r.model + ',' +
               number(r.power_dbm) + ',' + std::to_string(r.trial) + ',' + number(r.wall_time) + '\n';
    return out;
}

std::string rate_chart_svg(const ResultTable &table)
{
    // Mean rate per (design, power), in design order.
    std::vector<std::string> names;
    std::map<std::string, std::map<double, std::pair<double, int>>> series;
    for (const auto &r : table)
    {
        const auto key = design_key(r);
        if (!series.count(key))
            names.push_back(key);
        auto &acc = series[key][r.power_dbm];
        if (!r.failed)
        {
            acc.first += r.rate;
            acc.second += 1;
        }
    }
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto &[name, pts] : series)
        for (const auto &[p, acc] : pts)
        {
            x_lo = std::min(x_lo, p);
            x_hi = std::max(x_hi, p);
            if (acc.second > 0)
            {
                y_lo = std::min(y_lo, acc.first / acc.second);
                y_hi = std::max(y_hi, acc.first / acc.second);
            }
        }
    if (x_hi <= x_lo)
        x_hi = x_lo + 1.0;
    if (!(y_hi > y_lo))
    {
        y_lo = y_lo > 1e299 ? 0.0 : y_lo - 0.5;
        y_hi = y_lo + 1.0;
    }
    const double w = 720, h = 460, left = 70, right = 250, top = 30, bottom = 60;
    auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * (w - left - right); };
    auto sy = [&](double y) { return h - bottom - (y - y_lo) / (y_hi - y_lo) * (h - top - bottom); };
    static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\"" << h - bottom
      << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom
      << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k)
    {
        const double xv = x_lo + (x_hi - x_lo) * k / 4, yv = y_lo + (y_hi - y_lo) * k / 4;
        char lx[32], ly[32];
        std::snprintf(lx, sizeof lx, "%.4g", xv);
        std::snprintf(ly, sizeof ly, "%.3f", yv);
        s << "<text x=\"" << sx(xv) << "\" y=\"" << h - bottom + 18 << "\" text-anchor=\"middle\">" << lx
          << "</text>\n";
        s << "<text x=\"" << left - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << ly << "</text>\n";
    }
    s << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - 15
      << "\" text-anchor=\"middle\">transmit power (dBm)</text>\n";
    s << "<text transform=\"translate(18," << (top + h - bottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">average rate (bit/s/Hz)</text>\n";
    for (size_t i = 0; i < names.size(); ++i)
    {
        const char *color = palette[i % 10];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto &[p, acc] : series[names[i]])
            if (acc.second > 0)
                s << sx(p) << ',' << sy(acc.first / acc.second) << ' ';
        s << "\"/>\n";
        const double ly = top + 16.0 * static_cast<double>(i);
        s << "<line x1=\"" << w - right + 15 << "\" y1=\"" << ly << "\" x2=\"" << w - right + 35 << "\" y2=\"" << ly
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << w - right + 40 << "\" y=\"" << ly + 4 << "\">" << names[i] << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

void emit_results(const ResultTable &table, const std::filesystem::path &directory, bool plots)
{
    if (table.empty())
        throw Error("emit_results: result table is empty");
    std::filesystem::create_directories(directory);
    write_file(directory / "results.csv", results_csv(table));
    write_file(directory / "timing.csv", timing_csv(table));
    if (plots)
        write_file(directory / "rates.svg", rate_chart_svg(table));
}

} // namespace bdris
