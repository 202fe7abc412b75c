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

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace bdris
{

std::string DesignPoint::mode_label() const
{
    switch (mode)
    {
    case AdmittanceMode::Continuous:
        return "continuous";
    case AdmittanceMode::Discrete:
        return "discrete-b" + std::to_string(bits) + "-u" + std::to_string(block_size);
    case AdmittanceMode::DirectQuantized:
        return "quantized-b" + std::to_string(bits);
    }
    return "unknown";
}

std::string DesignPoint::model_label() const
{
    return frequency_independent ? "flat" : "wideband";
}

namespace
{

// Collects violations instead of stopping at the first one.
class Reader
{
  public:
    std::vector<std::string> errors;
    std::vector<std::string> notices;

    static std::string line_of(const YAML::Node &node)
    {
        if (!node.IsDefined())
            return "line ?";
        const auto mark = node.Mark();
        return mark.line >= 0 ? "line " + std::to_string(mark.line + 1) : "line ?";
    }

    void error(const YAML::Node &node, const std::string &field, const std::string &what)
    {
        errors.push_back(line_of(node) + ", field '" + field + "': " + what);
    }

    // Flags keys that this format does not know (usually typos).
    void check_keys(const YAML::Node &map, const std::string &path, std::initializer_list<const char *> allowed)
    {
        if (!map.IsMap())
            return;
        const std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto &kv : map)
        {
            const auto key = kv.first.as<std::string>();
            if (!ok.count(key))
                error(kv.first, join(path, key), "unknown key");
        }
    }

    bool section(const YAML::Node &parent, const char *key, const std::string &path, YAML::Node &out)
    {
        const YAML::Node node = parent[key];
        if (!node)
            return false;
        if (!node.IsMap())
        {
            error(node, join(path, key), "expected a mapping");
            return false;
        }
        out.reset(node);
        return true;
    }

    template <class T>
    bool read(const YAML::Node &parent, const char *key, const std::string &path, T &value)
    {
        const YAML::Node node = parent[key];
        if (!node)
            return false;
        try
        {
            value = node.as<T>();
            return true;
        }
        catch (const YAML::Exception &)
        {
            error(node, join(path, key), "cannot read '" + scalar(node) + "' as " + type_name<T>());
            return false;
        }
    }

    // Reads a number that must be finite and strictly positive.
    void positive(const YAML::Node &parent, const char *key, const std::string &path, double &value)
    {
        if (read(parent, key, path, value) && !(std::isfinite(value) && value > 0.0))
            error(parent[key], join(path, key), "must be positive");
    }

    void positive(const YAML::Node &parent, const char *key, const std::string &path, int &value)
    {
        if (read(parent, key, path, value) && value < 1)
            error(parent[key], join(path, key), "must be positive");
    }

    static std::string join(const std::string &path, const std::string &key)
    {
        return path.empty() ? key : path + "." + key;
    }

  private:
    static std::string scalar(const YAML::Node &node)
    {
        return node.IsScalar() ? node.Scalar() : std::string("<non-scalar>");
    }

    template <class T>
    static const char *type_name()
    {
        if constexpr (std::is_same_v<T, double>)
            return "a number";
        else if constexpr (std::is_same_v<T, bool>)
            return "a boolean";
        else if constexpr (std::is_integral_v<T>)
            return "an integer";
        else
            return "text";
    }
};

void read_grid(Reader &r, const YAML::Node &root, ScenarioConfig &c)
{
    YAML::Node n;
    if (!r.section(root, "grid", "", n))
        return;
    r.check_keys(n, "grid", {"center_hz", "bandwidth_hz", "subcarriers"});
    r.positive(n, "center_hz", "grid", c.grid.center_hz);
    r.positive(n, "bandwidth_hz", "grid", c.grid.bandwidth_hz);
    r.positive(n, "subcarriers", "grid", c.grid.subcarriers);
    if (c.grid.bandwidth_hz >= 2.0 * c.grid.center_hz)
        r.error(n, "grid.bandwidth_hz", "band would reach non-positive frequencies");
}

void read_channel(Reader &r, const YAML::Node &root, ScenarioConfig &c)
{
    YAML::Node n;
    if (!r.section(root, "channel", "", n))
        return;
    r.check_keys(n, "channel", {"taps", "pathloss"});
    YAML::Node taps, pl;
    if (r.section(n, "taps", "channel", taps))
    {
        r.check_keys(taps, "channel.taps", {"rt", "ri", "it"});
        r.positive(taps, "rt", "channel.taps", c.taps.rt);
        r.positive(taps, "ri", "channel.taps", c.taps.ri);
        r.positive(taps, "it", "channel.taps", c.taps.it);
    }
    if (r.section(n, "pathloss", "channel", pl))
    {
        const std::string p = "channel.pathloss";
        r.check_keys(pl, p, {"zeta0_db", "d_rt", "d_ri", "d_it", "eps_rt", "eps_ri", "eps_it"});
        r.read(pl, "zeta0_db", p, c.pathloss.zeta0_db);
        r.positive(pl, "d_rt", p, c.pathloss.d_rt);
        r.positive(pl, "d_ri", p, c.pathloss.d_ri);
        r.positive(pl, "d_it", p, c.pathloss.d_it);
        r.positive(pl, "eps_rt", p, c.pathloss.eps_rt);
        r.positive(pl, "eps_ri", p, c.pathloss.eps_ri);
        r.positive(pl, "eps_it", p, c.pathloss.eps_it);
    }
    for (int d : {c.taps.rt, c.taps.ri, c.taps.it})
        if (d > c.grid.subcarriers)
        {
            r.error(n, "channel.taps", "tap count " + std::to_string(d) + " exceeds the subcarrier count");
            break;
        }
}

struct AdmittanceEntry
{
    AdmittanceMode mode = AdmittanceMode::Continuous;
    int bits = 1;
    int block_size = 0; // 0: default for the bit count
    YAML::Node node;
};

std::vector<AdmittanceEntry> read_admittance(Reader &r, const YAML::Node &root)
{
    std::vector<AdmittanceEntry> out;
    const YAML::Node list = root["admittance"];
    if (!list)
        return {AdmittanceEntry{}};
    if (!list.IsSequence() || list.size() == 0)
    {
        r.error(list, "admittance", "expected a non-empty list of {mode: ...} entries");
        return {};
    }
    for (size_t i = 0; i < list.size(); ++i)
    {
        const YAML::Node e = list[i];
        const std::string path = "admittance[" + std::to_string(i) + "]";
        if (!e.IsMap())
        {
            r.error(e, path, "expected a mapping");
            continue;
        }
        r.check_keys(e, path, {"mode", "bits", "block_size"});
        AdmittanceEntry entry;
        entry.node = e;
        std::string mode = "continuous";
        r.read(e, "mode", path, mode);
        if (mode == "continuous")
            entry.mode = AdmittanceMode::Continuous;
        else if (mode == "discrete")
            entry.mode = AdmittanceMode::Discrete;
        else if (mode == "quantized")
            entry.mode = AdmittanceMode::DirectQuantized;
        else
            r.error(e["mode"], path + ".mode", "expected continuous, discrete or quantized, got '" + mode + "'");
        if (entry.mode != AdmittanceMode::Continuous)
        {
            if (!e["bits"])
                r.error(e, path + ".bits", "required for " + mode + " mode");
            else if (r.read(e, "bits", path, entry.bits) && (entry.bits < 1 || entry.bits > 20))
                r.error(e["bits"], path + ".bits", "must be in [1, 20]");
        }
        if (e["block_size"])
        {
            if (entry.mode != AdmittanceMode::Discrete)
                r.error(e["block_size"], path + ".block_size", "only meaningful for discrete mode");
            else
                r.positive(e, "block_size", path, entry.block_size);
        }
        out.push_back(entry);
    }
    return out;
}

struct ArchitectureEntry
{
    Architecture architecture = Architecture::GroupConnected;
    int group_size = 1;
    YAML::Node node;
};

std::vector<ArchitectureEntry> read_surface(Reader &r, const YAML::Node &root, ScenarioConfig &c)
{
    std::vector<ArchitectureEntry> out;
    YAML::Node n;
    if (!r.section(root, "surface", "", n))
    {
        r.error(root, "surface", "required section missing");
        return out;
    }
    r.check_keys(n, "surface", {"elements", "y0", "architectures"});
    r.positive(n, "elements", "surface", c.element_count);
    r.positive(n, "y0", "surface", c.y0);
    const YAML::Node list = n["architectures"];
    if (!list || !list.IsSequence() || list.size() == 0)
    {
        r.error(list ? list : n, "surface.architectures", "expected a non-empty list of {type, group_size}");
        return out;
    }
    for (size_t i = 0; i < list.size(); ++i)
    {
        const YAML::Node e = list[i];
        const std::string path = "surface.architectures[" + std::to_string(i) + "]";
        if (!e.IsMap())
        {
            r.error(e, path, "expected a mapping");
            continue;
        }
        r.check_keys(e, path, {"type", "group_size"});
        ArchitectureEntry entry;
        entry.node = e;
        std::string type = "group";
        r.read(e, "type", path, type);
        try
        {
            entry.architecture = architecture_from_string(type);
        }
        catch (const ConfigError &err)
        {
            r.error(e["type"], path + ".type", err.what());
        }
        if (!e["group_size"])
            r.error(e, path + ".group_size", "required");
        else
            r.positive(e, "group_size", path, entry.group_size);
        if (entry.group_size >= 1 && c.element_count >= 1 && c.element_count % entry.group_size != 0)
            r.error(e["group_size"], path + ".group_size",
                    "group size " + std::to_string(entry.group_size) + " does not divide M = " +
                        std::to_string(c.element_count));
        out.push_back(entry);
    }
    return out;
}

void read_solver(Reader &r, const YAML::Node &root, ScenarioConfig &c)
{
    YAML::Node n;
    if (!r.section(root, "solver", "", n))
        return;
    r.check_keys(n, "solver", {"continuous", "greedy"});
    YAML::Node cont, greedy;
    if (r.section(n, "continuous", "solver", cont))
    {
        const std::string p = "solver.continuous";
        r.check_keys(cont, p,
                     {"max_iterations", "convergence_tol", "gradient_tol", "restarts", "gradient", "fd_step_fraction"});
        r.positive(cont, "max_iterations", p, c.continuous.max_iterations);
        r.positive(cont, "convergence_tol", p, c.continuous.convergence_tol);
        if (r.read(cont, "gradient_tol", p, c.continuous.gradient_tol) && !(c.continuous.gradient_tol >= 0.0))
            r.error(cont["gradient_tol"], p + ".gradient_tol", "must be non-negative");
        r.positive(cont, "restarts", p, c.continuous.restarts);
        std::string grad;
        if (r.read(cont, "gradient", p, grad))
        {
            if (grad == "analytic")
                c.continuous.gradient = GradientMode::Analytic;
            else if (grad == "central-difference")
                c.continuous.gradient = GradientMode::CentralDifference;
            else
                r.error(cont["gradient"], p + ".gradient", "expected analytic or central-difference");
        }
        if (r.read(cont, "fd_step_fraction", p, c.continuous.fd_step_fraction) &&
            !(c.continuous.fd_step_fraction > 0.0 && c.continuous.fd_step_fraction < 0.1))
            r.error(cont["fd_step_fraction"], p + ".fd_step_fraction", "must be in (0, 0.1)");
    }
    if (r.section(n, "greedy", "solver", greedy))
    {
        r.check_keys(greedy, "solver.greedy", {"max_sweeps", "enumeration_ceiling"});
        r.positive(greedy, "max_sweeps", "solver.greedy", c.greedy_max_sweeps);
        if (r.read(greedy, "enumeration_ceiling", "solver.greedy", c.enumeration_ceiling) && c.enumeration_ceiling < 2)
            r.error(greedy["enumeration_ceiling"], "solver.greedy.enumeration_ceiling", "must be at least 2");
    }
}

void read_circuit(Reader &r, const YAML::Node &root, ScenarioConfig &c)
{
    YAML::Node n, m;
    const bool has_circuit = r.section(root, "circuit", "", n);
    const bool has_model = r.section(root, "model", "", m);
    if (has_circuit && has_model)
        r.error(m, "model", "give either circuit or model, not both");
    if (has_circuit)
    {
        r.check_keys(n, "circuit", {"l1", "l2", "c_min", "c_max", "fit"});
        r.positive(n, "l1", "circuit", c.circuit.l1);
        r.positive(n, "l2", "circuit", c.circuit.l2);
        r.positive(n, "c_min", "circuit", c.circuit.c_min);
        r.positive(n, "c_max", "circuit", c.circuit.c_max);
        if (c.circuit.c_min >= c.circuit.c_max)
            r.error(n, "circuit.c_min", "must be below c_max");
        YAML::Node fit;
        if (r.section(n, "fit", "circuit", fit))
        {
            const std::string p = "circuit.fit";
            r.check_keys(fit, p, {"method", "f_lo", "f_hi", "samples", "bc_grid_points", "nmse_ceiling"});
            std::string method;
            if (r.read(fit, "method", p, method))
            {
                if (method == "secant")
                    c.fit.method = FitMethod::EndpointSecant;
                else if (method == "least-squares")
                    c.fit.method = FitMethod::LeastSquares;
                else
                    r.error(fit["method"], p + ".method", "expected secant or least-squares");
            }
            r.positive(fit, "f_lo", p, c.fit_band.f_lo);
            r.positive(fit, "f_hi", p, c.fit_band.f_hi);
            r.positive(fit, "samples", p, c.fit_band.sample_count);
            r.positive(fit, "bc_grid_points", p, c.fit.bc_grid_points);
            r.positive(fit, "nmse_ceiling", p, c.fit.nmse_ceiling);
            if (c.fit_band.f_lo > c.fit_band.f_hi)
                r.error(fit, p + ".f_lo", "must not exceed f_hi");
        }
    }
    if (has_model)
    {
        r.check_keys(m, "model", {"alpha1", "beta1", "alpha2", "beta2", "b_min", "b_max"});
        LinearSusceptanceModel model;
        bool complete = true;
        for (const char *key : {"alpha1", "beta1", "alpha2", "beta2", "b_min", "b_max"})
            if (!m[key])
            {
                r.error(m, std::string("model.") + key, "required");
                complete = false;
            }
        r.read(m, "alpha1", "model", model.alpha1);
        r.read(m, "beta1", "model", model.beta1);
        r.read(m, "alpha2", "model", model.alpha2);
        r.read(m, "beta2", "model", model.beta2);
        r.read(m, "b_min", "model", model.b_min);
        r.read(m, "b_max", "model", model.b_max);
        if (complete && !(model.b_min < model.b_max))
            r.error(m, "model.b_min", "must be below b_max");
        model.omega_c = c.grid.center_omega();
        if (complete && model.b_min < model.b_max)
        {
            try
            {
                model.validate();
            }
            catch (const Error &e)
            {
                r.error(m, "model", e.what());
            }
        }
        c.model = model;
    }
}

} // namespace

ConfigParseResult validate_config(const std::string &text)
{
    ConfigParseResult result;
    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (const YAML::ParserException &e)
    {
        result.errors.push_back("line " + std::to_string(e.mark.line + 1) + ", column " +
                                std::to_string(e.mark.column + 1) + ": " + e.msg);
        return result;
    }
    if (!root.IsMap())
    {
        result.errors.push_back("line 1: the scenario must be a YAML mapping");
        return result;
    }

    Reader r;
    ScenarioConfig c;
    r.check_keys(root, "",
                 {"format_version", "grid", "channel", "surface", "admittance", "benchmarks", "power_dbm", "noise_dbm",
                  "trials", "seed", "threads", "solver", "circuit", "model"});
    int version = 0;
    if (!root["format_version"])
        r.error(root, "format_version", "required (this build reads version " +
                                            std::to_string(config_format_version) + ")");
    else if (r.read(root, "format_version", "", version) && version != config_format_version)
        r.error(root["format_version"], "format_version",
                "unsupported version " + std::to_string(version) + " (expected " +
                    std::to_string(config_format_version) + ")");

    read_grid(r, root, c);
    read_channel(r, root, c);
    const auto archs = read_surface(r, root, c);
    const auto modes = read_admittance(r, root);
    read_solver(r, root, c);
    read_circuit(r, root, c);

    bool flat_benchmark = false;
    YAML::Node bench;
    if (r.section(root, "benchmarks", "", bench))
    {
        r.check_keys(bench, "benchmarks", {"frequency_independent"});
        r.read(bench, "frequency_independent", "benchmarks", flat_benchmark);
    }

    if (root["power_dbm"])
    {
        const YAML::Node p = root["power_dbm"];
        if (!p.IsSequence() || p.size() == 0)
            r.error(p, "power_dbm", "expected a non-empty list of dBm values");
        else
        {
            c.power_dbm.clear();
            for (size_t i = 0; i < p.size(); ++i)
            {
                double v = 0.0;
                try
                {
                    v = p[i].as<double>();
                }
                catch (const YAML::Exception &)
                {
                    r.error(p[i], "power_dbm[" + std::to_string(i) + "]", "not a number");
                    continue;
                }
                if (!std::isfinite(v))
                    r.error(p[i], "power_dbm[" + std::to_string(i) + "]", "must be finite");
                c.power_dbm.push_back(v);
            }
        }
    }
    if (!root["noise_dbm"])
        r.notices.push_back("noise_dbm not given; using the default of -80 dBm");
    else if (r.read(root, "noise_dbm", "", c.noise_dbm) && !std::isfinite(c.noise_dbm))
        r.error(root["noise_dbm"], "noise_dbm", "must be finite");
    r.positive(root, "trials", "", c.trials);
    r.read(root, "seed", "", c.base_seed);
    if (r.read(root, "threads", "", c.threads) && c.threads < 0)
        r.error(root["threads"], "threads", "must be non-negative");

    // Design points: architectures x admittance modes, each optionally with its flat benchmark.
    for (const auto &a : archs)
    {
        RisTopology topo{a.architecture, c.element_count, a.group_size};
        const bool divisible = a.group_size >= 1 && c.element_count % a.group_size == 0;
        for (const auto &m : modes)
        {
            DesignPoint d;
            d.architecture = a.architecture;
            d.group_size = a.group_size;
            d.mode = m.mode;
            d.bits = m.bits;
            d.block_size = m.block_size > 0 ? m.block_size : (m.bits == 1 ? 4 : m.bits == 2 ? 2 : 1);
            if (m.mode == AdmittanceMode::Discrete && divisible && d.bits >= 1 && d.bits <= 20)
            {
                GreedyConfig g{d.bits, d.block_size, c.greedy_max_sweeps, c.enumeration_ceiling};
                try
                {
                    g.validate(topo.variable_count());
                }
                catch (const Error &e)
                {
                    r.error(m.node, "admittance",
                            std::string(e.what()) + " (" + to_string(a.architecture) + " group size " +
                                std::to_string(a.group_size) + ")");
                }
            }
            c.designs.push_back(d);
            if (flat_benchmark)
            {
                d.frequency_independent = true;
                c.designs.push_back(d);
            }
        }
    }

    result.notices = std::move(r.notices);
    result.errors = std::move(r.errors);
    if (result.errors.empty())
        result.config = std::move(c);
    return result;
}

ScenarioConfig load_config(const std::filesystem::path &path, std::vector<std::string> *notices)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    auto parsed = validate_config(text.str());
    if (notices)
        *notices = parsed.notices;
    if (!parsed.config)
    {
        std::string msg = path.string() + ": " + std::to_string(parsed.errors.size()) + " problem(s)";
        for (const auto &e : parsed.errors)
            msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return *parsed.config;
}

LinearSusceptanceModel scenario_model(const ScenarioConfig &config)
{
    if (config.model)
    {
        LinearSusceptanceModel m = *config.model;
        m.omega_c = config.grid.center_omega();
        return m;
    }
    return fit_linear_model(config.circuit, config.grid.center_omega(), config.fit_band, config.fit).model;
}

} // namespace bdris
