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

#include "bdris/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace bdris
{

void ContinuousSolverConfig::validate() const
{
    if (max_iterations < 1)
        throw ConfigError("continuous solver: max_iterations must be positive");
    if (!(convergence_tol > 0.0) || !(gradient_tol >= 0.0))
        throw ConfigError("continuous solver: tolerances must be positive");
    if (restarts < 1)
        throw ConfigError("continuous solver: restarts must be at least 1");
    if (!(fd_step_fraction > 0.0 && fd_step_fraction < 0.1))
        throw ConfigError("continuous solver: fd_step_fraction must be in (0, 0.1)");
}

namespace
{

// Box-map scaled coordinates: z = x / B-, so b = B- z / sqrt(z^2 + 1) + B+.
struct ScaledBox
{
    double half, mid;

    double to_b(double z) const { return half * z / std::sqrt(z * z + 1.0) + mid; }
    double db_dz(double z) const
    {
        const double q = z * z + 1.0;
        return half / (q * std::sqrt(q));
    }
};

// Uniform draw in z that covers 95% of (b_min, b_max).
constexpr double random_start_extent = 3.04;

double objective_and_gradient(const SumGainEvaluator &eval, const ContinuousSolverConfig &config,
                              const LinearSusceptanceModel &model, std::span<const double> b,
                              std::span<double> grad)
{
    if (config.gradient == GradientMode::Analytic)
        return eval.value_and_gradient(b, grad);
    const double step = config.fd_step_fraction * (model.b_max - model.b_min);
    std::vector<double> probe(b.begin(), b.end());
    for (size_t i = 0; i < b.size(); ++i)
    {
        probe[i] = b[i] + step;
        const double up = eval.value(probe);
        probe[i] = b[i] - step;
        const double down = eval.value(probe);
        probe[i] = b[i];
        grad[i] = (up - down) / (2.0 * step);
    }
    return eval.value(b);
}

struct RestartOutcome
{
    Eigen::VectorXd z;
    double objective = 0.0;
    double initial = 0.0;
    int iterations = 0;
    std::vector<double> trace;
};

RestartOutcome bfgs_restart(const SumGainEvaluator &eval, const ContinuousSolverConfig &config,
                            const ScaledBox &box, Eigen::VectorXd z)
{
    const auto n = z.size();
    const auto &model = eval.problem().model;
    std::vector<double> b(static_cast<size_t>(n)), gb(static_cast<size_t>(n));

    // phi(z) = -F(b(z)) / scale, minimized.
    double scale = 1.0;
    auto evaluate = [&](const Eigen::VectorXd &at, Eigen::VectorXd &grad) {
        for (Eigen::Index i = 0; i < n; ++i)
            b[static_cast<size_t>(i)] = box.to_b(at(i));
        const double f = objective_and_gradient(eval, config, model, b, gb);
        grad.resize(n);
        for (Eigen::Index i = 0; i < n; ++i)
            grad(i) = -gb[static_cast<size_t>(i)] * box.db_dz(at(i)) / scale;
        return f;
    };

    RestartOutcome out;
    Eigen::VectorXd g;
    double f = evaluate(z, g);
    if (!std::isfinite(f) || !g.allFinite())
        throw SolverError("continuous solver: non-finite objective or gradient at the starting point");
    out.initial = f;
    if (f > 0.0)
    {
        scale = f;
        g /= f;
    }
    double phi = -f / scale;

    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
    bool fresh = true;
    Eigen::VectorXd z_new, g_new;
    int it = 0;
    for (; it < config.max_iterations; ++it)
    {
        if (g.lpNorm<Eigen::Infinity>() < config.gradient_tol * std::abs(phi))
            break;
        Eigen::VectorXd d = -h * g;
        double slope = g.dot(d);
        if (!(slope < 0.0))
        {
            h.setIdentity();
            fresh = true;
            d = -g;
            slope = g.dot(d);
        }

        double step = 1.0;
        double phi_new = 0.0;
        bool accepted = false;
        for (int k = 0; k < 50; ++k)
        {
            z_new = z + step * d;
            const double f_new = evaluate(z_new, g_new);
            phi_new = -f_new / scale;
            if (std::isfinite(phi_new) && phi_new <= phi + 1e-4 * step * slope)
            {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
        {
            if (fresh)
                break; // steepest descent made no progress either
            h.setIdentity();
            fresh = true;
            continue;
        }

        const Eigen::VectorXd s = z_new - z;
        const Eigen::VectorXd y = g_new - g;
        const double improvement = phi - phi_new;
        z = z_new;
        g = g_new;
        phi = phi_new;
        out.trace.push_back(-phi * scale);

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm())
        {
            if (fresh)
                h *= sy / y.squaredNorm();
            const double rho = 1.0 / sy;
            const Eigen::VectorXd hy = h * y;
            h += (rho * rho * y.dot(hy) + rho) * s * s.transpose() - rho * (hy * s.transpose() + s * hy.transpose());
            fresh = false;
        }
        if (improvement < config.convergence_tol * std::abs(phi))
        {
            ++it;
            break;
        }
    }
    out.z = z;
    out.objective = -phi * scale;
    out.iterations = it;
    return out;
}

} // namespace

ContinuousResult solve_continuous(const SumGainProblem &problem, const ContinuousSolverConfig &config,
                                  std::uint64_t seed)
{
    config.validate();
    const SumGainEvaluator eval(problem);
    const ScaledBox box{0.5 * (problem.model.b_max - problem.model.b_min),
                        0.5 * (problem.model.b_max + problem.model.b_min)};
    const int n = problem.topology.variable_count();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> start(-random_start_extent, random_start_extent);

    ContinuousResult result;
    RestartOutcome best;
    bool have_best = false;
    std::string failure;
    for (int r = 0; r < config.restarts; ++r)
    {
        Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
        if (r > 0)
            for (int i = 0; i < n; ++i)
                z(i) = start(rng);
        RestartOutcome out;
        try
        {
            out = bfgs_restart(eval, config, box, z);
        }
        catch (const SolverError &e)
        {
            failure = e.what();
            continue;
        }
        catch (const SingularityError &e)
        {
            failure = e.what();
            continue;
        }
        if (r == 0)
            result.initial_objective = out.initial;
        if (!have_best || out.objective > best.objective)
        {
            best = std::move(out);
            have_best = true;
        }
    }
    if (!have_best)
        throw SolverError("continuous solver: all " + std::to_string(config.restarts) + " restarts failed (" + failure + ")");
    result.b_c.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        result.b_c[static_cast<size_t>(i)] = box.to_b(best.z(i));
    result.objective = eval.value(result.b_c);
    result.iterations = best.iterations;
    result.trace = std::move(best.trace);
    return result;
}

void GreedyConfig::validate(int variable_count) const
{
    if (bits < 1 || bits > 20)
        throw ConfigError("greedy: bits must be in [1, 20]");
    if (block_size < 1)
        throw ConfigError("greedy: block size must be at least 1");
    if (max_sweeps < 1)
        throw ConfigError("greedy: max_sweeps must be at least 1");
    if (variable_count % block_size != 0)
        throw ConfigError("greedy: block size " + std::to_string(block_size) + " does not divide the " +
                          std::to_string(variable_count) + " surface variables");
    const int width = bits * block_size;
    if (width >= 63 || (1ULL << width) > enumeration_ceiling)
        throw EnumerationCeilingExceeded("greedy: 2^(" + std::to_string(bits) + " x " + std::to_string(block_size) +
                                         ") codewords per block exceeds the enumeration ceiling of " +
                                         std::to_string(enumeration_ceiling));
}

GreedyResult solve_discrete_greedy(const SumGainProblem &problem, const GreedyConfig &config, std::uint64_t seed)
{
    const auto &topo = problem.topology;
    const int n_var = topo.variable_count();
    config.validate(n_var);
    const SumGainEvaluator eval(problem);
    const QuantizedSet set = QuantizedSet::uniform(config.bits, problem.model.b_min, problem.model.b_max);
    const int levels = static_cast<int>(set.levels.size());
    const int n_sc = problem.subcarrier_count();
    const int per_group = topo.variables_per_group();
    const int groups = topo.group_count();

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, levels - 1);
    std::vector<int> code(static_cast<size_t>(n_var));
    for (auto &c : code)
        c = pick(rng);
    std::vector<double> b(static_cast<size_t>(n_var));
    for (int i = 0; i < n_var; ++i)
        b[static_cast<size_t>(i)] = set.levels[static_cast<size_t>(code[static_cast<size_t>(i)])];

    // Cached per-group terms; c = -y_RT + sum_g terms[g].
    std::vector<std::vector<cdouble>> terms(static_cast<size_t>(groups), std::vector<cdouble>(static_cast<size_t>(n_sc)));
    auto group_span = [&](int g) {
        return std::span<const double>(b).subspan(static_cast<size_t>(g * per_group), static_cast<size_t>(per_group));
    };
    for (int g = 0; g < groups; ++g)
        eval.group_terms(g, group_span(g), terms[static_cast<size_t>(g)]);

    GreedyResult result;
    std::vector<cdouble> scratch(static_cast<size_t>(n_sc));
    std::vector<std::vector<cdouble>> trial_terms;
    CVector rest(n_sc);
    double incumbent = 0.0;
    for (int sweep = 0; sweep < config.max_sweeps; ++sweep)
    {
        bool changed = false;
        for (int start = 0; start < n_var; start += config.block_size)
        {
            const int stop = std::min(start + config.block_size, n_var);
            const int g_lo = start / per_group, g_hi = (stop - 1) / per_group;
            const int width = stop - start;

            rest = -problem.channels.y_rt;
            for (int g = 0; g < groups; ++g)
                if (g < g_lo || g > g_hi)
                    for (int n = 0; n < n_sc; ++n)
                        rest(n) += terms[static_cast<size_t>(g)][static_cast<size_t>(n)];

            auto score = [&](std::vector<std::vector<cdouble>> *keep) {
                if (keep)
                    keep->clear();
                CVector c = rest;
                for (int g = g_lo; g <= g_hi; ++g)
                {
                    eval.group_terms(g, group_span(g), scratch);
                    for (int n = 0; n < n_sc; ++n)
                        c(n) += scratch[static_cast<size_t>(n)];
                    if (keep)
                        keep->push_back(scratch);
                }
                return c.squaredNorm();
            };

            std::vector<int> saved(code.begin() + start, code.begin() + stop);
            double best = score(nullptr); // incumbent through the same arithmetic path
            std::vector<int> best_code = saved;
            std::uint64_t total = 1;
            for (int k = 0; k < width; ++k)
                total *= static_cast<std::uint64_t>(levels);
            for (std::uint64_t word = 0; word < total; ++word)
            {
                std::uint64_t rem = word;
                bool same = true;
                for (int k = 0; k < width; ++k)
                {
                    const int idx = static_cast<int>(rem % static_cast<std::uint64_t>(levels));
                    rem /= static_cast<std::uint64_t>(levels);
                    code[static_cast<size_t>(start + k)] = idx;
                    b[static_cast<size_t>(start + k)] = set.levels[static_cast<size_t>(idx)];
                    same = same && idx == saved[static_cast<size_t>(k)];
                }
                if (same)
                    continue;
                const double value = score(nullptr);
                // Ties (to rounding) keep the incumbent, which also guarantees termination.
                if (value > best + 1e-13 * std::abs(best))
                {
                    best = value;
                    best_code.assign(code.begin() + start, code.begin() + stop);
                }
            }
            for (int k = 0; k < width; ++k)
            {
                code[static_cast<size_t>(start + k)] = best_code[static_cast<size_t>(k)];
                b[static_cast<size_t>(start + k)] = set.levels[static_cast<size_t>(best_code[static_cast<size_t>(k)])];
            }
            if (best_code != saved)
                changed = true;
            score(&trial_terms);
            for (int g = g_lo; g <= g_hi; ++g)
                terms[static_cast<size_t>(g)] = trial_terms[static_cast<size_t>(g - g_lo)];
            incumbent = best;
            result.trace.push_back(best);
        }
        result.sweeps = sweep + 1;
        if (!changed)
        {
            result.converged = true;
            break;
        }
    }
    result.b_c = b;
    result.objective = n_var > 0 ? eval.value(b) : incumbent;
    return result;
}

std::vector<double> quantize_nearest(std::span<const double> b_c, const QuantizedSet &levels)
{
    if (levels.levels.empty())
        throw ConfigError("quantize_nearest: empty level set");
    std::vector<double> out(b_c.size());
    for (size_t i = 0; i < b_c.size(); ++i)
    {
        double best = levels.levels.front();
        for (double l : levels.levels)
            if (std::abs(l - b_c[i]) < std::abs(best - b_c[i]))
                best = l;
        out[i] = best;
    }
    return out;
}

PowerAllocation water_filling(const CVector &h, double budget, double noise)
{
    if (!(budget >= 0.0) || !std::isfinite(budget))
        throw DomainError("water_filling: power budget must be finite and non-negative");
    if (!(noise > 0.0))
        throw DomainError("water_filling: noise power must be positive");
    const auto n = static_cast<size_t>(h.size());
    PowerAllocation out{std::vector<double>(n, 0.0), budget, noise};
    if (n == 0)
        throw DomainError("water_filling: no subcarriers");
    if (h.cwiseAbs2().maxCoeff() == 0.0)
        throw AllZeroChannelError("water_filling: every subcarrier has a zero channel");
    if (budget == 0.0)
        return out;

    // Floors sigma2/|h|^2 in ascending order; the active set is a prefix.
    std::vector<double> floor(n);
    for (size_t i = 0; i < n; ++i)
    {
        const double g = std::norm(h(static_cast<Eigen::Index>(i)));
        floor[i] = g > 0.0 ? noise / g : std::numeric_limits<double>::infinity();
    }
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return floor[a] < floor[b]; });

    double sum = 0.0, mu = 0.0;
    size_t active = 0;
    for (size_t k = 0; k < n; ++k)
    {
        const double f = floor[order[k]];
        if (!std::isfinite(f))
            break;
        const double candidate = (budget + sum + f) / static_cast<double>(k + 1);
        if (candidate <= f)
            break;
        sum += f;
        mu = candidate;
        active = k + 1;
    }
    for (size_t k = 0; k < active; ++k)
        out.p[order[k]] = std::max(0.0, mu - floor[order[k]]);
    return out;
}

PowerAllocation uniform_allocation(int subcarriers, double budget, double noise)
{
    if (subcarriers < 1)
        throw DomainError("uniform_allocation: no subcarriers");
    return {std::vector<double>(static_cast<size_t>(subcarriers), budget / subcarriers), budget, noise};
}

double average_rate(const CVector &h, const PowerAllocation &allocation)
{
    if (static_cast<size_t>(h.size()) != allocation.p.size())
        throw ConstraintViolation("average_rate: allocation length mismatch");
    double acc = 0.0;
    for (Eigen::Index n = 0; n < h.size(); ++n)
        acc += std::log2(1.0 + allocation.p[static_cast<size_t>(n)] * std::norm(h(n)) / allocation.noise);
    return acc / static_cast<double>(h.size());
}

double jensen_upper_bound(const CVector &h, double budget, double noise)
{
    const double n = static_cast<double>(h.size());
    return std::log2(1.0 + (budget / n) * h.squaredNorm() / n / noise);
}

SurfaceDesign design_surface(const SumGainProblem &problem, const DesignSettings &settings, std::uint64_t seed)
{
    const SumGainProblem solver_problem = settings.frequency_independent ? problem.with_frequency_flat_model() : problem;
    SurfaceDesign design;
    switch (settings.mode)
    {
    case AdmittanceMode::Continuous: {
        auto r = solve_continuous(solver_problem, settings.continuous, seed);
        design.b_c = std::move(r.b_c);
        design.design_objective = r.objective;
        design.iterations = r.iterations;
        break;
    }
    case AdmittanceMode::Discrete: {
        auto r = solve_discrete_greedy(solver_problem, settings.greedy, seed);
        design.b_c = std::move(r.b_c);
        design.design_objective = r.objective;
        design.iterations = r.sweeps;
        break;
    }
    case AdmittanceMode::DirectQuantized: {
        auto r = solve_continuous(solver_problem, settings.continuous, seed);
        const auto set = QuantizedSet::uniform(settings.greedy.bits, problem.model.b_min, problem.model.b_max);
        design.b_c = quantize_nearest(r.b_c, set);
        design.design_objective = SumGainEvaluator(solver_problem).value(design.b_c);
        design.iterations = r.iterations;
        break;
    }
    }
    const SumGainEvaluator truth(problem);
    const CVector c = truth.combined_terms(design.b_c);
    design.sum_gain = c.squaredNorm();
    design.h = c / (2.0 * problem.channels.y0);
    return design;
}

RunResult allocate_power(const SurfaceDesign &design, double budget, double noise)
{
    RunResult run;
    run.b_c = design.b_c;
    run.h = design.h;
    run.sum_gain = design.sum_gain;
    run.allocation = water_filling(design.h, budget, noise);
    run.rate = average_rate(design.h, run.allocation);
    return run;
}

RunResult two_stage_pipeline(const SumGainProblem &problem, const DesignSettings &settings, double budget,
                             double noise, std::uint64_t seed)
{
    return allocate_power(design_surface(problem, settings, seed), budget, noise);
}

FrequencyIndependentResult solve_frequency_independent(const SumGainProblem &problem, DesignSettings settings,
                                                       double budget, double noise, std::uint64_t seed)
{
    settings.frequency_independent = true;
    const SurfaceDesign design = design_surface(problem, settings, seed);

    const auto &topo = problem.topology;
    const int size = topo.group_size;
    const int per_group = topo.variables_per_group();
    FrequencyIndependentResult out;
    out.admittance = CMatrix::Zero(topo.element_count, topo.element_count);
    for (int g = 0; g < topo.group_count(); ++g)
    {
        const auto group = std::span<const double>(design.b_c).subspan(static_cast<size_t>(g * per_group),
                                                                         static_cast<size_t>(per_group));
        out.admittance.block(g * size, g * size, size, size) =
            cdouble(0.0, 1.0) * group_susceptance_block(topo, group, 1.0, 0.0).cast<cdouble>();
    }
    out.b_c = design.b_c;
    out.h = design.h;
    out.allocation = water_filling(design.h, budget, noise);
    out.rate = average_rate(design.h, out.allocation);
    return out;
}

} // namespace bdris
