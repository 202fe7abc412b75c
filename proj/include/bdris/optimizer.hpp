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
#include "bdris/common.hpp"
#include "bdris/frequency_grid.hpp"
#include "bdris/ofdm_channel.hpp"
#include "bdris/ris_network.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace bdris
{

/// Stage-1 problem: maximize the sum over subcarriers of |-y_RT,n + sum_g y_RI,g,n (j B_g,n + Y0 I)^-1 y_IT,g,n|^2
/// over the center susceptances.
struct SumGainProblem
{
    AdmittanceChannels channels;
    RisTopology topology;
    LinearSusceptanceModel model;
    std::vector<double> omegas; // one per subcarrier
    double condition_ceiling = 1e12;

    static SumGainProblem make(AdmittanceChannels channels, const RisTopology &topology,
                               const LinearSusceptanceModel &model, const FrequencyGrid &grid);

    /// Copy whose model has F1 = 1 and F2 = 0, i.e. the surface looks identical on every subcarrier.
    SumGainProblem with_frequency_flat_model() const;

    void validate() const;
    int subcarrier_count() const { return static_cast<int>(omegas.size()); }
};

/// Evaluates the sum-gain objective, its analytic gradient and the per-group terms used by
/// the greedy search. Holds precomputed per-subcarrier slopes and intercepts.
class SumGainEvaluator
{
  public:
    explicit SumGainEvaluator(const SumGainProblem &problem);

    double value(std::span<const double> b_c) const;

    /// Objective plus d(objective)/d(b_c) in `gradient` (same length as b_c).
    double value_and_gradient(std::span<const double> b_c, std::span<double> gradient) const;

    /// c_n = -y_RT,n + sum_g t_g,n for every subcarrier; h_n = c_n / (2 Y0).
    CVector combined_terms(std::span<const double> b_c) const;

    /// t_g,n = y_RI,g,n (j B_g,n + Y0 I)^-1 y_IT,g,n for all n, given group g's packed susceptances.
    void group_terms(int group, std::span<const double> b_c_group, std::span<cdouble> out) const;

    /// Effective channels h_n.
    CVector effective_channels(std::span<const double> b_c) const;

    const SumGainProblem &problem() const { return *problem_; }

  private:
    const SumGainProblem *problem_;
    std::vector<double> slopes_;
    std::vector<double> intercepts_;
};

double sum_gain(const SumGainProblem &problem, std::span<const double> b_c);

/// Smooth bijection from the real line onto (b_min, b_max):  b = x / sqrt(x^2 / B-^2 + 1) + B+.
double box_map(double x, double b_min, double b_max);
double box_map_derivative(double x, double b_min, double b_max);
/// Inverse of box_map on the open interval (b_min, b_max).
double box_map_inverse(double b, double b_min, double b_max);

enum class GradientMode
{
    Analytic,
    CentralDifference
};

struct ContinuousSolverConfig
{
    int max_iterations = 500;
    double convergence_tol = 1e-8; ///< relative objective improvement per iteration
    double gradient_tol = 1e-9;    ///< stop when |grad|_inf < gradient_tol * |objective|
    int restarts = 3;
    GradientMode gradient = GradientMode::Analytic;
    double fd_step_fraction = 1e-6; ///< finite-difference step as a fraction of (b_max - b_min)

    void validate() const;
};

struct ContinuousResult
{
    std::vector<double> b_c;
    double objective = 0.0;
    double initial_objective = 0.0; ///< objective at the first (midpoint) start
    int iterations = 0;             ///< accepted iterations of the winning restart
    std::vector<double> trace;      ///< objective after each accepted step of the winning restart
};

/// Quasi-Newton (BFGS, backtracking Armijo line search) ascent on F(box_map(x)).
/// Restart 0 starts at x = 0; the others draw x uniformly so b covers ~95% of the range.
ContinuousResult solve_continuous(const SumGainProblem &problem, const ContinuousSolverConfig &config,
                                  std::uint64_t seed);

struct GreedyConfig
{
    int bits = 1;
    int block_size = 4;
    int max_sweeps = 100;
    std::uint64_t enumeration_ceiling = 1ULL << 20;

    void validate(int variable_count) const;
};

struct GreedyResult
{
    std::vector<double> b_c;
    double objective = 0.0;
    int sweeps = 0;
    bool converged = false;    ///< last sweep changed no block
    std::vector<double> trace; ///< objective after every block update
};

/// Block coordinate ascent over the quantized levels. Each block of `block_size` consecutive
/// variables is set to the best of its 2^(bits * block_size) codewords with all other blocks
/// fixed; blocks are visited in ascending order; the incumbent wins ties.
GreedyResult solve_discrete_greedy(const SumGainProblem &problem, const GreedyConfig &config, std::uint64_t seed);

/// Rounds each center susceptance to the nearest quantized level.
std::vector<double> quantize_nearest(std::span<const double> b_c, const QuantizedSet &levels);

struct PowerAllocation
{
    std::vector<double> p; // W per subcarrier
    double budget = 0.0;   // W
    double noise = 0.0;    // W
};

/// p_n = max(0, mu - sigma2/|h_n|^2) with sum p_n = P. The active set is the prefix of subcarriers
/// sorted by sigma2/|h_n|^2, and mu is solved exactly on it.
PowerAllocation water_filling(const CVector &h, double budget, double noise);

PowerAllocation uniform_allocation(int subcarriers, double budget, double noise);

/// (1/N) sum_n log2(1 + p_n |h_n|^2 / sigma2), bits/s/Hz.
double average_rate(const CVector &h, const PowerAllocation &allocation);

/// log2(1 + (1/N) sum_n (P/N) |h_n|^2 / sigma2): upper bound on the uniform-power rate.
double jensen_upper_bound(const CVector &h, double budget, double noise);

enum class AdmittanceMode
{
    Continuous,
    Discrete,
    DirectQuantized ///< continuous solution rounded to the nearest level (comparison only)
};

/// How Stage 1 is solved.
struct DesignSettings
{
    AdmittanceMode mode = AdmittanceMode::Continuous;
    bool frequency_independent = false; ///< optimize assuming F1 = 1, F2 = 0
    ContinuousSolverConfig continuous;
    GreedyConfig greedy;
};

/// Stage-1 outcome evaluated under the true (frequency-dependent) model.
struct SurfaceDesign
{
    std::vector<double> b_c;
    CVector h;                 ///< true effective channels
    double sum_gain = 0.0;     ///< true sum-gain objective
    double design_objective = 0.0; ///< objective the solver saw
    int iterations = 0;
};

SurfaceDesign design_surface(const SumGainProblem &problem, const DesignSettings &settings, std::uint64_t seed);

struct RunResult
{
    std::vector<double> b_c;
    CVector h;
    PowerAllocation allocation;
    double rate = 0.0;
    double sum_gain = 0.0;
};

/// Stage 2 on a fixed design: water-filling (zero allocation when the budget is zero).
RunResult allocate_power(const SurfaceDesign &design, double budget, double noise);

/// Stage 1 with uniform power, then water-filling on the resulting channels.
RunResult two_stage_pipeline(const SumGainProblem &problem, const DesignSettings &settings, double budget,
                             double noise, std::uint64_t seed);

struct FrequencyIndependentResult
{
    CMatrix admittance;   ///< the single M x M matrix the benchmark designs
    std::vector<double> b_c;
    CVector h;            ///< true channels after pushing b_c through the wideband model
    PowerAllocation allocation;
    double rate = 0.0;
};

/// Benchmark that designs one frequency-flat admittance matrix and evaluates it under the true model.
FrequencyIndependentResult solve_frequency_independent(const SumGainProblem &problem, DesignSettings settings,
                                                       double budget, double noise, std::uint64_t seed);

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

} // namespace bdris
