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

// Shared fixtures for the unit tests: seeded random data and small problem instances.

#include "bdris/ofdm_channel.hpp"
#include "bdris/optimizer.hpp"

#include <random>

namespace testing
{

using namespace bdris;

inline cdouble cn(std::mt19937_64 &rng, double variance = 1.0)
{
    std::normal_distribution<double> g(0.0, std::sqrt(0.5 * variance));
    const double re = g(rng);
    return {re, g(rng)};
}

inline CMatrix cn_matrix(std::mt19937_64 &rng, int rows, int cols, double variance = 1.0)
{
    CMatrix out(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            out(i, j) = cn(rng, variance);
    return out;
}

inline TapChannels unit_taps(std::mt19937_64 &rng, int elements, int taps)
{
    TapChannels t;
    t.h_rt = cn_matrix(rng, taps, 1).col(0);
    t.h_ri = cn_matrix(rng, taps, elements);
    t.h_it = cn_matrix(rng, taps, elements);
    return t;
}

/// The default circuit fitted over the default band.
inline LinearSusceptanceModel default_model()
{
    static const LinearSusceptanceModel model =
        fit_linear_model(VaractorCircuit{}, two_pi * 2.4e9, FrequencyBand{}).model;
    return model;
}

/// Random problem on the default pathloss geometry, scaled to unit-ish admittances.
inline SumGainProblem make_problem(std::uint64_t seed, Architecture arch, int elements, int group, int subcarriers,
                                   const LinearSusceptanceModel &model = default_model())
{
    const FrequencyGrid grid{2.4e9, 300e6, subcarriers};
    const int taps = std::min(4, subcarriers);
    const TapChannels t = generate_taps(seed, elements, {taps, taps, taps}, PathlossModel{});
    return SumGainProblem::make(admittance_channels(freq_channels(t, subcarriers)), {arch, elements, group}, model,
                                grid);
}

inline std::vector<double> random_center(std::mt19937_64 &rng, const SumGainProblem &p, double margin = 0.0)
{
    const double span = p.model.b_max - p.model.b_min;
    std::uniform_real_distribution<double> u(p.model.b_min + margin * span, p.model.b_max - margin * span);
    std::vector<double> b(static_cast<size_t>(p.topology.variable_count()));
    for (auto &v : b)
        v = u(rng);
    return b;
}

/// Dense oracle for the sum-gain objective: assemble every full M x M port matrix by explicit
/// nodal analysis and invert it whole (no per-group shortcut).
inline CVector dense_combined_terms(const SumGainProblem &p, const std::vector<double> &b_c)
{
    const int m = p.topology.element_count;
    const int size = p.topology.group_size;
    const int per = p.topology.variables_per_group();
    const int n_sc = p.subcarrier_count();
    CVector c(n_sc);
    for (int n = 0; n < n_sc; ++n)
    {
        const double w = p.omegas[static_cast<size_t>(n)];
        RMatrix comp = RMatrix::Zero(m, m);
        for (int g = 0; g < m / size; ++g)
        {
            int k = 0;
            auto put = [&](int i, int j) {
                const double v = p.model.susceptance(b_c[static_cast<size_t>(g * per + k++)], w);
                comp(g * size + i, g * size + j) = v;
                comp(g * size + j, g * size + i) = v;
            };
            if (p.topology.architecture == Architecture::GroupConnected)
            {
                for (int j = 0; j < size; ++j)
                    for (int i = j; i < size; ++i)
                        put(i, j);
            }
            else
            {
                for (int i = 0; i < size; ++i)
                    put(i, i);
                for (int i = 0; i + 1 < size; ++i)
                    put(i, i + 1);
            }
        }
        // Nodal analysis: current into port i = sum_k comp(i,k) (V_i - V_k) with k = i the ground branch.
        RMatrix port = RMatrix::Zero(m, m);
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k)
            {
                if (k == i)
                    port(i, i) += comp(i, i);
                else
                {
                    port(i, i) += comp(i, k);
                    port(i, k) -= comp(i, k);
                }
            }
        const CMatrix a = cdouble(0.0, 1.0) * port.cast<cdouble>() + p.channels.y0 * CMatrix::Identity(m, m);
        const CVector x = a.fullPivLu().solve(p.channels.y_it.row(n).transpose());
        c(n) = -p.channels.y_rt(n) + (p.channels.y_ri.row(n) * x)(0, 0);
    }
    return c;
}

} // namespace testing
