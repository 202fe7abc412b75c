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

#include "bdris/verification.hpp"

#include "bdris/ofdm_channel.hpp"
#include "bdris/optimizer.hpp"
#include "bdris/ris_network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace bdris
{

namespace
{

cdouble cn(std::mt19937_64 &rng)
{
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    const double re = g(rng);
    return {re, g(rng)};
}

CMatrix cn_matrix(std::mt19937_64 &rng, int rows, int cols)
{
    CMatrix out(rows, cols);
    for (Eigen::Index j = 0; j < out.cols(); ++j)
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            out(i, j) = cn(rng);
    return out;
}

TapChannels random_taps(std::mt19937_64 &rng, int element_count, int taps)
{
    TapChannels t;
    t.h_rt = cn_matrix(rng, taps, 1).col(0);
    t.h_ri = cn_matrix(rng, taps, element_count);
    t.h_it = cn_matrix(rng, taps, element_count);
    return t;
}

std::string format(const char *fmt, double a, double b)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    return buf;
}

void finish(CheckReport &r)
{
    r.passed = r.passed && r.worst <= r.limit;
}

} // namespace

RMatrix random_symmetric(std::mt19937_64 &rng, int size, double scale)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    RMatrix b(size, size);
    for (int j = 0; j < size; ++j)
        for (int i = j; i < size; ++i)
            b(i, j) = b(j, i) = u(rng);
    return b;
}

CheckReport check_diagonalization(int instances, std::uint64_t seed)
{
    CheckReport r{"diagonalization", 0.0, 1e-10, instances, true, ""};
    std::mt19937_64 rng(seed);
    const int n = 8;
    const int sizes[] = {1, 2, 4};
    for (int k = 0; k < instances; ++k)
    {
        const int m = sizes[k % 3];
        const TapChannels taps = random_taps(rng, m, 4);
        std::vector<CMatrix> theta;
        for (int s = 0; s < n; ++s)
            theta.push_back(scattering_from_admittance(cdouble(0.0, 1.0) * random_symmetric(rng, m, 0.05).cast<cdouble>(),
                                                       default_characteristic_admittance));
        r.worst = std::max(r.worst, diagonalization_oracle(taps, theta));
    }
    r.detail = format("N=8, M in {1,2,4}: max deviation %.3g (limit %.0e)", r.worst, r.limit);
    finish(r);
    return r;
}

CheckReport check_parameter_equivalence(int instances, std::uint64_t seed)
{
    CheckReport r{"parameter-equivalence", 0.0, 1e-10, instances, true, ""};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_m(1, 8);
    const double y0 = default_characteristic_admittance;
    for (int k = 0; k < instances; ++k)
    {
        const int m = pick_m(rng);
        std::vector<int> divisors;
        for (int d = 1; d <= m; ++d)
            if (m % d == 0)
                divisors.push_back(d);
        const int size = divisors[static_cast<size_t>(std::uniform_int_distribution<int>(
            0, static_cast<int>(divisors.size()) - 1)(rng))];
        const int n = 8;
        const FreqChannels freq = freq_channels(random_taps(rng, m, 4), n);

        AdmittanceMatrixSet set;
        set.topology = RisTopology{Architecture::GroupConnected, m, size};
        set.y0 = y0;
        set.blocks.resize(static_cast<size_t>(n));
        std::vector<CMatrix> theta;
        for (int s = 0; s < n; ++s)
        {
            for (int g = 0; g < m / size; ++g)
                set.blocks[static_cast<size_t>(s)].push_back(cdouble(0.0, 1.0) *
                                                             random_symmetric(rng, size, 0.05).cast<cdouble>());
            theta.push_back(scattering_matrix(set, s));
        }
        const CVector via_theta = effective_channel_scattering(freq, theta);
        const CVector via_y = effective_channel_admittance(admittance_channels(freq, y0), set);
        for (int s = 0; s < n; ++s)
            r.worst = std::max(r.worst, std::abs(via_theta(s) - via_y(s)) / std::abs(via_theta(s)));
    }
    r.detail = format("M <= 8: max relative difference %.3g (limit %.0e)", r.worst, r.limit);
    finish(r);
    return r;
}

CheckReport check_unitarity(int instances, std::uint64_t seed)
{
    CheckReport r{"unitarity", 0.0, 1e-9, instances, true, ""};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_m(1, 12);
    double worst_sym = 0.0;
    for (int k = 0; k < instances; ++k)
    {
        const int m = pick_m(rng);
        const CMatrix y = cdouble(0.0, 1.0) * random_symmetric(rng, m, 0.05).cast<cdouble>();
        const CMatrix theta = scattering_from_admittance(y, default_characteristic_admittance);
        const double unit = (theta * theta.adjoint() - CMatrix::Identity(m, m)).norm() / m;
        const double sym = (theta - theta.transpose()).norm();
        r.worst = std::max(r.worst, unit);
        worst_sym = std::max(worst_sym, sym);
    }
    r.passed = worst_sym <= 1e-10;
    r.detail = format("max |Theta Theta^H - I|_F / M = %.3g, max |Theta - Theta^T|_F = %.3g", r.worst, worst_sym);
    finish(r);
    return r;
}

CheckReport check_water_filling(int instances, std::uint64_t seed)
{
    CheckReport r{"water-filling", 0.0, 1e-10, instances, true, ""};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> decades(-3.0, 1.0);
    const int n = 64;
    const double noise = 1e-11;
    int kkt_failures = 0, uniform_wins = 0;
    for (int k = 0; k < instances; ++k)
    {
        CVector h(n);
        for (int s = 0; s < n; ++s)
            h(s) = cn(rng) * std::sqrt(1e-10 * std::pow(10.0, decades(rng)));
        const double budget = std::pow(10.0, decades(rng));
        const PowerAllocation a = water_filling(h, budget, noise);

        double total = 0.0, mu = 0.0;
        int active = 0;
        for (int s = 0; s < n; ++s)
        {
            total += a.p[static_cast<size_t>(s)];
            if (a.p[static_cast<size_t>(s)] > 0.0)
            {
                mu += noise / std::norm(h(s)) + a.p[static_cast<size_t>(s)];
                ++active;
            }
        }
        r.worst = std::max(r.worst, std::abs(total - budget) / budget);
        mu /= std::max(active, 1);
        for (int s = 0; s < n; ++s)
        {
            const double p = a.p[static_cast<size_t>(s)];
            const double floor = noise / std::norm(h(s));
            const bool ok = p < 0.0 ? false : p > 0.0 ? std::abs(floor + p - mu) <= 1e-9 * mu : floor >= mu * (1 - 1e-12);
            if (!ok)
            {
                ++kkt_failures;
                break;
            }
        }
        if (average_rate(h, a) < average_rate(h, uniform_allocation(n, budget, noise)) - 1e-12)
            ++uniform_wins;
    }
    r.passed = kkt_failures == 0 && uniform_wins == 0;
    r.detail = format("max budget error %.3g; KKT violations %.0f", r.worst, kkt_failures) +
               (uniform_wins ? "; uniform power won " + std::to_string(uniform_wins) + " time(s)" : "");
    finish(r);
    return r;
}

std::vector<CheckReport> run_all_checks(std::uint64_t seed)
{
    return {check_diagonalization(50, seed), check_parameter_equivalence(100, seed + 1), check_unitarity(100, seed + 2),
            check_water_filling(100, seed + 3)};
}

} // namespace bdris
