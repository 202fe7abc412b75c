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

#include "test_support.hpp"

#include "bdris/frequency_grid.hpp"

#include <sstream>

using namespace testing;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

namespace
{

CVector naive_dft(const CVector &x, int n)
{
    CVector out = CVector::Zero(n);
    for (int k = 0; k < n; ++k)
        for (Eigen::Index t = 0; t < x.size(); ++t)
            out(k) += x(t) * std::polar(1.0, -two_pi * static_cast<double>(k * t) / n);
    return out;
}

std::vector<CMatrix> random_lossless(std::mt19937_64 &rng, int n, int m)
{
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    std::vector<CMatrix> theta;
    for (int k = 0; k < n; ++k)
    {
        RMatrix b(m, m);
        for (int j = 0; j < m; ++j)
            for (int i = j; i < m; ++i)
                b(i, j) = b(j, i) = u(rng);
        theta.push_back(scattering_from_admittance(cdouble(0.0, 1.0) * b.cast<cdouble>()));
    }
    return theta;
}

} // namespace

TEST_CASE("grid - subcarriers centered on the carrier")
{
    const FrequencyGrid g;
    double mean = 0.0;
    for (int n = 0; n < g.subcarriers; ++n)
        mean += g.frequency(n) / g.subcarriers;
    CHECK_THAT(mean, WithinRel(g.center_hz, 1e-14));
    CHECK_THAT(g.frequency(1) - g.frequency(0), WithinRel(g.bandwidth_hz / g.subcarriers, 1e-9));
    CHECK_THAT(g.frequency(0), WithinRel(2.4e9 - 31.5 * 300e6 / 64, 1e-14));
    CHECK(g.omegas().size() == 64u);
    CHECK_THROWS((FrequencyGrid{2.4e9, 300e6, 0}.validate()));
    const FrequencyGrid one{2.4e9, 300e6, 1};
    CHECK(one.frequency(0) == 2.4e9);
}

TEST_CASE("channel - pathloss gains")
{
    const PathlossModel p;
    CHECK_THAT(p.gain(Link::Direct), WithinRel(1e-3 * std::pow(33.0, -3.8), 1e-12));
    CHECK_THAT(p.gain(Link::RisToRx), WithinRel(1e-3 * std::pow(5.0, -2.2), 1e-12));
    CHECK_THAT(p.gain(Link::TxToRis), WithinRel(1e-3 * std::pow(30.0, -2.5), 1e-12));
    PathlossModel bad;
    bad.d_rt = 0.0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("channel - taps are deterministic in the seed")
{
    const auto a = generate_taps(42, 6, {}, PathlossModel{});
    const auto b = generate_taps(42, 6, {}, PathlossModel{});
    const auto c = generate_taps(43, 6, {}, PathlossModel{});
    CHECK(a.h_rt == b.h_rt);
    CHECK(a.h_ri == b.h_ri);
    CHECK(a.h_it == b.h_it);
    CHECK(channel_digest(a) == channel_digest(b));
    CHECK(channel_digest(a) != channel_digest(c));
    CHECK(a.h_ri.rows() == 16);
    CHECK(a.h_ri.cols() == 6);
}

TEST_CASE("channel - tap power follows the equal-power profile")
{
    // Mean |tap|^2 over many draws ~ zeta / D; 16 x 400 x 36 samples for the RIS links.
    const PathlossModel p;
    double ri = 0.0, rt = 0.0;
    const int draws = 400;
    for (int s = 0; s < draws; ++s)
    {
        const auto t = generate_taps(1000 + s, 36, {}, p);
        ri += t.h_ri.cwiseAbs2().sum() / (16.0 * 36.0);
        rt += t.h_rt.cwiseAbs2().sum() / 16.0;
    }
    CHECK_THAT(ri / draws, WithinRel(p.gain(Link::RisToRx) / 16.0, 0.02));
    CHECK_THAT(rt / draws, WithinRel(p.gain(Link::Direct) / 16.0, 0.05));
}

TEST_CASE("channel - frequency response equals the direct DFT sum")
{
    std::mt19937_64 rng(3);
    const auto taps = unit_taps(rng, 3, 5);
    const auto f = freq_channels(taps, 16);
    CHECK((f.h_rt - naive_dft(taps.h_rt, 16)).norm() < 1e-12);
    for (int e = 0; e < 3; ++e)
    {
        CHECK((f.h_ri.col(e) - naive_dft(taps.h_ri.col(e), 16)).norm() < 1e-12);
        CHECK((f.h_it.col(e) - naive_dft(taps.h_it.col(e), 16)).norm() < 1e-12);
    }
    // Parseval for the unnormalized DFT.
    CHECK_THAT(f.h_rt.squaredNorm(), WithinRel(16.0 * taps.h_rt.squaredNorm(), 1e-12));
    CHECK_THROWS_AS(freq_channels(taps, 4), DomainError);

    // One subcarrier: the response is the single tap.
    const auto single = unit_taps(rng, 2, 1);
    const auto f1 = freq_channels(single, 1);
    CHECK(f1.h_rt == single.h_rt);
    CHECK(f1.h_ri == single.h_ri);
}

TEST_CASE("channel - admittance-domain channels")
{
    std::mt19937_64 rng(5);
    const auto f = freq_channels(unit_taps(rng, 4, 3), 8);
    const double y0 = 0.02;
    const auto a = admittance_channels(f, y0);
    for (int n = 0; n < 8; ++n)
    {
        cdouble cascade = 0.0;
        for (int e = 0; e < 4; ++e)
        {
            CHECK(a.y_ri(n, e) == -2.0 * y0 * f.h_ri(n, e));
            CHECK(a.y_it(n, e) == -2.0 * y0 * f.h_it(n, e));
            cascade += f.h_ri(n, e) * f.h_it(n, e);
        }
        CHECK(std::abs(a.y_rt(n) + 2.0 * y0 * (f.h_rt(n) - cascade)) < 1e-14);
    }
}

TEST_CASE("channel - scattering and admittance descriptions agree")
{
    std::mt19937_64 rng(9);
    for (int m : {1, 2, 4, 6})
        for (int size : {1, m})
        {
            const int n = 8;
            const auto f = freq_channels(unit_taps(rng, m, 4), n);
            AdmittanceMatrixSet set;
            set.topology = {Architecture::GroupConnected, m, size};
            set.blocks.resize(n);
            std::vector<CMatrix> theta;
            std::uniform_real_distribution<double> u(-0.05, 0.05);
            for (int k = 0; k < n; ++k)
            {
                for (int g = 0; g < m / size; ++g)
                {
                    RMatrix b(size, size);
                    for (int j = 0; j < size; ++j)
                        for (int i = j; i < size; ++i)
                            b(i, j) = b(j, i) = u(rng);
                    set.blocks[static_cast<size_t>(k)].push_back(cdouble(0.0, 1.0) * b.cast<cdouble>());
                }
                theta.push_back(scattering_matrix(set, k));
            }
            const CVector hs = effective_channel_scattering(f, theta);
            const CVector ha = effective_channel_admittance(admittance_channels(f), set);
            for (int k = 0; k < n; ++k)
                CHECK(std::abs(hs(k) - ha(k)) <= 1e-10 * std::abs(hs(k)));
        }
}

TEST_CASE("channel - zero scattering leaves the direct link")
{
    std::mt19937_64 rng(13);
    const auto f = freq_channels(unit_taps(rng, 3, 2), 4);
    const std::vector<CMatrix> zero(4, CMatrix::Zero(3, 3));
    CHECK(effective_channel_scattering(f, zero) == f.h_rt);
}

TEST_CASE("channel - time-domain cascade is diagonalized by the DFT")
{
    std::mt19937_64 rng(17);
    for (int m : {1, 2, 4})
    {
        const auto taps = unit_taps(rng, m, 4);
        const auto theta = random_lossless(rng, 8, m);
        CHECK(diagonalization_oracle(taps, theta) <= 1e-10);
    }
    const auto big = unit_taps(rng, 40, 2);
    CHECK_THROWS_AS(diagonalization_oracle(big, random_lossless(rng, 16, 40)), InstanceTooLarge);
}

TEST_CASE("channel - symbol-level cascade matches per-subcarrier products")
{
    std::mt19937_64 rng(19);
    const int n = 16, m = 3;
    const auto taps = unit_taps(rng, m, 4);
    const auto theta = random_lossless(rng, n, m);
    CVector s(n);
    for (int k = 0; k < n; ++k)
        s(k) = cn(rng);
    const CVector y = symbol_level_check(taps, theta, s);
    const CVector h = effective_channel_scattering(freq_channels(taps, n), theta);
    CHECK((y - h.cwiseProduct(s)).norm() <= 1e-10 * s.norm() * h.norm());
}

TEST_CASE("channel - plain-text matrix round trip")
{
    std::mt19937_64 rng(23);
    const CMatrix a = cn_matrix(rng, 3, 4);
    std::stringstream io;
    write_complex_matrix(io, a);
    CHECK(read_complex_matrix(io) == a);

    CHECK(parse_complex("1+2i") == cdouble(1, 2));
    CHECK(parse_complex("-1.5e-3-2e+2i") == cdouble(-1.5e-3, -200));
    CHECK(parse_complex(format_complex({0.0, -0.0})) == cdouble(0.0, -0.0));
    CHECK_THROWS_AS(parse_complex("1+2"), ConfigError);
    CHECK_THROWS_AS(parse_complex("abc+1i"), ConfigError);
    std::stringstream bad("2 2\n1+1i 2+2i\n");
    CHECK_THROWS_AS(read_complex_matrix(bad), ConfigError);
}
