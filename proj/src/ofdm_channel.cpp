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

#include "bdris/ofdm_channel.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

namespace bdris
{

namespace
{

CVector dft(const CVector &taps, int n)
{
    std::vector<cdouble> in(static_cast<size_t>(n), cdouble(0.0, 0.0));
    for (Eigen::Index i = 0; i < taps.size(); ++i)
        in[static_cast<size_t>(i)] = taps(i);
    if (n == 1) // kissfft does not handle a length-1 transform
        return Eigen::Map<const CVector>(in.data(), 1);
    std::vector<cdouble> out;
    Eigen::FFT<double> fft;
    fft.fwd(out, in);
    return Eigen::Map<const CVector>(out.data(), n);
}

// Normalized DFT matrix, [F]_{p,q} = exp(-j 2 pi p q / N) / sqrt(N).
CMatrix normalized_dft_matrix(int n)
{
    CMatrix f(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            f(p, q) = std::polar(scale, -two_pi * static_cast<double>((p * q) % n) / n);
    return f;
}

// Tap k of a sequence stored as rows (zero beyond the stored taps).
cdouble tap(const CMatrix &taps, int k, int element)
{
    return k < taps.rows() ? taps(k, element) : cdouble(0.0, 0.0);
}

cdouble tap(const CVector &taps, int k)
{
    return k < taps.size() ? taps(k) : cdouble(0.0, 0.0);
}

std::vector<cdouble> circular_convolve(const std::vector<cdouble> &a, const std::vector<cdouble> &x)
{
    const size_t n = x.size();
    std::vector<cdouble> y(n, cdouble(0.0, 0.0));
    for (size_t t = 0; t < n; ++t)
        for (size_t k = 0; k < n; ++k)
            y[t] += a[k] * x[(t + n - k) % n];
    return y;
}

void check_oracle_shapes(const TapChannels &taps, std::span<const CMatrix> theta, int max_size)
{
    const int n = static_cast<int>(theta.size());
    const int m = taps.element_count();
    if (n < 1)
        throw DomainError("oracle: need at least one subcarrier");
    if (n * m > max_size)
        throw InstanceTooLarge("oracle: N*M = " + std::to_string(n * m) + " exceeds " + std::to_string(max_size));
    if (taps.h_rt.size() > n || taps.h_ri.rows() > n || taps.h_it.rows() > n)
        throw DomainError("oracle: tap count exceeds the number of subcarriers");
    if (taps.h_it.cols() != m)
        throw DomainError("oracle: RIS-side tap dimensions disagree");
    for (const auto &t : theta)
        if (t.rows() != m || t.cols() != m)
            throw DomainError("oracle: scattering matrix dimension mismatch");
}

} // namespace

void PathlossModel::validate() const
{
    if (!(d_rt > 0.0) || !(d_ri > 0.0) || !(d_it > 0.0))
        throw DomainError("PathlossModel: distances must be positive");
}

double PathlossModel::gain(Link link) const
{
    const double zeta0 = std::pow(10.0, zeta0_db / 10.0);
    switch (link)
    {
    case Link::Direct:
        return zeta0 * std::pow(d_rt, -eps_rt);
    case Link::RisToRx:
        return zeta0 * std::pow(d_ri, -eps_ri);
    case Link::TxToRis:
        return zeta0 * std::pow(d_it, -eps_it);
    }
    return 0.0;
}

TapChannels generate_taps(std::uint64_t seed, int element_count, const TapCounts &counts,
                          const PathlossModel &pathloss)
{
    if (counts.rt < 1 || counts.ri < 1 || counts.it < 1)
        throw DomainError("generate_taps: tap counts must be at least 1");
    if (element_count < 0)
        throw DomainError("generate_taps: negative element count");
    pathloss.validate();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    // CN(0, v): real and imaginary parts each N(0, v/2).
    auto draw = [&](double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal(rng);
        const double im = normal(rng);
        return cdouble(s * re, s * im);
    };

    TapChannels taps;
    taps.h_rt.resize(counts.rt);
    taps.h_ri.resize(counts.ri, element_count);
    taps.h_it.resize(counts.it, element_count);
    const double v_rt = pathloss.gain(Link::Direct) / counts.rt;
    const double v_ri = pathloss.gain(Link::RisToRx) / counts.ri;
    const double v_it = pathloss.gain(Link::TxToRis) / counts.it;
    for (int i = 0; i < counts.rt; ++i)
        taps.h_rt(i) = draw(v_rt);
    for (int i = 0; i < counts.ri; ++i)
        for (int m = 0; m < element_count; ++m)
            taps.h_ri(i, m) = draw(v_ri);
    for (int i = 0; i < counts.it; ++i)
        for (int m = 0; m < element_count; ++m)
            taps.h_it(i, m) = draw(v_it);
    return taps;
}

FreqChannels freq_channels(const TapChannels &taps, int subcarriers)
{
    if (subcarriers < 1)
        throw DomainError("freq_channels: need at least one subcarrier");
    if (taps.h_rt.size() > subcarriers || taps.h_ri.rows() > subcarriers || taps.h_it.rows() > subcarriers)
        throw DomainError("freq_channels: tap count exceeds the number of subcarriers");
    const int m = taps.element_count();
    FreqChannels out;
    out.h_rt = dft(taps.h_rt, subcarriers);
    out.h_ri.resize(subcarriers, m);
    out.h_it.resize(subcarriers, m);
    for (int e = 0; e < m; ++e)
    {
        out.h_ri.col(e) = dft(taps.h_ri.col(e), subcarriers);
        out.h_it.col(e) = dft(taps.h_it.col(e), subcarriers);
    }
    return out;
}

AdmittanceChannels admittance_channels(const FreqChannels &channels, double y0)
{
    AdmittanceChannels out;
    out.y0 = y0;
    out.y_ri = -2.0 * y0 * channels.h_ri;
    out.y_it = -2.0 * y0 * channels.h_it;
    const CVector cascade = channels.h_ri.cwiseProduct(channels.h_it).rowwise().sum();
    out.y_rt = -2.0 * y0 * (channels.h_rt - cascade);
    return out;
}

CVector effective_channel_scattering(const FreqChannels &channels, std::span<const CMatrix> theta)
{
    const int n = channels.subcarrier_count();
    if (static_cast<int>(theta.size()) != n)
        throw DomainError("effective_channel_scattering: need one scattering matrix per subcarrier");
    CVector h(n);
    for (int k = 0; k < n; ++k)
        h(k) = channels.h_rt(k) + (channels.h_ri.row(k) * theta[static_cast<size_t>(k)] *
                                   channels.h_it.row(k).transpose())(0, 0);
    return h;
}

CVector effective_channel_admittance(const AdmittanceChannels &channels, const AdmittanceMatrixSet &admittance,
                                     double condition_ceiling)
{
    const int n = channels.subcarrier_count();
    const auto &topo = admittance.topology;
    if (admittance.subcarrier_count() != n || topo.element_count != channels.element_count())
        throw DomainError("effective_channel_admittance: dimension mismatch");
    const int size = topo.group_size;
    const double y0 = channels.y0;
    CVector h(n);
    for (int k = 0; k < n; ++k)
    {
        cdouble acc = -channels.y_rt(k);
        for (int g = 0; g < topo.group_count(); ++g)
        {
            const CMatrix a = admittance.blocks[static_cast<size_t>(k)][static_cast<size_t>(g)] +
                              y0 * CMatrix::Identity(size, size);
            const Eigen::PartialPivLU<CMatrix> lu(a);
            if (lu.rcond() * condition_ceiling < 1.0)
                throw SingularityError("effective_channel_admittance: (Y_n + Y0 I) is singular");
            const CVector rhs = channels.y_it.row(k).segment(g * size, size).transpose();
            acc += (channels.y_ri.row(k).segment(g * size, size) * lu.solve(rhs))(0, 0);
        }
        h(k) = acc / (2.0 * y0);
    }
    return h;
}

double diagonalization_oracle(const TapChannels &taps, std::span<const CMatrix> theta, int max_size)
{
    check_oracle_shapes(taps, theta, max_size);
    const int n = static_cast<int>(theta.size());
    const int m = taps.element_count();
    const CMatrix f = normalized_dft_matrix(n);
    const CMatrix fh = f.adjoint();

    // Time-domain (block-)circulant matrices built straight from the zero-padded taps.
    CMatrix h_rt(n, n), h_ri(n, n * m), h_it(n * m, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
        {
            const int k = (p - q + n) % n;
            h_rt(p, q) = tap(taps.h_rt, k);
            for (int e = 0; e < m; ++e)
            {
                h_ri(p, q * m + e) = tap(taps.h_ri, k, e);
                h_it(p * m + e, q) = tap(taps.h_it, k, e);
            }
        }

    // Theta_ij is the circulant matrix whose DFT diagonal is {[Theta_n]_ij}_n; interleave into
    // the NM x NM block matrix [Theta]_{pM+i, qM+j} = [Theta_ij]_{p,q}.
    CMatrix theta_time(n * m, n * m);
    CVector diag(n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
        {
            for (int k = 0; k < n; ++k)
                diag(k) = theta[static_cast<size_t>(k)](i, j);
            const CMatrix circ = fh * diag.asDiagonal() * f;
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q)
                    theta_time(p * m + i, q * m + j) = circ(p, q);
        }

    const CMatrix h_freq = f * (h_rt + h_ri * theta_time * h_it) * fh;
    const CVector expected = effective_channel_scattering(freq_channels(taps, n), theta);

    double deviation = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            deviation = std::max(deviation, std::abs(p == q ? h_freq(p, q) - expected(p) : h_freq(p, q)));
    return deviation;
}

CVector symbol_level_check(const TapChannels &taps, std::span<const CMatrix> theta, const CVector &symbols,
                           int max_size)
{
    check_oracle_shapes(taps, theta, max_size);
    const int n = static_cast<int>(theta.size());
    const int m = taps.element_count();
    if (symbols.size() != n)
        throw DomainError("symbol_level_check: need one symbol per subcarrier");
    const CMatrix f = normalized_dft_matrix(n);

    auto as_vec = [](const CVector &v) { return std::vector<cdouble>(v.data(), v.data() + v.size()); };
    auto padded = [n](auto getter) {
        std::vector<cdouble> seq(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k)
            seq[static_cast<size_t>(k)] = getter(k);
        return seq;
    };

    const std::vector<cdouble> s_time = as_vec(f.adjoint() * symbols);
    std::vector<cdouble> y_time = circular_convolve(padded([&](int k) { return tap(taps.h_rt, k); }), s_time);

    // RIS impulse responses: inverse (unnormalized) DFT of each scattering entry across subcarriers.
    std::vector<std::vector<cdouble>> at_ris(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j)
        at_ris[static_cast<size_t>(j)] =
            circular_convolve(padded([&](int k) { return tap(taps.h_it, k, j); }), s_time);

    for (int i = 0; i < m; ++i)
    {
        std::vector<cdouble> leaving(static_cast<size_t>(n), cdouble(0.0, 0.0));
        for (int j = 0; j < m; ++j)
        {
            const auto theta_taps = padded([&](int k) {
                cdouble acc(0.0, 0.0);
                for (int q = 0; q < n; ++q)
                    acc += theta[static_cast<size_t>(q)](i, j) *
                           std::polar(1.0, two_pi * static_cast<double>((k * q) % n) / n);
                return acc / static_cast<double>(n);
            });
            const auto part = circular_convolve(theta_taps, at_ris[static_cast<size_t>(j)]);
            for (int t = 0; t < n; ++t)
                leaving[static_cast<size_t>(t)] += part[static_cast<size_t>(t)];
        }
        const auto received = circular_convolve(padded([&](int k) { return tap(taps.h_ri, k, i); }), leaving);
        for (int t = 0; t < n; ++t)
            y_time[static_cast<size_t>(t)] += received[static_cast<size_t>(t)];
    }
    return f * Eigen::Map<const CVector>(y_time.data(), n);
}

std::uint64_t channel_digest(const TapChannels &taps)
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    auto mix = [&hash](const cdouble *data, Eigen::Index count) {
        for (Eigen::Index i = 0; i < count; ++i)
            for (double part : {data[i].real(), data[i].imag()})
            {
                unsigned char bytes[sizeof(double)];
                std::memcpy(bytes, &part, sizeof(double));
                for (unsigned char b : bytes)
                {
                    hash ^= b;
                    hash *= 0x100000001b3ULL;
                }
            }
    };
    mix(taps.h_rt.data(), taps.h_rt.size());
    mix(taps.h_ri.data(), taps.h_ri.size());
    mix(taps.h_it.data(), taps.h_it.size());
    return hash;
}

std::string format_complex(cdouble value)
{
    char buf[64];
    const double im = value.imag();
    std::snprintf(buf, sizeof(buf), "%.17g%c%.17gi", value.real(), std::signbit(im) ? '-' : '+', std::abs(im));
    return buf;
}

cdouble parse_complex(const std::string &token)
{
    if (token.empty() || token.back() != 'i')
        throw ConfigError("complex token '" + token + "' must end in 'i'");
    // The sign separating the parts is the last +/- not at the start and not part of an exponent.
    size_t split = std::string::npos;
    for (size_t k = token.size() - 1; k > 0; --k)
        if ((token[k] == '+' || token[k] == '-') && token[k - 1] != 'e' && token[k - 1] != 'E')
        {
            split = k;
            break;
        }
    if (split == std::string::npos)
        throw ConfigError("complex token '" + token + "' has no imaginary part");
    try
    {
        size_t used = 0;
        const std::string re_text = token.substr(0, split);
        const std::string im_text = token.substr(split, token.size() - split - 1);
        const double re = std::stod(re_text, &used);
        if (used != re_text.size())
            throw ConfigError("bad real part");
        const double im = std::stod(im_text, &used);
        if (used != im_text.size())
            throw ConfigError("bad imaginary part");
        return {re, im};
    }
    catch (const std::logic_error &)
    {
        throw ConfigError("complex token '" + token + "' is not a number");
    }
}

void write_complex_matrix(std::ostream &out, const CMatrix &matrix)
{
    out << matrix.rows() << ' ' << matrix.cols() << '\n';
    for (Eigen::Index r = 0; r < matrix.rows(); ++r)
    {
        for (Eigen::Index c = 0; c < matrix.cols(); ++c)
            out << (c ? " " : "") << format_complex(matrix(r, c));
        out << '\n';
    }
}

CMatrix read_complex_matrix(std::istream &in)
{
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> rows >> cols) || rows < 0 || cols < 0)
        throw ConfigError("complex matrix: missing or invalid 'rows cols' header");
    CMatrix matrix(rows, cols);
    std::string token;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
        {
            if (!(in >> token))
                throw ConfigError("complex matrix: truncated data");
            matrix(r, c) = parse_complex(token);
        }
    return matrix;
}

} // namespace bdris
