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

#include "bdris/common.hpp"
#include "bdris/ris_network.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

namespace bdris
{

enum class Link
{
    Direct,       ///< transmitter -> receiver (RT)
    RisToRx,      ///< RIS -> receiver (RI)
    TxToRis       ///< transmitter -> RIS (IT)
};

/// Distance-dependent pathloss zeta_s = zeta0 * d_s^-eps_s, zeta0 given in dB at 1 m.
struct PathlossModel
{
    double zeta0_db = -30.0;
    double d_rt = 33.0, d_ri = 5.0, d_it = 30.0;
    double eps_rt = 3.8, eps_ri = 2.2, eps_it = 2.5;

    void validate() const;
    double gain(Link link) const;
};

struct TapCounts
{
    int rt = 16;
    int ri = 16;
    int it = 16;
};

/// Time-domain impulse responses. Row i of h_ri / h_it is tap i across the M RIS elements.
struct TapChannels
{
    CVector h_rt; // D_RT
    CMatrix h_ri; // D_RI x M
    CMatrix h_it; // D_IT x M

    int element_count() const { return static_cast<int>(h_ri.cols()); }
};

/// Per-subcarrier channels. Row n of h_ri / h_it is the RIS-side channel at subcarrier n.
struct FreqChannels
{
    CVector h_rt; // N
    CMatrix h_ri; // N x M
    CMatrix h_it; // N x M

    int subcarrier_count() const { return static_cast<int>(h_rt.size()); }
    int element_count() const { return static_cast<int>(h_ri.cols()); }
};

/// Admittance-parameter description of the same links.
struct AdmittanceChannels
{
    double y0 = default_characteristic_admittance;
    CVector y_rt; // N
    CMatrix y_ri; // N x M
    CMatrix y_it; // N x M

    int subcarrier_count() const { return static_cast<int>(y_rt.size()); }
    int element_count() const { return static_cast<int>(y_ri.cols()); }
};

/// CSCG taps with an equal-power delay profile: each tap of link s has variance zeta_s / D_s.
/// Deterministic in the seed.
TapChannels generate_taps(std::uint64_t seed, int element_count, const TapCounts &counts,
                          const PathlossModel &pathloss);

/// Unnormalized N-point DFT of the zero-padded tap sequences, i.e. the diagonal of F circ(taps) F^H.
FreqChannels freq_channels(const TapChannels &taps, int subcarriers);

/// y_RI = -2 Y0 h_RI, y_IT = -2 Y0 h_IT, y_RT = -2 Y0 (h_RT - h_RI h_IT).
AdmittanceChannels admittance_channels(const FreqChannels &channels, double y0 = default_characteristic_admittance);

/// h_n = h_RT,n + h_RI,n Theta_n h_IT,n.
CVector effective_channel_scattering(const FreqChannels &channels, std::span<const CMatrix> theta);

/// h_n = (-y_RT,n + y_RI,n (Y_n + Y0 I)^-1 y_IT,n) / (2 Y0), evaluated group by group.
CVector effective_channel_admittance(const AdmittanceChannels &channels, const AdmittanceMatrixSet &admittance,
                                     double condition_ceiling = 1e12);

/// Builds the time-domain block-circulant system for the given per-subcarrier scattering matrices,
/// forms H = F (H_RT + H_RI Theta H_IT) F^H densely and returns
/// max(max off-diagonal |H_pq|, max_n |H_nn - h_n|). Requires N * M <= max_size.
double diagonalization_oracle(const TapChannels &taps, std::span<const CMatrix> theta, int max_size = 512);

/// Passes the frequency-domain symbols s through the time-domain cascade using explicit circular
/// convolutions (transmit IDFT, direct path plus Tx -> RIS -> RIS taps -> Rx, receive DFT), noise-free.
CVector symbol_level_check(const TapChannels &taps, std::span<const CMatrix> theta, const CVector &symbols,
                           int max_size = 512);

/// Order-sensitive 64-bit FNV-1a digest of the tap values, for paired-trial bookkeeping.
std::uint64_t channel_digest(const TapChannels &taps);

/// Plain-text complex matrix: first line "rows cols", then one row per line, each value "a+bi".
void write_complex_matrix(std::ostream &out, const CMatrix &matrix);
CMatrix read_complex_matrix(std::istream &in);
std::string format_complex(cdouble value);
cdouble parse_complex(const std::string &token);

} // namespace bdris
