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

#include <vector>

namespace bdris
{

/// OFDM subcarrier grid. Subcarrier n (0-based) sits at
/// f_n = f_c + (n + 1 - (N + 1)/2) * bandwidth / N, so the grid is centered on f_c.
struct FrequencyGrid
{
    double center_hz = 2.4e9;
    double bandwidth_hz = 300e6;
    int subcarriers = 64;

    void validate() const;

    double frequency(int n) const
    {
        return center_hz + (n + 1 - 0.5 * (subcarriers + 1)) * bandwidth_hz / subcarriers;
    }
    double omega(int n) const { return two_pi * frequency(n); }
    double center_omega() const { return two_pi * center_hz; }
    std::vector<double> omegas() const;
};

} // namespace bdris
