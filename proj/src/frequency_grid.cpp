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

#include "bdris/frequency_grid.hpp"

namespace bdris
{

void FrequencyGrid::validate() const
{
    if (subcarriers < 1)
        throw DomainError("FrequencyGrid: need at least one subcarrier");
    if (!(center_hz > 0.0) || !(bandwidth_hz > 0.0))
        throw DomainError("FrequencyGrid: center frequency and bandwidth must be positive");
    if (!(frequency(0) > 0.0))
        throw DomainError("FrequencyGrid: lowest subcarrier frequency must be positive");
}

std::vector<double> FrequencyGrid::omegas() const
{
    std::vector<double> out(static_cast<size_t>(subcarriers));
    for (int n = 0; n < subcarriers; ++n)
        out[static_cast<size_t>(n)] = omega(n);
    return out;
}

} // namespace bdris
