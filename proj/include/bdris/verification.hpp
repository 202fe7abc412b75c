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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace bdris
{

/// Outcome of one self-check: the worst value of `metric` seen and the bar it must stay under.
struct CheckReport
{
    std::string name;
    double worst = 0.0;
    double limit = 0.0;
    int instances = 0;
    bool passed = false;
    std::string detail;
};

/// Random real symmetric susceptance matrix with entries ~ U(-scale, scale); j*B is lossless and reciprocal.
RMatrix random_symmetric(std::mt19937_64 &rng, int size, double scale);

/// Dense DFT sandwich versus the per-subcarrier channel on random taps and random lossless Theta_n.
CheckReport check_diagonalization(int instances, std::uint64_t seed);
/// Scattering-domain and admittance-domain effective channels agree.
CheckReport check_parameter_equivalence(int instances, std::uint64_t seed);
/// Theta from a lossless reciprocal Y is unitary and symmetric.
CheckReport check_unitarity(int instances, std::uint64_t seed);
/// Water-filling meets the budget, satisfies KKT and never loses to uniform power.
CheckReport check_water_filling(int instances, std::uint64_t seed);

std::vector<CheckReport> run_all_checks(std::uint64_t seed);

} // namespace bdris
