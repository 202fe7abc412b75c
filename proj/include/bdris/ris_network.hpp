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

#include <span>
#include <string>
#include <vector>

namespace bdris
{

enum class Architecture
{
    GroupConnected, ///< every pair of ports in a group is joined by a tunable component
    ForestConnected ///< only adjacent ports in a group are joined (tridiagonal blocks)
};

std::string to_string(Architecture arch);
Architecture architecture_from_string(const std::string &name);

/// Partition of M ports into G = M / group_size uniform groups.
///
/// Center susceptances are packed group-major. Within a group the group-connected layout is the
/// column-major lower triangle of the component matrix (B11, B21, ..., BM1, B22, B32, ...); the
/// forest-connected layout is the diagonal followed by the first super-diagonal.
struct RisTopology
{
    Architecture architecture = Architecture::GroupConnected;
    int element_count = 0;
    int group_size = 1;

    void validate() const;

    int group_count() const { return element_count / group_size; }
    int variables_per_group() const;
    int variable_count() const { return variables_per_group() * group_count(); }
};

/// 2^bits uniformly spaced susceptance levels from b_min to b_max inclusive.
struct QuantizedSet
{
    int bits = 1;
    std::vector<double> levels;

    static QuantizedSet uniform(int bits, double b_min, double b_max);
};

/// Binary duplication matrix P (M^2 x M(M+1)/2) with vec(B) = P * packed for symmetric B.
RMatrix duplication_matrix(int group_size);

/// Symmetric component matrix from its packed lower triangle (column-major).
RMatrix expand_group(std::span<const double> packed, int group_size);

/// Symmetric tridiagonal component matrix from [diagonal..., super-diagonal...].
RMatrix expand_forest(std::span<const double> packed, int group_size);

RMatrix expand_packed(Architecture arch, std::span<const double> packed, int group_size);

/// Port (nodal) susceptance matrix of a group: off-diagonal entries -Bbar(m, m'), diagonal
/// entries sum_k Bbar(m, k). The diagonal of Bbar is the component from port m to ground.
RMatrix component_matrix_to_port_matrix(const RMatrix &component);

/// Per-subcarrier admittance matrices, stored as G purely imaginary blocks per subcarrier.
/// The full M x M matrix is only formed on request (dense()).
struct AdmittanceMatrixSet
{
    RisTopology topology;
    double y0 = default_characteristic_admittance;
    std::vector<std::vector<CMatrix>> blocks; // [subcarrier][group]

    int subcarrier_count() const { return static_cast<int>(blocks.size()); }
    CMatrix dense(int n) const;
};

/// Checks shape and (optionally) that every entry lies in [b_min, b_max]. Throws ConstraintViolation.
void check_center_susceptances(const RisTopology &topology, std::span<const double> b_c,
                               const LinearSusceptanceModel &model, bool check_range = true);

/// Port susceptance block of group g at angular frequency omega.
RMatrix group_susceptance_block(const RisTopology &topology, std::span<const double> b_c_group, double slope,
                                double intercept);

AdmittanceMatrixSet assemble_admittance_set(const RisTopology &topology, std::span<const double> b_c,
                                            const LinearSusceptanceModel &model, const FrequencyGrid &grid,
                                            double y0 = default_characteristic_admittance);

/// Theta = (Y0 I + Y)^-1 (Y0 I - Y). Throws SingularityError when the condition number of
/// (Y0 I + Y) exceeds condition_ceiling.
CMatrix scattering_from_admittance(const CMatrix &admittance, double y0 = default_characteristic_admittance,
                                   double condition_ceiling = 1e12);

/// Block-diagonal scattering matrix of subcarrier n, computed group by group.
CMatrix scattering_matrix(const AdmittanceMatrixSet &set, int n, double condition_ceiling = 1e12);

} // namespace bdris
