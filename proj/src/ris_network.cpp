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

#include "bdris/ris_network.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace bdris
{

std::string to_string(Architecture arch)
{
    return arch == Architecture::GroupConnected ? "group" : "forest";
}

Architecture architecture_from_string(const std::string &name)
{
    if (name == "group" || name == "group-connected" || name == "GC")
        return Architecture::GroupConnected;
    if (name == "forest" || name == "forest-connected" || name == "FC")
        return Architecture::ForestConnected;
    throw ConfigError("unknown architecture '" + name + "' (expected group or forest)");
}

void RisTopology::validate() const
{
    if (group_size < 1)
        throw ConstraintViolation("RisTopology: group size must be at least 1");
    if (element_count < 1)
        throw ConstraintViolation("RisTopology: element count must be at least 1");
    if (element_count % group_size != 0)
        throw ConstraintViolation("RisTopology: group size " + std::to_string(group_size) +
                                  " does not divide element count " + std::to_string(element_count));
}

int RisTopology::variables_per_group() const
{
    return architecture == Architecture::GroupConnected ? group_size * (group_size + 1) / 2 : 2 * group_size - 1;
}

QuantizedSet QuantizedSet::uniform(int bits, double b_min, double b_max)
{
    if (bits < 1 || bits > 20)
        throw DomainError("QuantizedSet: bits must be in [1, 20]");
    QuantizedSet set;
    set.bits = bits;
    const int count = 1 << bits;
    set.levels.resize(static_cast<size_t>(count));
    for (int x = 0; x < count; ++x)
        set.levels[static_cast<size_t>(x)] = b_min + (b_max - b_min) * x / (count - 1);
    set.levels.back() = b_max;
    return set;
}

RMatrix duplication_matrix(int group_size)
{
    const int m = group_size;
    RMatrix p = RMatrix::Zero(m * m, m * (m + 1) / 2);
    // Column-major packed index of the lower-triangle entry (row i, column j), i >= j.
    auto packed_index = [m](int i, int j) { return j * m - j * (j - 1) / 2 + (i - j); };
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            p(j * m + i, i >= j ? packed_index(i, j) : packed_index(j, i)) = 1.0;
    return p;
}

RMatrix expand_group(std::span<const double> packed, int group_size)
{
    const int m = group_size;
    if (m < 1 || static_cast<int>(packed.size()) != m * (m + 1) / 2)
        throw ConstraintViolation("expand_group: packed length must be M(M+1)/2");
    RMatrix out(m, m);
    size_t k = 0;
    for (int j = 0; j < m; ++j)
        for (int i = j; i < m; ++i)
        {
            out(i, j) = packed[k];
            out(j, i) = packed[k];
            ++k;
        }
    return out;
}

RMatrix expand_forest(std::span<const double> packed, int group_size)
{
    const int m = group_size;
    if (m < 1 || static_cast<int>(packed.size()) != 2 * m - 1)
        throw ConstraintViolation("expand_forest: packed length must be 2M-1");
    RMatrix out = RMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i)
        out(i, i) = packed[static_cast<size_t>(i)];
    for (int i = 0; i + 1 < m; ++i)
    {
        out(i, i + 1) = packed[static_cast<size_t>(m + i)];
        out(i + 1, i) = packed[static_cast<size_t>(m + i)];
    }
    return out;
}

RMatrix expand_packed(Architecture arch, std::span<const double> packed, int group_size)
{
    return arch == Architecture::GroupConnected ? expand_group(packed, group_size)
                                                : expand_forest(packed, group_size);
}

RMatrix component_matrix_to_port_matrix(const RMatrix &component)
{
    RMatrix port = -component;
    port.diagonal() = component.rowwise().sum();
    return port;
}

CMatrix AdmittanceMatrixSet::dense(int n) const
{
    const int m = topology.element_count;
    const int size = topology.group_size;
    CMatrix full = CMatrix::Zero(m, m);
    const auto &row = blocks.at(static_cast<size_t>(n));
    for (int g = 0; g < topology.group_count(); ++g)
        full.block(g * size, g * size, size, size) = row[static_cast<size_t>(g)];
    return full;
}

void check_center_susceptances(const RisTopology &topology, std::span<const double> b_c,
                               const LinearSusceptanceModel &model, bool check_range)
{
    if (static_cast<int>(b_c.size()) != topology.variable_count())
        throw ConstraintViolation("center susceptance vector has length " + std::to_string(b_c.size()) +
                                  ", topology expects " + std::to_string(topology.variable_count()));
    if (!check_range)
        return;
    for (size_t i = 0; i < b_c.size(); ++i)
        if (!(b_c[i] >= model.b_min && b_c[i] <= model.b_max))
            throw ConstraintViolation("center susceptance " + std::to_string(i) + " = " + std::to_string(b_c[i]) +
                                      " outside [B_min, B_max]");
}

RMatrix group_susceptance_block(const RisTopology &topology, std::span<const double> b_c_group, double slope,
                                double intercept)
{
    std::vector<double> scaled(b_c_group.size());
    for (size_t l = 0; l < b_c_group.size(); ++l)
        scaled[l] = slope * b_c_group[l] + intercept;
    // Forest groups: entries with |m - m'| > 1 stay exactly zero (no component there).
    return component_matrix_to_port_matrix(expand_packed(topology.architecture, scaled, topology.group_size));
}

AdmittanceMatrixSet assemble_admittance_set(const RisTopology &topology, std::span<const double> b_c,
                                            const LinearSusceptanceModel &model, const FrequencyGrid &grid,
                                            double y0)
{
    topology.validate();
    grid.validate();
    check_center_susceptances(topology, b_c, model);

    AdmittanceMatrixSet set;
    set.topology = topology;
    set.y0 = y0;
    const int per_group = topology.variables_per_group();
    set.blocks.resize(static_cast<size_t>(grid.subcarriers));
    for (int n = 0; n < grid.subcarriers; ++n)
    {
        const double w = grid.omega(n);
        auto &row = set.blocks[static_cast<size_t>(n)];
        row.reserve(static_cast<size_t>(topology.group_count()));
        for (int g = 0; g < topology.group_count(); ++g)
        {
            const auto group = b_c.subspan(static_cast<size_t>(g * per_group), static_cast<size_t>(per_group));
            const RMatrix b = group_susceptance_block(topology, group, model.slope(w), model.intercept(w));
            row.push_back(cdouble(0.0, 1.0) * b.cast<cdouble>());
        }
    }
    return set;
}

namespace
{

double condition_number(const CMatrix &a)
{
    Eigen::JacobiSVD<CMatrix> svd(a);
    const auto &s = svd.singularValues();
    const double smallest = s(s.size() - 1);
    return smallest > 0.0 ? s(0) / smallest : std::numeric_limits<double>::infinity();
}

} // namespace

CMatrix scattering_from_admittance(const CMatrix &admittance, double y0, double condition_ceiling)
{
    const auto m = admittance.rows();
    const CMatrix eye = CMatrix::Identity(m, m);
    const CMatrix plus = y0 * eye + admittance;
    if (condition_number(plus) > condition_ceiling)
        throw SingularityError("scattering_from_admittance: (Y0 I + Y) is singular to working precision");
    return plus.partialPivLu().solve(y0 * eye - admittance);
}

CMatrix scattering_matrix(const AdmittanceMatrixSet &set, int n, double condition_ceiling)
{
    const int m = set.topology.element_count;
    const int size = set.topology.group_size;
    CMatrix theta = CMatrix::Zero(m, m);
    const auto &row = set.blocks.at(static_cast<size_t>(n));
    for (int g = 0; g < set.topology.group_count(); ++g)
        theta.block(g * size, g * size, size, size) =
            scattering_from_admittance(row[static_cast<size_t>(g)], set.y0, condition_ceiling);
    return theta;
}

} // namespace bdris
