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

#include "bdris/optimizer.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace bdris
{

namespace
{

// (row, column) of the component behind each packed variable of one group.
std::vector<std::pair<int, int>> packed_positions(const RisTopology &topology)
{
    std::vector<std::pair<int, int>> pos;
    const int m = topology.group_size;
    if (topology.architecture == Architecture::GroupConnected)
    {
        for (int j = 0; j < m; ++j)
            for (int i = j; i < m; ++i)
                pos.emplace_back(i, j);
    }
    else
    {
        for (int i = 0; i < m; ++i)
            pos.emplace_back(i, i);
        for (int i = 0; i + 1 < m; ++i)
            pos.emplace_back(i, i + 1);
    }
    return pos;
}

// Small groups use inline storage so the inner loop never allocates.
constexpr int inline_group_limit = 8;
using SmallMatrix = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, 0, inline_group_limit, inline_group_limit>;
using SmallVector = Eigen::Matrix<cdouble, Eigen::Dynamic, 1, 0, inline_group_limit, 1>;

template <class Matrix>
void fill_port_admittance(Matrix &a, const std::vector<std::pair<int, int>> &pos, std::span<const double> b_c_group,
                          double slope, double intercept, double y0)
{
    a.setZero();
    for (size_t l = 0; l < pos.size(); ++l)
    {
        const double b = slope * b_c_group[l] + intercept;
        const auto [i, j] = pos[l];
        if (i == j)
            a(i, i) += cdouble(0.0, b);
        else
        {
            a(i, j) -= cdouble(0.0, b);
            a(j, i) -= cdouble(0.0, b);
            a(i, i) += cdouble(0.0, b);
            a(j, j) += cdouble(0.0, b);
        }
    }
    a.diagonal().array() += y0;
}

struct GroupScratch
{
    std::vector<cdouble> u; // A^-1 y_RI^T per (n, element)
    std::vector<cdouble> v; // A^-1 y_IT per (n, element)
};

// Computes t_{g,n} for all n and optionally stores u, v for the gradient.
template <class Matrix, class Vector>
void group_pass(const SumGainProblem &p, const std::vector<std::pair<int, int>> &pos, const std::vector<double> &slopes,
                const std::vector<double> &intercepts, int g, std::span<const double> b_c_group,
                std::span<cdouble> terms, GroupScratch *scratch)
{
    const int size = p.topology.group_size;
    const int n_sc = p.subcarrier_count();
    const double y0 = p.channels.y0;
    Matrix a(size, size);
    Vector rhs(size), v(size), u(size);
    for (int n = 0; n < n_sc; ++n)
    {
        fill_port_admittance(a, pos, b_c_group, slopes[static_cast<size_t>(n)], intercepts[static_cast<size_t>(n)], y0);
        const Eigen::PartialPivLU<Matrix> lu(a);
        if (!(lu.rcond() * p.condition_ceiling >= 1.0))
            throw SingularityError("sum_gain: (j B + Y0 I) of group " + std::to_string(g) + " is singular");
        rhs = p.channels.y_it.row(n).segment(g * size, size).transpose();
        v = lu.solve(rhs);
        const auto a_row = p.channels.y_ri.row(n).segment(g * size, size);
        terms[static_cast<size_t>(n)] = (a_row * v)(0, 0);
        if (scratch)
        {
            // (j B + Y0 I) is complex symmetric, so y_RI A^-1 = (A^-1 y_RI^T)^T.
            rhs = a_row.transpose();
            u = lu.solve(rhs);
            for (int e = 0; e < size; ++e)
            {
                scratch->u[static_cast<size_t>(n * size + e)] = u(e);
                scratch->v[static_cast<size_t>(n * size + e)] = v(e);
            }
        }
    }
}

} // namespace

SumGainProblem SumGainProblem::make(AdmittanceChannels channels, const RisTopology &topology,
                                    const LinearSusceptanceModel &model, const FrequencyGrid &grid)
{
    SumGainProblem p;
    p.channels = std::move(channels);
    p.topology = topology;
    p.model = model;
    p.omegas = grid.omegas();
    p.validate();
    return p;
}

SumGainProblem SumGainProblem::with_frequency_flat_model() const
{
    SumGainProblem flat = *this;
    flat.model = model.frequency_flat();
    return flat;
}

void SumGainProblem::validate() const
{
    topology.validate();
    const auto n = static_cast<Eigen::Index>(omegas.size());
    if (channels.y_rt.size() != n || channels.y_ri.rows() != n || channels.y_it.rows() != n)
        throw ConstraintViolation("SumGainProblem: channel subcarrier count disagrees with the frequency grid");
    if (channels.y_ri.cols() != topology.element_count || channels.y_it.cols() != topology.element_count)
        throw ConstraintViolation("SumGainProblem: channel element count disagrees with the topology");
    if (!(model.b_min < model.b_max))
        throw ConstraintViolation("SumGainProblem: empty susceptance range");
}

SumGainEvaluator::SumGainEvaluator(const SumGainProblem &problem) : problem_(&problem)
{
    problem.validate();
    for (double w : problem.omegas)
    {
        slopes_.push_back(problem.model.slope(w));
        intercepts_.push_back(problem.model.intercept(w));
    }
}

void SumGainEvaluator::group_terms(int group, std::span<const double> b_c_group, std::span<cdouble> out) const
{
    const auto pos = packed_positions(problem_->topology);
    if (problem_->topology.group_size <= inline_group_limit)
        group_pass<SmallMatrix, SmallVector>(*problem_, pos, slopes_, intercepts_, group, b_c_group, out, nullptr);
    else
        group_pass<CMatrix, CVector>(*problem_, pos, slopes_, intercepts_, group, b_c_group, out, nullptr);
}

CVector SumGainEvaluator::combined_terms(std::span<const double> b_c) const
{
    const auto &topo = problem_->topology;
    check_center_susceptances(topo, b_c, problem_->model, false);
    const int n_sc = problem_->subcarrier_count();
    const int per_group = topo.variables_per_group();
    CVector c = -problem_->channels.y_rt;
    std::vector<cdouble> terms(static_cast<size_t>(n_sc));
    for (int g = 0; g < topo.group_count(); ++g)
    {
        group_terms(g, b_c.subspan(static_cast<size_t>(g * per_group), static_cast<size_t>(per_group)), terms);
        for (int n = 0; n < n_sc; ++n)
            c(n) += terms[static_cast<size_t>(n)];
    }
    return c;
}

double SumGainEvaluator::value(std::span<const double> b_c) const
{
    return combined_terms(b_c).squaredNorm();
}

CVector SumGainEvaluator::effective_channels(std::span<const double> b_c) const
{
    return combined_terms(b_c) / (2.0 * problem_->channels.y0);
}

double SumGainEvaluator::value_and_gradient(std::span<const double> b_c, std::span<double> gradient) const
{
    const auto &topo = problem_->topology;
    check_center_susceptances(topo, b_c, problem_->model, false);
    if (gradient.size() != b_c.size())
        throw ConstraintViolation("value_and_gradient: gradient length mismatch");

    const int n_sc = problem_->subcarrier_count();
    const int size = topo.group_size;
    const int groups = topo.group_count();
    const int per_group = topo.variables_per_group();
    const auto pos = packed_positions(topo);

    std::vector<GroupScratch> scratch(static_cast<size_t>(groups));
    CVector c = -problem_->channels.y_rt;
    std::vector<cdouble> terms(static_cast<size_t>(n_sc));
    for (int g = 0; g < groups; ++g)
    {
        auto &s = scratch[static_cast<size_t>(g)];
        s.u.resize(static_cast<size_t>(n_sc * size));
        s.v.resize(static_cast<size_t>(n_sc * size));
        const auto group = b_c.subspan(static_cast<size_t>(g * per_group), static_cast<size_t>(per_group));
        if (size <= inline_group_limit)
            group_pass<SmallMatrix, SmallVector>(*problem_, pos, slopes_, intercepts_, g, group, terms, &s);
        else
            group_pass<CMatrix, CVector>(*problem_, pos, slopes_, intercepts_, g, group, terms, &s);
        for (int n = 0; n < n_sc; ++n)
            c(n) += terms[static_cast<size_t>(n)];
    }

    // dc_n = -j F1(w_n) u^T dB v. A component (i, j) with i != j perturbs the port matrix by
    // +1 on (i,i),(j,j) and -1 on (i,j),(j,i), giving (u_i - u_j)(v_i - v_j); a grounded one gives u_i v_i.
    std::fill(gradient.begin(), gradient.end(), 0.0);
    for (int g = 0; g < groups; ++g)
    {
        const auto &s = scratch[static_cast<size_t>(g)];
        for (int n = 0; n < n_sc; ++n)
        {
            const cdouble weight = std::conj(c(n)) * cdouble(0.0, -slopes_[static_cast<size_t>(n)]);
            const cdouble *u = &s.u[static_cast<size_t>(n * size)];
            const cdouble *v = &s.v[static_cast<size_t>(n * size)];
            for (size_t l = 0; l < pos.size(); ++l)
            {
                const auto [i, j] = pos[l];
                const cdouble t = i == j ? u[i] * v[i] : (u[i] - u[j]) * (v[i] - v[j]);
                gradient[static_cast<size_t>(g * per_group) + l] += 2.0 * (weight * t).real();
            }
        }
    }
    return c.squaredNorm();
}

double sum_gain(const SumGainProblem &problem, std::span<const double> b_c)
{
    check_center_susceptances(problem.topology, b_c, problem.model);
    return SumGainEvaluator(problem).value(b_c);
}

double box_map(double x, double b_min, double b_max)
{
    const double half = 0.5 * (b_max - b_min);
    const double mid = 0.5 * (b_max + b_min);
    if (std::isinf(x))
        return x > 0 ? b_max : b_min;
    const double r = x / half;
    return x / std::sqrt(r * r + 1.0) + mid;
}

double box_map_derivative(double x, double b_min, double b_max)
{
    const double half = 0.5 * (b_max - b_min);
    const double r = x / half;
    const double q = r * r + 1.0;
    return 1.0 / (q * std::sqrt(q));
}

double box_map_inverse(double b, double b_min, double b_max)
{
    const double half = 0.5 * (b_max - b_min);
    const double mid = 0.5 * (b_max + b_min);
    const double t = (b - mid) / half; // in (-1, 1)
    if (!(std::abs(t) < 1.0))
        throw DomainError("box_map_inverse: value outside the open interval (b_min, b_max)");
    return half * t / std::sqrt(1.0 - t * t);
}

} // namespace bdris
