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

#include "bdris/circuit_model.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace bdris
{

namespace
{

struct Line
{
    double slope = 0.0;
    double intercept = 0.0;
};

// Ordinary least squares y = slope * x + intercept, centered for conditioning.
Line least_squares_line(const std::vector<double> &x, const std::vector<double> &y)
{
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (size_t i = 0; i < x.size(); ++i)
    {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0)
        return {0.0, my};
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

std::vector<double> band_omegas(const FrequencyBand &band)
{
    std::vector<double> omegas(static_cast<size_t>(band.sample_count));
    for (int k = 0; k < band.sample_count; ++k)
    {
        const double f = band.sample_count == 1
                             ? band.f_lo
                             : band.f_lo + (band.f_hi - band.f_lo) * k / (band.sample_count - 1);
        omegas[static_cast<size_t>(k)] = two_pi * f;
    }
    return omegas;
}

std::vector<double> uniform_grid(double lo, double hi, int count)
{
    std::vector<double> grid(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        grid[static_cast<size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return grid;
}

} // namespace

void VaractorCircuit::validate() const
{
    if (!(l1 > 0.0) || !(l2 > 0.0))
        throw DomainError("VaractorCircuit: inductances must be positive");
    if (!(c_min > 0.0) || !(c_min < c_max))
        throw DomainError("VaractorCircuit: require 0 < c_min < c_max");
}

void FrequencyBand::validate() const
{
    if (sample_count < 1)
        throw DomainError("FrequencyBand: sample_count must be positive");
    if (!(f_lo > 0.0))
        throw DomainError("FrequencyBand: frequencies must be positive");
    if (sample_count == 1 ? f_hi < f_lo : !(f_lo < f_hi))
        throw DomainError("FrequencyBand: require f_lo < f_hi");
}

LinearSusceptanceModel LinearSusceptanceModel::frequency_flat() const
{
    LinearSusceptanceModel flat = *this;
    flat.alpha1 = 0.0;
    flat.beta1 = 1.0;
    flat.alpha2 = 0.0;
    flat.beta2 = 0.0;
    return flat;
}

void LinearSusceptanceModel::validate() const
{
    if (!(b_min < b_max))
        throw DomainError("LinearSusceptanceModel: require b_min < b_max");
    if (is_frequency_flat())
        return;
    const double f1 = slope(omega_c);
    const double f2 = intercept(omega_c);
    if (std::abs(f1 - 1.0) > 0.02)
        throw DomainError("LinearSusceptanceModel: F1(omega_c) = " + std::to_string(f1) + " is not within 2% of 1");
    if (std::abs(f2) > 0.02 * std::max(std::abs(b_min), std::abs(b_max)))
        throw DomainError("LinearSusceptanceModel: |F2(omega_c)| = " + std::to_string(std::abs(f2)) +
                          " exceeds 2% of the susceptance range");
}

cdouble circuit_admittance(const VaractorCircuit &circuit, double capacitance, double omega, double resonance_guard)
{
    if (!(omega > 0.0))
        throw DomainError("circuit_admittance: omega must be positive");
    if (!(capacitance > 0.0))
        throw DomainError("circuit_admittance: capacitance must be positive");
    const double detune = 1.0 - omega * omega * circuit.l2 * capacitance;
    if (std::abs(detune) < resonance_guard)
        throw ResonanceError("circuit_admittance: series branch L2-C at resonance");

    // 1/(j w L1) + 1/(j(w L2 - 1/(w C))) = j(-1/(w L1) + w C / (1 - w^2 L2 C))
    const double susceptance = -1.0 / (omega * circuit.l1) + omega * capacitance / detune;
    return {0.0, susceptance};
}

double capacitance_for_center_susceptance(const VaractorCircuit &circuit, double b_c, double omega_c)
{
    if (!(omega_c > 0.0))
        throw DomainError("capacitance_for_center_susceptance: omega_c must be positive");
    const double shifted = b_c + 1.0 / (omega_c * circuit.l1);
    if (shifted == 0.0)
        throw DomainError("capacitance_for_center_susceptance: b_c = -1/(omega_c L1) has no capacitance");
    const double capacitance = 1.0 / (omega_c * omega_c * circuit.l2 + omega_c / shifted);
    if (!std::isfinite(capacitance) || !(capacitance > 0.0))
        throw DomainError("capacitance_for_center_susceptance: b_c maps to a non-positive capacitance");
    return capacitance;
}

double exact_susceptance(const VaractorCircuit &circuit, double b_c, double omega, double omega_c,
                         double resonance_guard)
{
    if (!(omega > 0.0) || !(omega_c > 0.0))
        throw DomainError("exact_susceptance: frequencies must be positive");
    const double shifted = b_c + 1.0 / (omega_c * circuit.l1);
    const double dw2 = omega * omega - omega_c * omega_c;
    const double den_core = omega_c - dw2 * circuit.l2 * shifted;
    if (std::abs(den_core) < resonance_guard * omega_c)
        throw ResonanceError("exact_susceptance: shifted series resonance");
    const double num = (dw2 * circuit.l2 + omega * omega * circuit.l1) * shifted - omega_c;
    return num / (omega * circuit.l1 * den_core);
}

double linear_model_nmse(const LinearSusceptanceModel &model, const VaractorCircuit &circuit,
                         const FrequencyBand &band, int bc_grid_points)
{
    const auto omegas = band_omegas(band);
    const auto bcs = uniform_grid(model.b_min, model.b_max, bc_grid_points);
    double err = 0.0, ref = 0.0;
    for (double w : omegas)
        for (double bc : bcs)
        {
            const double exact = exact_susceptance(circuit, bc, w, model.omega_c);
            const double diff = exact - model.susceptance(bc, w);
            err += diff * diff;
            ref += exact * exact;
        }
    return ref > 0.0 ? err / ref : err;
}

FitResult fit_linear_model(const VaractorCircuit &circuit, double omega_c, const FrequencyBand &band,
                           const FitOptions &options)
{
    circuit.validate();
    band.validate();
    if (options.method == FitMethod::LeastSquares && options.bc_grid_points < 2)
        throw DomainError("fit_linear_model: need at least two b_c grid points");

    // C -> B at fixed omega_c is increasing, so the capacitor range endpoints give the range.
    const double b_min = circuit_admittance(circuit, circuit.c_min, omega_c, options.resonance_guard).imag();
    const double b_max = circuit_admittance(circuit, circuit.c_max, omega_c, options.resonance_guard).imag();

    const auto omegas = band_omegas(band);
    const auto bcs = uniform_grid(b_min, b_max, options.bc_grid_points);
    std::vector<double> slopes, intercepts;
    slopes.reserve(omegas.size());
    intercepts.reserve(omegas.size());

    for (double w : omegas)
    {
        Line line;
        if (options.method == FitMethod::EndpointSecant)
        {
            const double lo = exact_susceptance(circuit, b_min, w, omega_c, options.resonance_guard);
            const double hi = exact_susceptance(circuit, b_max, w, omega_c, options.resonance_guard);
            line.slope = (hi - lo) / (b_max - b_min);
            line.intercept = lo - line.slope * b_min;
        }
        else
        {
            std::vector<double> values(bcs.size());
            for (size_t i = 0; i < bcs.size(); ++i)
                values[i] = exact_susceptance(circuit, bcs[i], w, omega_c, options.resonance_guard);
            line = least_squares_line(bcs, values);
        }
        slopes.push_back(line.slope);
        intercepts.push_back(line.intercept);
    }

    const Line f1 = least_squares_line(omegas, slopes);
    const Line f2 = least_squares_line(omegas, intercepts);

    FitResult result;
    result.model = {f1.slope, f1.intercept, f2.slope, f2.intercept, omega_c, b_min, b_max};
    result.nmse = linear_model_nmse(result.model, circuit, band, std::max(options.bc_grid_points, 2));
    if (result.nmse > options.nmse_ceiling)
        throw FitQualityError("fit_linear_model: NMSE " + std::to_string(result.nmse) + " exceeds ceiling " +
                              std::to_string(options.nmse_ceiling));
    return result;
}

} // namespace bdris
