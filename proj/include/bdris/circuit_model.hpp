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

namespace bdris
{

/// Lumped model of one tunable admittance: inductor L1 in parallel with the series
/// branch L2 + C, where C is a varactor tunable within [c_min, c_max].
struct VaractorCircuit
{
    double l1 = 2.5e-9;     // H
    double l2 = 0.7e-9;     // H
    double c_min = 0.2e-12; // F
    double c_max = 3.0e-12; // F

    /// Throws DomainError unless l1 > 0, l2 > 0 and 0 < c_min < c_max.
    void validate() const;
};

/// Frequency window (in hertz) sampled uniformly when fitting the linear model.
struct FrequencyBand
{
    double f_lo = 2.25e9;
    double f_hi = 2.55e9;
    int sample_count = 61;

    void validate() const;
};

/// Susceptance of a component at angular frequency w, given its value b_c at the center
/// frequency:  B(b_c, w) = F1(w) * b_c + F2(w),  F1(w) = alpha1 w + beta1,  F2(w) = alpha2 w + beta2.
struct LinearSusceptanceModel
{
    double alpha1 = 0.0; // s
    double beta1 = 1.0;
    double alpha2 = 0.0; // S*s
    double beta2 = 0.0;  // S
    double omega_c = 0.0;
    double b_min = 0.0; // S
    double b_max = 0.0; // S

    double slope(double omega) const { return alpha1 * omega + beta1; }
    double intercept(double omega) const { return alpha2 * omega + beta2; }
    double susceptance(double b_c, double omega) const { return slope(omega) * b_c + intercept(omega); }

    /// F1 = 1, F2 = 0 everywhere: the narrowband (frequency-independent) model.
    bool is_frequency_flat() const { return alpha1 == 0.0 && beta1 == 1.0 && alpha2 == 0.0 && beta2 == 0.0; }

    /// Same susceptance range, but with F1 = 1 and F2 = 0 at every frequency.
    LinearSusceptanceModel frequency_flat() const;

    /// Checks b_min < b_max and narrowband consistency at omega_c:
    /// |F1(omega_c) - 1| <= 2 % and |F2(omega_c)| <= 2 % of max(|b_min|, |b_max|).
    void validate() const;
};

/// How the slope and intercept of B versus b_c are extracted at each fit frequency.
enum class FitMethod
{
    EndpointSecant, ///< line through the two range endpoints b_min and b_max
    LeastSquares    ///< ordinary least squares over a uniform b_c grid
};

struct FitOptions
{
    FitMethod method = FitMethod::EndpointSecant;
    int bc_grid_points = 64;
    double nmse_ceiling = 0.01;
    double resonance_guard = 1e-9;
};

struct FitResult
{
    LinearSusceptanceModel model;
    double nmse = 0.0; ///< over the b_c grid x band grid, sum |exact - fit|^2 / sum |exact|^2
};

/// Y = 1/(j w L1) + 1/(j w L2 + 1/(j w C)). Purely imaginary.
/// Throws ResonanceError when |1 - w^2 L2 C| < resonance_guard.
cdouble circuit_admittance(const VaractorCircuit &circuit, double capacitance, double omega,
                           double resonance_guard = 1e-9);

/// Inverse of circuit_admittance at omega_c: the capacitance whose susceptance at omega_c is b_c.
double capacitance_for_center_susceptance(const VaractorCircuit &circuit, double b_c, double omega_c);

/// Closed-form susceptance at omega of the component tuned to b_c at omega_c.
double exact_susceptance(const VaractorCircuit &circuit, double b_c, double omega, double omega_c,
                         double resonance_guard = 1e-9);

/// Fits the linear model over the band. b_min/b_max are the susceptances of c_min/c_max at
/// omega_c. Throws FitQualityError when the NMSE exceeds options.nmse_ceiling.
FitResult fit_linear_model(const VaractorCircuit &circuit, double omega_c, const FrequencyBand &band,
                           const FitOptions &options = {});

/// NMSE of a linear model against the exact circuit response on a b_c x band grid.
double linear_model_nmse(const LinearSusceptanceModel &model, const VaractorCircuit &circuit,
                         const FrequencyBand &band, int bc_grid_points = 64);

inline double linear_susceptance(const LinearSusceptanceModel &model, double b_c, double omega)
{
    return model.susceptance(b_c, omega);
}

} // namespace bdris
