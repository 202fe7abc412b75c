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

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bdris
{

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reference admittance used for port normalization (50 ohm).
inline constexpr double default_characteristic_admittance = 1.0 / 50.0;

// Error hierarchy. Everything the library throws derives from bdris::Error so callers
// (e.g. the experiment runner) can record a failure per result row and continue.

struct Error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Series branch of a tunable component is at (or numerically near) resonance.
struct ResonanceError : Error
{
    using Error::Error;
};

/// Input outside the mathematical domain of a closed-form expression.
struct DomainError : Error
{
    using Error::Error;
};

/// The linear susceptance model does not approximate the circuit well enough.
struct FitQualityError : Error
{
    using Error::Error;
};

/// (Y0 I + Y) is too badly conditioned to invert.
struct SingularityError : Error
{
    using Error::Error;
};

/// A center susceptance lies outside [B_min, B_max], or a vector has the wrong shape.
struct ConstraintViolation : Error
{
    using Error::Error;
};

/// Dense oracle instance exceeds the supported size.
struct InstanceTooLarge : Error
{
    using Error::Error;
};

/// Greedy block codebook would exceed the enumeration ceiling.
struct EnumerationCeilingExceeded : Error
{
    using Error::Error;
};

/// Every subcarrier channel is zero; no water level exists.
struct AllZeroChannelError : Error
{
    using Error::Error;
};

/// Optimizer could not produce a finite objective.
struct SolverError : Error
{
    using Error::Error;
};

/// Scenario configuration could not be parsed or validated.
struct ConfigError : Error
{
    using Error::Error;
};

} // namespace bdris
