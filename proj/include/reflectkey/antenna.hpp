// SPDX-License-Identifier: Apache-2.0
//
// reflectkey: secret-key rate bounds for reciprocal channels with antenna reflections
// Copyright (C) 2026 The reflectkey authors
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

#ifndef REFLECTKEY_ANTENNA_HPP
#define REFLECTKEY_ANTENNA_HPP

#include <complex>

namespace reflectkey::antenna
{

// Thevenin model of a receiving antenna: source V_OC in series with Z_A = R_l + R_r + jX_A,
// terminated by Z_L. Only the re-radiated part of the scattered power is modelled; the
// structural (open-circuit) scattering of the antenna body has no scalar circuit equivalent.

struct AntennaCircuit
{
    double r_loss = 0.0;             ///< loss resistance R_l [ohm], >= 0
    double r_rad = 50.0;             ///< radiation resistance R_r [ohm], > 0
    double x_a = 0.0;                ///< antenna reactance X_A [ohm]
    std::complex<double> z_load{};   ///< load impedance Z_L [ohm]
    double v_oc = 1.0;               ///< open-circuit voltage amplitude V_OC [V], > 0

    std::complex<double> impedance() const { return {r_loss + r_rad, x_a}; }

    /// Throws std::invalid_argument naming the violated invariant.
    void validate() const;
};

struct PowerBreakdown
{
    double p_load = 0.0;  ///< delivered to the load [W]
    double p_diss = 0.0;  ///< dissipated in R_l [W]
    double p_rerad = 0.0; ///< re-radiated through R_r [W]
    double p_total = 0.0; ///< p_load + p_diss + p_rerad [W]
    double ratio = 0.0;   ///< re-radiation ratio p_rerad / p_total, in (0, 1/2]
};

/// Copy of the circuit with Z_L set to the conjugate match Z_A* = R_l + R_r - jX_A.
AntennaCircuit matched_load(const AntennaCircuit &circuit);

/// Power split under conjugate match:
///   P_L = V^2 / (8 R),  P_l = V^2 R_l / (8 R^2),  P_r = V^2 R_r / (8 R^2),  R = R_l + R_r.
/// Throws std::invalid_argument if Z_L is not the conjugate of Z_A (relative tolerance 1e-12).
PowerBreakdown power_breakdown(const AntennaCircuit &circuit);

/// Heuristic amplitude reflection coefficient alpha = coupling * sqrt(ratio).
/// This bridge from a power ratio to the channel model's alpha is a modelling choice with a
/// user-supplied coupling factor, not a derived result. Requires 0 <= ratio <= 1/2 and
/// 0 <= coupling <= 1.
double suggest_alpha(double ratio, double coupling);

} // namespace reflectkey::antenna

#endif
