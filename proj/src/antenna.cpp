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

#include "reflectkey/antenna.hpp"

#include <cmath>
#include <stdexcept>

namespace reflectkey::antenna
{

void AntennaCircuit::validate() const
{
    if (!(r_rad > 0.0) || !std::isfinite(r_rad))
        throw std::invalid_argument("Radiation resistance must be positive.");
    if (!(r_loss >= 0.0) || !std::isfinite(r_loss))
        throw std::invalid_argument("Loss resistance must be non-negative.");
    if (!(v_oc > 0.0) || !std::isfinite(v_oc))
        throw std::invalid_argument("Open-circuit voltage must be positive.");
    if (!std::isfinite(x_a))
        throw std::invalid_argument("Antenna reactance must be finite.");
}

AntennaCircuit matched_load(const AntennaCircuit &circuit)
{
    circuit.validate();
    AntennaCircuit out = circuit;
    out.z_load = std::conj(circuit.impedance());
    return out;
}

PowerBreakdown power_breakdown(const AntennaCircuit &circuit)
{
    circuit.validate();
    const std::complex<double> match = std::conj(circuit.impedance());
    if (std::abs(circuit.z_load - match) > 1e-12 * std::abs(match))
        throw std::invalid_argument("Power breakdown requires a conjugate-matched load (Z_L = Z_A*).");

    const double r = circuit.r_loss + circuit.r_rad;
    const double v2 = circuit.v_oc * circuit.v_oc;

    PowerBreakdown out;
    // P_l and P_r are P_L scaled by R_l / R and R_r / R.
    out.p_load = v2 / (8.0 * r);
    out.p_diss = out.p_load * (circuit.r_loss / r);
    out.p_rerad = out.p_load * (circuit.r_rad / r);
    out.p_total = out.p_load + out.p_diss + out.p_rerad;
    out.ratio = out.p_rerad / out.p_total;
    return out;
}

double suggest_alpha(double ratio, double coupling)
{
    if (!(ratio >= 0.0 && ratio <= 0.5))
        throw std::invalid_argument("Re-radiation ratio must lie in [0, 1/2].");
    if (!(coupling >= 0.0 && coupling <= 1.0))
        throw std::invalid_argument("Coupling factor must lie in [0, 1].");
    return coupling * std::sqrt(ratio);
}

} // namespace reflectkey::antenna
