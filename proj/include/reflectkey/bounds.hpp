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

#ifndef REFLECTKEY_BOUNDS_HPP
#define REFLECTKEY_BOUNDS_HPP

#include "reflectkey/estimators.hpp"
#include "reflectkey/model.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reflectkey
{

/// What Eve knows.
///   no_csie   - Eve observes y_E3, y_E4 but not her own channel coefficients.
///   full_csie - Eve additionally knows h_AE and h_BE.
///   no_eve    - reference case without reflections reaching an eavesdropper.
enum class Regime
{
    no_csie,
    full_csie,
    no_eve
};

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view name);

struct RateEstimate
{
    double bits = 0.0;
    double std_error = 0.0;
};

struct BoundDiagnostics
{
    std::size_t n_samples = 0;       ///< observation draws (no_csie)
    std::size_t n_channel_draws = 0; ///< Monte Carlo draws of Eve's channel (full_csie)
    std::string method;              ///< knn, kde or gauss (closed form only)
    std::size_t clamp_count = 0;     ///< rates raised to zero
    std::size_t jitter_events = 0;   ///< kNN tie-breaking events over all estimated terms
    /// Difference between the Alice-side and Bob-side leakage forms of the lower bound, in bits.
    /// Both are evaluated; the Alice-side form is reported.
    double symmetry_gap = 0.0;
    bool symmetry_ok = true;
    std::string error; ///< empty unless the point failed
};

struct BoundEstimate
{
    RateEstimate lower;
    RateEstimate upper;
    Regime regime = Regime::no_eve;
    ModelParams params;
    std::uint64_t seed = 0;
    BoundDiagnostics diagnostics;

    bool ok() const { return diagnostics.error.empty(); }
    /// sqrt(lower.std_error^2 + upper.std_error^2)
    double combined_std_error() const;
};

/// Closed-form reference: both bounds equal the no-eavesdropper capacity.
BoundEstimate bounds_no_eve(const ModelParams &params);

/// Bounds when Eve does not know h_AE, h_BE. Joint entropies involving y_E3/y_E4 are estimated from
/// n samples; h(y_B) and h(y_A, y_B) are exactly Gaussian and use closed forms.
///   upper = h(A,E3,E4) + h(B,E3,E4) - h(A,B,E3,E4) - h(E3,E4)
///   lower = h(B) - h(A,B) - h(E3,E4) + h(A,E3,E4)
/// Standard errors are the root-sum-square of the estimated terms. Requires n >= 1000.
BoundEstimate bounds_no_csie(const ModelParams &params, std::size_t n, std::uint64_t seed,
                             const EstimatorConfig &estimator = {});

/// Bounds when Eve knows h_AE, h_BE. Conditioned on them the observations are Gaussian, so each
/// Monte Carlo draw of Eve's channel is evaluated exactly and the draws are averaged.
///   upper = E[ I(A; B | E3, E4, h) ]
///   lower = I(A; B) - E[ I(A; E3, E4 | h) ]
/// Standard errors are those of the Monte Carlo means. Requires n_channel_draws >= 100.
BoundEstimate bounds_full_csie(const ModelParams &params, std::size_t n_channel_draws, std::uint64_t seed);

/// Bounds for one fixed realization (h_ae, h_be) of Eve's channel, from exact log-determinants:
///   upper = I(A; B | E3, E4),  lower = I(A; B) - I(A; E3, E4).
BoundEstimate bounds_given_eve_csi(const ModelParams &params, double h_ae, double h_be);

/// The same two quantities estimated from n conditioned samples, with the no-CSIE term policy:
/// h(y_A) and h(y_A, y_B) closed form, every joint with y_E3/y_E4 estimated. Requires n >= 1000.
BoundEstimate bounds_given_eve_csi_estimated(const ModelParams &params, double h_ae, double h_be, std::size_t n,
                                             std::uint64_t seed, const EstimatorConfig &estimator = {});

struct SweepSettings
{
    std::size_t n_samples = 100000;
    std::size_t n_channel_draws = 1000;
    std::uint64_t seed = 1;
    EstimatorConfig estimator;
    unsigned workers = 1;
    /// Called once per finished point, serialized, in completion order.
    std::function<void(std::size_t index, const BoundEstimate &result)> on_point;
};

/// Seed used for a grid point. Every point of a sweep shares the random numbers of the run seed,
/// so points with equal parameters give identical results wherever they sit in a grid.
std::uint64_t point_seed(std::uint64_t run_seed);

/// Evaluates every grid point independently, in parallel when workers > 1. Results follow grid
/// order. A failing point carries its message in diagnostics.error and NaN rates.
std::vector<BoundEstimate> sweep(std::span<const ModelParams> grid, Regime regime, const SweepSettings &settings);

} // namespace reflectkey

#endif
