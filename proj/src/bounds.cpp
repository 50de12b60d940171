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

#include "reflectkey/bounds.hpp"
#include "reflectkey/gauss.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace reflectkey
{

std::string_view to_string(Regime regime)
{
    switch (regime)
    {
    case Regime::no_csie:
        return "no_csie";
    case Regime::full_csie:
        return "full_csie";
    case Regime::no_eve:
        return "no_eve";
    }
    return "?";
}

Regime parse_regime(std::string_view name)
{
    if (name == "no_csie")
        return Regime::no_csie;
    if (name == "full_csie")
        return Regime::full_csie;
    if (name == "no_eve")
        return Regime::no_eve;
    throw std::invalid_argument("Unknown regime '" + std::string(name) + "' (expected no_csie, full_csie or no_eve).");
}

double BoundEstimate::combined_std_error() const
{
    return std::hypot(lower.std_error, upper.std_error);
}

namespace
{

constexpr Observation A = Observation::y_A;
constexpr Observation B = Observation::y_B;
constexpr Observation E3 = Observation::y_E3;
constexpr Observation E4 = Observation::y_E4;

double clamp_rate(double bits, BoundDiagnostics &diag)
{
    if (bits < 0.0)
    {
        ++diag.clamp_count;
        return 0.0;
    }
    return bits;
}

// Mean and standard error of the mean.
std::pair<double, double> mean_and_se(const std::vector<double> &v)
{
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v)
        mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    const double var = v.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

} // namespace

BoundEstimate bounds_no_eve(const ModelParams &params)
{
    BoundEstimate out;
    out.regime = Regime::no_eve;
    out.params = params;
    out.diagnostics.method = "gauss";
    const double capacity = sk_capacity_no_eve(params);
    out.lower = {capacity, 0.0};
    out.upper = {capacity, 0.0};
    return out;
}

namespace
{

// Entropy terms of both bounds from a batch over (y_A, y_B, y_E3, y_E4). h(y_A), h(y_B) and h(y_A, y_B)
// are exactly Gaussian and use closed forms.
void estimated_bounds(const SampleBatch &batch, const ModelParams &params, const EstimatorConfig &estimator,
                      BoundEstimate &out)
{
    auto &diag = out.diagnostics;
    auto estimate = [&](std::initializer_list<Observation> cols, const char *term) {
        try
        {
            const std::vector<Observation> list(cols);
            auto e = estimate_joint_entropy(batch, list, estimator);
            diag.jitter_events += e.jitter_events;
            return e;
        }
        catch (const std::exception &ex)
        {
            throw std::runtime_error(std::string("entropy term ") + term + ": " + ex.what());
        }
    };

    const auto h_e = estimate({E3, E4}, "h(y_E3,y_E4)");
    const auto h_ae = estimate({A, E3, E4}, "h(y_A,y_E3,y_E4)");
    const auto h_be = estimate({B, E3, E4}, "h(y_B,y_E3,y_E4)");
    const auto h_abe = estimate({A, B, E3, E4}, "h(y_A,y_B,y_E3,y_E4)");

    const auto legit = legitimate_covariance(params);
    const std::array<Observation, 1> only_a{A};
    const std::array<Observation, 1> only_b{B};
    const double h_a = gaussian_entropy(legit.sub(only_a));
    const double h_b = gaussian_entropy(legit.sub(only_b));
    const double h_ab = gaussian_entropy(legit);

    const double upper = h_ae.value + h_be.value - h_abe.value - h_e.value;
    const double upper_se = std::sqrt(h_ae.std_error * h_ae.std_error + h_be.std_error * h_be.std_error +
                                      h_abe.std_error * h_abe.std_error + h_e.std_error * h_e.std_error);

    // I(A;B) - I(A;E3,E4), and the same with Bob's observation; equal in distribution.
    const double lower_alice = h_b - h_ab - h_e.value + h_ae.value;
    const double lower_bob = h_a - h_ab - h_e.value + h_be.value;
    const double lower_se = std::hypot(h_e.std_error, h_ae.std_error);

    diag.symmetry_gap = lower_alice - lower_bob;
    diag.symmetry_ok = std::abs(diag.symmetry_gap) <= 3.0 * std::hypot(h_ae.std_error, h_be.std_error);

    out.upper = {clamp_rate(upper, diag), upper_se};
    out.lower = {clamp_rate(lower_alice, diag), lower_se};
}

} // namespace

BoundEstimate bounds_no_csie(const ModelParams &params, std::size_t n, std::uint64_t seed,
                             const EstimatorConfig &estimator)
{
    params.validate();
    if (n < 1000)
        throw std::invalid_argument("No-CSIE bounds need at least 1000 samples.");

    BoundEstimate out;
    out.regime = Regime::no_csie;
    out.params = params;
    out.seed = seed;
    out.diagnostics.n_samples = n;
    out.diagnostics.method = std::string(to_string(estimator.method));
    estimated_bounds(sample_observations(params, n, seed), params, estimator, out);
    return out;
}

BoundEstimate bounds_given_eve_csi(const ModelParams &params, double h_ae, double h_be)
{
    BoundEstimate out;
    out.regime = Regime::full_csie;
    out.params = params;
    out.diagnostics.method = "gauss";
    const std::array<Observation, 1> a{A};
    const std::array<Observation, 1> b{B};
    const std::array<Observation, 2> eve{E3, E4};
    const auto cov = build_conditional_covariance(params, h_ae, h_be, all_observations);
    const double upper = gaussian_conditional_mi(cov, a, b, eve);
    const double lower = gaussian_mi(cov, a, b) - gaussian_mi(cov, a, eve);
    out.upper = {clamp_rate(upper, out.diagnostics), 0.0};
    out.lower = {clamp_rate(lower, out.diagnostics), 0.0};
    return out;
}

BoundEstimate bounds_given_eve_csi_estimated(const ModelParams &params, double h_ae, double h_be, std::size_t n,
                                             std::uint64_t seed, const EstimatorConfig &estimator)
{
    params.validate();
    if (n < 1000)
        throw std::invalid_argument("Estimated conditional bounds need at least 1000 samples.");

    BoundEstimate out;
    out.regime = Regime::full_csie;
    out.params = params;
    out.seed = seed;
    out.diagnostics.n_samples = n;
    out.diagnostics.method = std::string(to_string(estimator.method));
    estimated_bounds(sample_observations_given_eve_csi(params, h_ae, h_be, n, seed), params, estimator, out);
    return out;
}

BoundEstimate bounds_full_csie(const ModelParams &params, std::size_t n_channel_draws, std::uint64_t seed)
{
    params.validate();
    if (n_channel_draws < 100)
        throw std::invalid_argument("Full-CSIE bounds need at least 100 channel draws.");

    BoundEstimate out;
    out.regime = Regime::full_csie;
    out.params = params;
    out.seed = seed;
    auto &diag = out.diagnostics;
    diag.n_channel_draws = n_channel_draws;
    diag.method = "gauss";

    const std::array<Observation, 1> a{A};
    const std::array<Observation, 1> b{B};
    const std::array<Observation, 2> eve{E3, E4};

    const double mi_ab = gaussian_mi(legitimate_covariance(params), a, b);

    const auto draws = sample_channels(params, n_channel_draws, seed);
    std::vector<double> secret(draws.size()), leak_alice(draws.size()), leak_bob(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i)
    {
        const auto cov = build_conditional_covariance(params, draws[i].h_ae, draws[i].h_be, all_observations);
        secret[i] = gaussian_conditional_mi(cov, a, b, eve);
        leak_alice[i] = gaussian_mi(cov, a, eve);
        leak_bob[i] = gaussian_mi(cov, b, eve);
    }

    const auto [upper, upper_se] = mean_and_se(secret);
    const auto [leak, leak_se] = mean_and_se(leak_alice);
    const auto [leak_b, leak_b_se] = mean_and_se(leak_bob);

    diag.symmetry_gap = leak_b - leak;
    diag.symmetry_ok = std::abs(diag.symmetry_gap) <= 3.0 * std::hypot(leak_se, leak_b_se);

    out.upper = {clamp_rate(upper, diag), upper_se};
    out.lower = {clamp_rate(mi_ab - leak, diag), leak_se};
    return out;
}

std::uint64_t point_seed(std::uint64_t run_seed)
{
    return run_seed;
}

std::vector<BoundEstimate> sweep(std::span<const ModelParams> grid, Regime regime, const SweepSettings &settings)
{
    if (grid.empty())
        throw std::invalid_argument("Sweep grid is empty.");

    std::vector<BoundEstimate> results(grid.size());
    std::mutex report_mutex;
    auto evaluate = [&](std::size_t i) {
        const ModelParams &p = grid[i];
        const std::uint64_t seed = point_seed(settings.seed);
        try
        {
            switch (regime)
            {
            case Regime::no_eve:
                results[i] = bounds_no_eve(p);
                break;
            case Regime::no_csie:
                results[i] = bounds_no_csie(p, settings.n_samples, seed, settings.estimator);
                break;
            case Regime::full_csie:
                results[i] = bounds_full_csie(p, settings.n_channel_draws, seed);
                break;
            }
            results[i].seed = seed;
        }
        catch (const std::exception &ex)
        {
            BoundEstimate failed;
            failed.regime = regime;
            failed.params = p;
            failed.seed = seed;
            const double nan = std::numeric_limits<double>::quiet_NaN();
            failed.lower = {nan, nan};
            failed.upper = {nan, nan};
            failed.diagnostics.n_samples = regime == Regime::no_csie ? settings.n_samples : 0;
            failed.diagnostics.n_channel_draws = regime == Regime::full_csie ? settings.n_channel_draws : 0;
            failed.diagnostics.method = regime == Regime::no_csie ? std::string(to_string(settings.estimator.method))
                                                                  : std::string("gauss");
            failed.diagnostics.error = ex.what();
            results[i] = std::move(failed);
        }
        if (settings.on_point)
        {
            std::lock_guard lock(report_mutex);
            settings.on_point(i, results[i]);
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(settings.workers, static_cast<unsigned>(grid.size())));
    if (workers == 1)
    {
        for (std::size_t i = 0; i < grid.size(); ++i)
            evaluate(i);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < grid.size(); i = next++)
                evaluate(i);
        });
    pool.clear(); // joins
    return results;
}

} // namespace reflectkey
