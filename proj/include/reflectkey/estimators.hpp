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

#ifndef REFLECTKEY_ESTIMATORS_HPP
#define REFLECTKEY_ESTIMATORS_HPP

#include "reflectkey/model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace reflectkey
{

// Nonparametric differential-entropy estimators.
//
// Both estimators whiten the sample with the Cholesky factor L of its sample covariance, estimate the
// entropy of the whitened points and add log|det L| back (h(AX + b) = h(X) + log|det A|).
//
// Standard errors come from splitting the sample into `folds` disjoint contiguous subsamples,
// estimating on each, and scaling the spread of the fold estimates by 1/sqrt(folds).

enum class EstimatorMethod
{
    knn,
    kde
};

std::string_view to_string(EstimatorMethod method);
EstimatorMethod parse_estimator_method(std::string_view name);

/// Kernel bandwidth in whitened coordinates: a named rule or a fixed value.
struct Bandwidth
{
    enum class Rule
    {
        silverman,
        scott,
        fixed
    };

    Rule rule = Rule::silverman;
    double value = 0.0; ///< only used with Rule::fixed

    static Bandwidth silverman() { return {Rule::silverman, 0.0}; }
    static Bandwidth scott() { return {Rule::scott, 0.0}; }
    static Bandwidth fixed(double h) { return {Rule::fixed, h}; }

    /// Resolves to a numeric bandwidth for n points in d dimensions.
    double resolve(Eigen::Index n, Eigen::Index d) const;
};

/// Parses "silverman", "scott" or a positive number.
Bandwidth parse_bandwidth(std::string_view text);
std::string to_string(const Bandwidth &bw);

struct EstimatorConfig
{
    EstimatorMethod method = EstimatorMethod::knn;
    int k = 4;
    Bandwidth bandwidth = Bandwidth::silverman();
    int folds = 10;
};

struct EntropyEstimate
{
    double value = 0.0;     ///< bits
    double std_error = 0.0; ///< bits, >= 0
    EstimatorMethod method = EstimatorMethod::knn;
    Eigen::Index n = 0;
    double hyperparameter = 0.0;  ///< k for knn, resolved bandwidth for kde
    int folds_used = 0;           ///< 0 when the sample was too small to resample
    std::size_t jitter_events = 0; ///< rows that needed tie-breaking jitter (knn)
};

/// Kozachenko-Leonenko estimator in the maximum norm:
///   H = psi(N) - psi(k) + (d/N) sum_i log(eps_i),
/// with eps_i twice the distance to the k-th neighbor (the unit-diameter max-norm ball has volume 1).
/// Requires N > k >= 1. Rows that coincide are separated by a deterministic jitter of relative size
/// 1e-12 seeded from `seed`.
EntropyEstimate knn_entropy(const RowMatrix &points, int k = 4, std::uint64_t seed = 0, int folds = 10);
EntropyEstimate knn_entropy(const SampleBatch &batch, int k = 4, int folds = 10);

/// Leave-one-out Gaussian-kernel resubstitution estimator, H = -(1/N) sum_i log p_{-i}(x_i).
/// Requires N >= 10 and a positive bandwidth.
EntropyEstimate kde_entropy(const RowMatrix &points, Bandwidth bandwidth = Bandwidth::silverman(), int folds = 10);
EntropyEstimate kde_entropy(const SampleBatch &batch, Bandwidth bandwidth = Bandwidth::silverman(), int folds = 10);

/// Entropy of a column projection with the configured estimator.
EntropyEstimate estimate_joint_entropy(const SampleBatch &batch, std::span<const Observation> cols,
                                       const EstimatorConfig &config);

} // namespace reflectkey

#endif
