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

#ifndef REFLECTKEY_ORACLE_HPP
#define REFLECTKEY_ORACLE_HPP

#include "reflectkey/estimators.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace reflectkey
{

// Gaussian reference suite for the entropy estimators: random SPD covariances with exactly
// known entropy, sampled and estimated.

struct OracleOptions
{
    std::vector<int> dims{1, 2, 3, 4};
    int cases = 20;          ///< covariances per dimension
    Eigen::Index n = 20000;  ///< samples per case
    std::vector<EstimatorMethod> methods{EstimatorMethod::knn, EstimatorMethod::kde};
    int k = 4;
    Bandwidth bandwidth = Bandwidth::silverman();
    double tolerance = 3.0;  ///< allowed |error| in standard errors
    std::uint64_t seed = 2026;
};

struct OracleCase
{
    int dim = 0;
    int index = 0;
    EstimatorMethod method = EstimatorMethod::knn;
    double truth = 0.0;    ///< closed-form entropy [bits]
    double estimate = 0.0; ///< [bits]
    double std_error = 0.0;
    double z = 0.0;        ///< (estimate - truth) / std_error
    bool pass = false;
};

/// Covariance A A^T + I/2 with A standard normal, d x d, drawn from the seed.
Eigen::MatrixXd random_spd_covariance(int d, std::uint64_t seed);

/// n zero-mean Gaussian rows with covariance cov.
RowMatrix sample_gaussian(const Eigen::MatrixXd &cov, Eigen::Index n, std::uint64_t seed);

/// Runs every (dim, case, method). Each case's covariance and samples depend only on
/// (options.seed, dim, index), so all methods see the same data.
std::vector<OracleCase> run_oracle_suite(const OracleOptions &options,
                                         const std::function<void(const OracleCase &)> &on_case = {});

} // namespace reflectkey

#endif
