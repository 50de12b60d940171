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

#include "reflectkey/oracle.hpp"
#include "reflectkey/gauss.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <random>
#include <stdexcept>

namespace reflectkey
{

Eigen::MatrixXd random_spd_covariance(int d, std::uint64_t seed)
{
    if (d < 1)
        throw std::invalid_argument("Covariance dimension must be positive.");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            a(i, j) = normal(rng);
    return a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(d, d);
}

RowMatrix sample_gaussian(const Eigen::MatrixXd &cov, Eigen::Index n, std::uint64_t seed)
{
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("Covariance is not positive definite.");
    const Eigen::MatrixXd l = llt.matrixL();
    const Eigen::Index d = cov.rows();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    RowMatrix out(n, d);
    Eigen::VectorXd u(d);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        for (Eigen::Index j = 0; j < d; ++j)
            u(j) = normal(rng);
        out.row(i) = (l * u).transpose();
    }
    return out;
}

std::vector<OracleCase> run_oracle_suite(const OracleOptions &options,
                                         const std::function<void(const OracleCase &)> &on_case)
{
    if (options.cases < 1 || options.n < 2)
        throw std::invalid_argument("Oracle suite needs at least one case and two samples.");

    std::vector<OracleCase> out;
    for (int d : options.dims)
        for (int c = 0; c < options.cases; ++c)
        {
            const std::uint64_t case_seed = mix_seed(options.seed, static_cast<std::uint64_t>(1000 * d + c));
            const Eigen::MatrixXd cov = random_spd_covariance(d, case_seed);
            const RowMatrix x = sample_gaussian(cov, options.n, mix_seed(case_seed, 1));
            const double truth = gaussian_entropy(cov);

            for (const auto method : options.methods)
            {
                OracleCase result;
                result.dim = d;
                result.index = c;
                result.method = method;
                result.truth = truth;
                const EntropyEstimate e = method == EstimatorMethod::knn
                                              ? knn_entropy(x, options.k, mix_seed(case_seed, 2))
                                              : kde_entropy(x, options.bandwidth);
                result.estimate = e.value;
                result.std_error = e.std_error;
                result.z = (e.value - truth) / e.std_error;
                result.pass = std::abs(e.value - truth) <= options.tolerance * e.std_error;
                if (on_case)
                    on_case(result);
                out.push_back(result);
            }
        }
    return out;
}

} // namespace reflectkey
