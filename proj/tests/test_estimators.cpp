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

#include "catch_amalgamated.hpp"
#include "reflectkey/estimators.hpp"
#include "reflectkey/gauss.hpp"
#include "reflectkey/oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>

// Covered tests:
// - kNN on Gaussian and uniform samples
// - KDE on Gaussian and uniform samples, scale equivariance
// - Joint entropy of exactly Gaussian model columns
// - Translation invariance, k robustness, stabilization with N
// - Tie handling, bandwidth rules, input checks

using namespace reflectkey;
using Catch::Approx;

namespace
{

const double h1 = 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e);

RowMatrix standard_normal(Eigen::Index n, Eigen::Index d, std::uint64_t seed)
{
    return sample_gaussian(Eigen::MatrixXd::Identity(d, d), n, seed);
}

RowMatrix uniform01(Eigen::Index n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RowMatrix x(n, 1);
    for (Eigen::Index i = 0; i < n; ++i)
        x(i, 0) = unit(rng);
    return x;
}

bool within(const EntropyEstimate &e, double truth, double sigmas)
{
    return std::abs(e.value - truth) <= sigmas * e.std_error;
}

} // namespace

TEST_CASE("Estimators - kNN reference values")
{
    const auto g1 = knn_entropy(standard_normal(20000, 1, 1));
    CHECK(g1.value == Approx(2.047).margin(0.05));
    CHECK(g1.std_error > 0.0);
    CHECK(g1.folds_used == 10);
    CHECK(g1.n == 20000);
    CHECK(g1.hyperparameter == 4.0);

    const auto g2 = knn_entropy(standard_normal(20000, 2, 2));
    CHECK(g2.value == Approx(4.094).margin(0.07));

    const auto u = knn_entropy(uniform01(20000, 3));
    CHECK(u.value == Approx(0.0).margin(0.05));
}

TEST_CASE("Estimators - KDE reference values")
{
    const RowMatrix x = standard_normal(20000, 1, 4);
    const auto g = kde_entropy(x);
    CHECK(g.value == Approx(2.047).margin(0.08));
    CHECK(g.std_error > 0.0);
    CHECK(g.method == EstimatorMethod::kde);

    const RowMatrix doubled = 2.0 * x;
    const auto g2 = kde_entropy(doubled);
    CHECK(g2.value - g.value == Approx(1.0).margin(0.02));

    const auto u = kde_entropy(uniform01(20000, 5));
    CHECK(u.value == Approx(0.0).margin(0.08));
}

TEST_CASE("Estimators - Exactly Gaussian model columns")
{
    ModelParams p;
    p.sigma2 = 10.0;
    p.rho_ab = 0.9;
    const auto batch = sample_observations(p, 20000, 6);
    EstimatorConfig cfg;

    const std::array<Observation, 1> a{Observation::y_A};
    auto e = estimate_joint_entropy(batch, a, cfg);
    CHECK(within(e, 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * (1.0 + p.sigma2)), 3.0));

    const std::array<Observation, 2> ab{Observation::y_A, Observation::y_B};
    e = estimate_joint_entropy(batch, ab, cfg);
    CHECK(within(e, gaussian_entropy(legitimate_covariance(p)), 3.0));

    p.alpha = 0.0;
    const auto quiet = sample_observations(p, 20000, 7);
    const std::array<Observation, 1> e3{Observation::y_E3};
    e = estimate_joint_entropy(quiet, e3, cfg);
    CHECK(within(e, h1, 3.0));

    // Any subset is Gaussian without reflection.
    const std::array<Observation, 3> a_eve{Observation::y_A, Observation::y_E3, Observation::y_E4};
    e = estimate_joint_entropy(quiet, a_eve, cfg);
    CHECK(within(e, gaussian_entropy(build_conditional_covariance(p, 0.0, 0.0, a_eve)), 3.0));

    cfg.method = EstimatorMethod::kde;
    e = estimate_joint_entropy(batch, ab, cfg);
    CHECK(within(e, gaussian_entropy(legitimate_covariance(p)), 3.0));
}

TEST_CASE("Estimators - Translation invariance")
{
    const RowMatrix x = sample_gaussian(random_spd_covariance(3, 8), 5000, 9);
    RowMatrix shifted = x;
    shifted.rowwise() += Eigen::RowVector3d(1e3, -250.0, 7.5);
    const auto a = knn_entropy(x, 4, 1);
    const auto b = knn_entropy(shifted, 4, 1);
    CHECK(std::abs(a.value - b.value) <= 1e-9);
    CHECK(std::abs(a.std_error - b.std_error) <= 1e-9);
}

TEST_CASE("Estimators - k robustness")
{
    for (int d = 1; d <= 3; ++d)
    {
        const RowMatrix x = sample_gaussian(random_spd_covariance(d, 100 + d), 20000, 200 + d);
        const auto e3 = knn_entropy(x, 3);
        const auto e4 = knn_entropy(x, 4);
        const auto e5 = knn_entropy(x, 5);
        for (auto [p, q] : {std::pair{&e3, &e4}, {&e3, &e5}, {&e4, &e5}})
        {
            INFO("d=" << d << " k=" << p->hyperparameter << "," << q->hyperparameter);
            CHECK(std::abs(p->value - q->value) <= 3.0 * std::hypot(p->std_error, q->std_error));
        }
    }
}

TEST_CASE("Estimators - Stabilization with sample size")
{
    double small_gap = 0.0, large_gap = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const RowMatrix x = standard_normal(16000, 2, 300 + seed);
        auto at = [&](Eigen::Index n) { return knn_entropy(RowMatrix(x.topRows(n)), 4, seed).value; };
        small_gap += std::abs(at(1000) - at(2000));
        large_gap += std::abs(at(8000) - at(16000));
    }
    CHECK(large_gap < small_gap);
}

TEST_CASE("Estimators - Coincident points")
{
    RowMatrix x = standard_normal(2000, 2, 10);
    for (Eigen::Index i = 0; i < 20; ++i)
        x.row(1000 + i) = x.row(i);
    const auto e = knn_entropy(x, 1, 3);
    CHECK(e.jitter_events > 0);
    CHECK(std::isfinite(e.value));
    const auto again = knn_entropy(x, 1, 3);
    CHECK(again.value == e.value);

    const RowMatrix same = RowMatrix::Constant(100, 1, 2.0);
    CHECK_THROWS_AS(knn_entropy(same), std::domain_error);
}

TEST_CASE("Estimators - Bandwidth rules")
{
    CHECK(Bandwidth::silverman().resolve(1000, 1) == Approx(std::pow(4.0 / 3000.0, 0.2)));
    CHECK(Bandwidth::scott().resolve(1000, 2) == Approx(std::pow(1000.0, -1.0 / 6.0)));
    CHECK(Bandwidth::fixed(0.3).resolve(5, 3) == 0.3);
    CHECK_THROWS_AS(Bandwidth::fixed(0.0).resolve(5, 3), std::invalid_argument);

    CHECK(parse_bandwidth("silverman").rule == Bandwidth::Rule::silverman);
    CHECK(parse_bandwidth("scott").rule == Bandwidth::Rule::scott);
    CHECK(parse_bandwidth("0.25").value == 0.25);
    CHECK_THROWS_AS(parse_bandwidth("wide"), std::invalid_argument);
    CHECK_THROWS_AS(parse_bandwidth("-1"), std::invalid_argument);
    CHECK(to_string(parse_bandwidth("0.25")) == "0.25");
}

TEST_CASE("Estimators - Input checks")
{
    const RowMatrix x = standard_normal(5, 1, 11);
    CHECK_THROWS_AS(knn_entropy(x, 5), std::invalid_argument);
    CHECK_THROWS_AS(knn_entropy(x, 0), std::invalid_argument);
    CHECK_THROWS_AS(kde_entropy(x), std::invalid_argument);
    CHECK_NOTHROW(knn_entropy(x, 4));
    CHECK(knn_entropy(x, 4).folds_used == 0);

    CHECK(parse_estimator_method("knn") == EstimatorMethod::knn);
    CHECK(parse_estimator_method("kde") == EstimatorMethod::kde);
    CHECK_THROWS_AS(parse_estimator_method("both"), std::invalid_argument);
}
