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

#include "reflectkey/gauss.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace reflectkey
{

CovarianceMatrix::CovarianceMatrix(ObservationList labels, Eigen::MatrixXd m)
    : labels_(std::move(labels)), m_(std::move(m))
{
    if (m_.rows() != m_.cols() || m_.rows() != static_cast<Eigen::Index>(labels_.size()))
        throw std::invalid_argument("Covariance matrix must be square and match its label count.");
    for (std::size_t i = 0; i < labels_.size(); ++i)
        for (std::size_t j = i + 1; j < labels_.size(); ++j)
            if (labels_[i] == labels_[j])
                throw std::invalid_argument("Duplicate covariance label '" + std::string(to_string(labels_[i])) + "'.");
    const double scale = m_.cwiseAbs().maxCoeff();
    if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300))
        throw std::invalid_argument("Covariance matrix is not symmetric.");
}

CovarianceMatrix CovarianceMatrix::sub(std::span<const Observation> labels) const
{
    std::vector<Eigen::Index> idx;
    idx.reserve(labels.size());
    for (auto obs : labels)
    {
        auto it = std::find(labels_.begin(), labels_.end(), obs);
        if (it == labels_.end())
            throw std::invalid_argument("Label '" + std::string(to_string(obs)) + "' is not part of the covariance.");
        idx.push_back(it - labels_.begin());
    }
    const auto d = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            out(i, j) = m_(idx[i], idx[j]);
    return CovarianceMatrix(ObservationList(labels.begin(), labels.end()), std::move(out));
}

CovarianceMatrix build_conditional_covariance(const ModelParams &params, double h_ae, double h_be,
                                              std::span<const Observation> subset)
{
    params.validate();
    if (subset.empty())
        throw std::invalid_argument("Covariance subset must not be empty.");

    const double s2 = params.sigma2;
    const double a = params.alpha;
    const double r = params.rho_ab;

    // Order: y_A, y_B, y_E3, y_E4
    Eigen::Matrix4d full;
    full(0, 0) = s2 + 1.0;
    full(1, 1) = s2 + 1.0;
    full(2, 2) = a * a * h_ae * h_ae * s2 + 1.0;
    full(3, 3) = a * a * h_be * h_be * s2 + 1.0;
    full(0, 1) = r * s2;
    full(0, 2) = a * h_ae * s2;
    full(0, 3) = a * h_be * r * s2;
    full(1, 2) = a * h_ae * r * s2;
    full(1, 3) = a * h_be * s2;
    full(2, 3) = a * a * h_ae * h_be * r * s2;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j)
            full(i, j) = full(j, i);

    CovarianceMatrix all(ObservationList(all_observations.begin(), all_observations.end()), full);
    return all.sub(subset);
}

CovarianceMatrix legitimate_covariance(const ModelParams &params)
{
    const std::array<Observation, 2> pair{Observation::y_A, Observation::y_B};
    return build_conditional_covariance(params, 0.0, 0.0, pair);
}

double gaussian_entropy(const Eigen::MatrixXd &m)
{
    if (m.rows() == 0 || m.rows() != m.cols())
        throw std::invalid_argument("Entropy needs a nonempty square covariance.");
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("Covariance matrix is not positive-definite.");
    const auto &factor = llt.matrixLLT();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        const double diag = factor(i, i);
        if (!(diag > 0.0))
            throw std::domain_error("Covariance matrix is not positive-definite.");
        log_det += 2.0 * std::log(diag);
    }
    const double d = static_cast<double>(m.rows());
    return 0.5 * (d * std::log(2.0 * std::numbers::pi * std::numbers::e) + log_det) / std::numbers::ln2;
}

double gaussian_entropy(const CovarianceMatrix &cov)
{
    return gaussian_entropy(cov.matrix());
}

namespace
{

void require_disjoint(std::span<const Observation> a, std::span<const Observation> b)
{
    for (auto x : a)
        if (std::find(b.begin(), b.end(), x) != b.end())
            throw std::invalid_argument("Partitions overlap on '" + std::string(to_string(x)) + "'.");
}

ObservationList join(std::span<const Observation> a, std::span<const Observation> b)
{
    ObservationList out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

double clamp_mi(double value)
{
    if (value >= 0.0)
        return value;
    if (value > -mi_clamp_tolerance)
        return 0.0;
    throw std::domain_error("Mutual information evaluated to a negative value beyond rounding tolerance.");
}

} // namespace

double gaussian_mi(const CovarianceMatrix &cov, std::span<const Observation> part_a,
                   std::span<const Observation> part_b)
{
    if (part_a.empty() || part_b.empty())
        throw std::invalid_argument("Mutual information needs two nonempty partitions.");
    require_disjoint(part_a, part_b);
    const double h_a = gaussian_entropy(cov.sub(part_a));
    const double h_b = gaussian_entropy(cov.sub(part_b));
    const double h_ab = gaussian_entropy(cov.sub(join(part_a, part_b)));
    return clamp_mi(h_a + h_b - h_ab);
}

double gaussian_conditional_mi(const CovarianceMatrix &cov, std::span<const Observation> part_a,
                               std::span<const Observation> part_b, std::span<const Observation> part_c)
{
    if (part_c.empty())
        return gaussian_mi(cov, part_a, part_b);
    if (part_a.empty() || part_b.empty())
        throw std::invalid_argument("Conditional mutual information needs nonempty partitions A and B.");
    require_disjoint(part_a, part_b);
    require_disjoint(part_a, part_c);
    require_disjoint(part_b, part_c);

    const auto ac = join(part_a, part_c);
    const auto bc = join(part_b, part_c);
    const auto abc = join(part_a, bc);
    const double value = gaussian_entropy(cov.sub(ac)) + gaussian_entropy(cov.sub(bc)) -
                         gaussian_entropy(cov.sub(abc)) - gaussian_entropy(cov.sub(part_c));
    return clamp_mi(value);
}

double sk_capacity_no_eve(const ModelParams &params)
{
    // Only SNR and rho enter; SNR = 0 is allowed here.
    if (!(params.sigma2 >= 0.0) || !std::isfinite(params.sigma2))
        throw std::invalid_argument("sigma2 must be non-negative and finite.");
    if (!(std::abs(params.rho_ab) <= 1.0))
        throw std::invalid_argument("rho_ab must lie in [-1, 1].");
    const double snr = params.sigma2;
    const double r = std::abs(params.rho_ab);
    // (1+SNR)^2 - rho^2 SNR^2 factored to avoid cancellation at |rho| -> 1
    const double num = (1.0 + snr) * (1.0 + snr);
    const double den = (1.0 + snr - r * snr) * (1.0 + snr + r * snr);
    return 0.5 * std::log2(num / den);
}

} // namespace reflectkey
