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

#ifndef REFLECTKEY_GAUSS_HPP
#define REFLECTKEY_GAUSS_HPP

#include "reflectkey/model.hpp"

#include <Eigen/Core>

#include <span>

namespace reflectkey
{

/// Covariance over a labelled set of observations. Rows and columns follow labels().
class CovarianceMatrix
{
public:
    /// Throws std::invalid_argument on a size mismatch, duplicate labels or asymmetry beyond 1e-12 (relative).
    CovarianceMatrix(ObservationList labels, Eigen::MatrixXd m);

    const ObservationList &labels() const { return labels_; }
    const Eigen::MatrixXd &matrix() const { return m_; }
    Eigen::Index dims() const { return m_.rows(); }

    /// Principal submatrix in the requested label order.
    CovarianceMatrix sub(std::span<const Observation> labels) const;

private:
    ObservationList labels_;
    Eigen::MatrixXd m_;
};

/// Exact covariance of the requested observations given Eve's channel coefficients.
/// With h_ae and h_be fixed, the observations are jointly Gaussian.
CovarianceMatrix build_conditional_covariance(const ModelParams &params, double h_ae, double h_be,
                                              std::span<const Observation> subset);

/// Exact covariance of (y_A, y_B). Independent of Eve's coefficients.
CovarianceMatrix legitimate_covariance(const ModelParams &params);

/// Differential entropy in bits, 1/2 log2((2 pi e)^d det m), via a Cholesky factorization.
/// Throws std::domain_error if the matrix is not positive-definite.
double gaussian_entropy(const CovarianceMatrix &cov);

/// Same as gaussian_entropy on a bare matrix.
double gaussian_entropy(const Eigen::MatrixXd &m);

/// I(A;B) in bits from three principal log-determinants. Partitions must be disjoint and nonempty.
double gaussian_mi(const CovarianceMatrix &cov, std::span<const Observation> part_a,
                   std::span<const Observation> part_b);

/// I(A;B|C) = h(A,C) + h(B,C) - h(A,B,C) - h(C). An empty C reduces to gaussian_mi.
double gaussian_conditional_mi(const CovarianceMatrix &cov, std::span<const Observation> part_a,
                               std::span<const Observation> part_b, std::span<const Observation> part_c);

/// Closed-form secret-key capacity without an eavesdropper,
/// 1/2 log2((1+SNR)^2 / ((1+SNR)^2 - rho_ab^2 SNR^2)). Uses only sigma2 (>= 0) and rho_ab.
double sk_capacity_no_eve(const ModelParams &params);

/// Mutual-information values whose negative part is below this magnitude are rounding noise and
/// clamp to zero. Larger negative values throw std::domain_error.
inline constexpr double mi_clamp_tolerance = 1e-9;

} // namespace reflectkey

#endif
