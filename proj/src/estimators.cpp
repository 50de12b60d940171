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

#include "reflectkey/estimators.hpp"
#include "reflectkey/kdtree.hpp"

#include <Eigen/Cholesky>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/digamma.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace reflectkey
{

std::string_view to_string(EstimatorMethod method)
{
    return method == EstimatorMethod::knn ? "knn" : "kde";
}

EstimatorMethod parse_estimator_method(std::string_view name)
{
    if (name == "knn")
        return EstimatorMethod::knn;
    if (name == "kde")
        return EstimatorMethod::kde;
    throw std::invalid_argument("Unknown estimator method '" + std::string(name) + "' (expected knn or kde).");
}

double Bandwidth::resolve(Eigen::Index n, Eigen::Index d) const
{
    const double nd = static_cast<double>(n);
    const double dd = static_cast<double>(d);
    double h = value;
    switch (rule)
    {
    case Rule::silverman:
        h = std::pow(4.0 / ((dd + 2.0) * nd), 1.0 / (dd + 4.0));
        break;
    case Rule::scott:
        h = std::pow(nd, -1.0 / (dd + 4.0));
        break;
    case Rule::fixed:
        break;
    }
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("Kernel bandwidth must be positive.");
    return h;
}

Bandwidth parse_bandwidth(std::string_view text)
{
    if (text == "silverman")
        return Bandwidth::silverman();
    if (text == "scott")
        return Bandwidth::scott();
    double h = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), h);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw std::invalid_argument("Bandwidth must be 'silverman', 'scott' or a number, got '" + std::string(text) + "'.");
    if (!(h > 0.0))
        throw std::invalid_argument("Kernel bandwidth must be positive.");
    return Bandwidth::fixed(h);
}

std::string to_string(const Bandwidth &bw)
{
    switch (bw.rule)
    {
    case Bandwidth::Rule::silverman:
        return "silverman";
    case Bandwidth::Rule::scott:
        return "scott";
    case Bandwidth::Rule::fixed:
        break;
    }
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), bw.value);
    return std::string(buf, res.ptr);
}

namespace
{

struct Whitened
{
    RowMatrix points;
    double log_det = 0.0; // nats, log|det L|
};

Whitened whiten(const Eigen::Ref<const RowMatrix> &x)
{
    const Eigen::Index n = x.rows();
    const Eigen::RowVectorXd mean = x.colwise().mean();
    RowMatrix centered = x.rowwise() - mean;
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("Sample covariance is singular; the entropy of a degenerate sample is not finite.");

    Whitened out;
    const Eigen::MatrixXd factor = llt.matrixL();
    for (Eigen::Index j = 0; j < factor.rows(); ++j)
    {
        if (!(factor(j, j) > 0.0))
            throw std::domain_error("Sample covariance is singular; the entropy of a degenerate sample is not finite.");
        out.log_det += std::log(factor(j, j));
    }
    out.points = llt.matrixL().solve(centered.transpose()).transpose();
    return out;
}

constexpr double to_bits(double nats)
{
    return nats / std::numbers::ln2;
}

// ---------- kNN ----------

struct KnnResult
{
    double nats;
    std::size_t jitter_events;
};

KnnResult knn_whitened(RowMatrix points, int k, std::uint64_t seed)
{
    const Eigen::Index n = points.rows();
    const Eigen::Index d = points.cols();
    std::vector<double> radius(static_cast<std::size_t>(n));

    auto query_all = [&](const KdTree &tree) {
        std::size_t zeros = 0;
        for (Eigen::Index i = 0; i < n; ++i)
        {
            radius[static_cast<std::size_t>(i)] = tree.kth_neighbor_distance(i, k);
            zeros += radius[static_cast<std::size_t>(i)] == 0.0;
        }
        return zeros;
    };

    std::size_t zeros = query_all(KdTree(points));
    const std::size_t jitter_events = zeros;
    if (zeros > 0)
    {
        // Whitened columns have unit scale, so the jitter magnitude is 1e-12 per coordinate.
        std::mt19937_64 rng(stream_seed(seed, Stream::estimator_jitter));
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                points(i, j) += 1e-12 * unit(rng);
        zeros = query_all(KdTree(std::move(points)));
        if (zeros > 0)
            throw std::domain_error("kNN entropy: coincident points remain after jitter.");
    }

    double sum_log = 0.0;
    for (double r : radius)
        sum_log += std::log(2.0 * r);
    const double nd = static_cast<double>(n);
    const double nats = boost::math::digamma(nd) - boost::math::digamma(static_cast<double>(k)) +
                        static_cast<double>(d) * sum_log / nd;
    return {nats, jitter_events};
}

KnnResult knn_raw(const Eigen::Ref<const RowMatrix> &x, int k, std::uint64_t seed)
{
    auto w = whiten(x);
    auto res = knn_whitened(std::move(w.points), k, seed);
    res.nats += w.log_det;
    return res;
}

// ---------- KDE ----------

double kde_raw(const Eigen::Ref<const RowMatrix> &x, double h)
{
    auto w = whiten(x);
    const Eigen::Index n = w.points.rows();
    const Eigen::Index d = w.points.cols();
    const double dd = static_cast<double>(d);
    const KdTree tree(std::move(w.points));
    const RowMatrix &y = tree.points();

    const double inv_two_h2 = 1.0 / (2.0 * h * h);
    // Truncate each kernel where its discarded mass is 1e-5 (a chi-square tail with d degrees of freedom).
    const boost::math::chi_squared chi2(dd);
    const double cutoff = h * std::sqrt(boost::math::quantile(boost::math::complement(chi2, 1e-5)));
    const double log_norm = std::log(static_cast<double>(n - 1)) + 0.5 * dd * std::log(2.0 * std::numbers::pi) +
                            dd * std::log(h);

    auto sq_dist = [&](Eigen::Index i, Eigen::Index j) { return (y.row(i) - y.row(j)).squaredNorm(); };

    double sum_log_density = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double s = tree.gaussian_kernel_sum(i, cutoff, inv_two_h2);
        double log_s;
        if (s > 0.0)
            log_s = std::log(s);
        else
        {
            // Isolated point: log-sum-exp over every other row.
            double max_term = -std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i)
                    max_term = std::max(max_term, -sq_dist(i, j) * inv_two_h2);
            double acc = 0.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i)
                    acc += std::exp(-sq_dist(i, j) * inv_two_h2 - max_term);
            log_s = max_term + std::log(acc);
        }
        sum_log_density += log_s - log_norm;
    }
    return -sum_log_density / static_cast<double>(n) + w.log_det;
}

// Spread of fold estimates scaled to the full sample size. Returns {stderr, folds_used}.
template <typename Estimate>
std::pair<double, int> fold_std_error(const RowMatrix &x, int folds, Eigen::Index min_rows, Estimate &&estimate)
{
    const Eigen::Index n = x.rows();
    if (folds < 2 || n / folds < min_rows)
        return {0.0, 0};
    const Eigen::Index m = n / folds;
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(folds));
    for (int f = 0; f < folds; ++f)
        values.push_back(estimate(x.middleRows(f * m, m), f));
    double mean = 0.0;
    for (double v : values)
        mean += v;
    mean /= static_cast<double>(folds);
    double ss = 0.0;
    for (double v : values)
        ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(folds - 1));
    return {sd / std::sqrt(static_cast<double>(folds)), folds};
}

} // namespace

EntropyEstimate knn_entropy(const RowMatrix &points, int k, std::uint64_t seed, int folds)
{
    if (k < 1)
        throw std::invalid_argument("kNN entropy needs k >= 1.");
    if (points.cols() < 1)
        throw std::invalid_argument("kNN entropy needs at least one column.");
    if (points.rows() <= k)
        throw std::invalid_argument("kNN entropy needs more samples than neighbors (N > k).");

    EntropyEstimate out;
    out.method = EstimatorMethod::knn;
    out.n = points.rows();
    out.hyperparameter = k;

    const auto full = knn_raw(points, k, seed);
    out.value = to_bits(full.nats);
    out.jitter_events = full.jitter_events;

    // Each fold needs enough rows for a stable covariance and k neighbors.
    const Eigen::Index min_rows = std::max<Eigen::Index>(k + 1, 2 * points.cols() + 2);
    auto [se, used] = fold_std_error(points, folds, min_rows, [&](const Eigen::Ref<const RowMatrix> &part, int f) {
        return to_bits(knn_raw(part, k, mix_seed(seed, static_cast<std::uint64_t>(f) + 1)).nats);
    });
    out.std_error = se;
    out.folds_used = used;
    return out;
}

EntropyEstimate knn_entropy(const SampleBatch &batch, int k, int folds)
{
    return knn_entropy(batch.data(), k, batch.seed(), folds);
}

EntropyEstimate kde_entropy(const RowMatrix &points, Bandwidth bandwidth, int folds)
{
    if (points.cols() < 1)
        throw std::invalid_argument("KDE entropy needs at least one column.");
    if (points.rows() < 10)
        throw std::invalid_argument("KDE entropy needs at least 10 samples.");

    EntropyEstimate out;
    out.method = EstimatorMethod::kde;
    out.n = points.rows();
    const double h = bandwidth.resolve(points.rows(), points.cols());
    out.hyperparameter = h;
    out.value = to_bits(kde_raw(points, h));

    const Eigen::Index min_rows = std::max<Eigen::Index>(10, 2 * points.cols() + 2);
    auto [se, used] = fold_std_error(points, folds, min_rows, [&](const Eigen::Ref<const RowMatrix> &part, int) {
        return to_bits(kde_raw(part, bandwidth.resolve(part.rows(), part.cols())));
    });
    out.std_error = se;
    out.folds_used = used;
    return out;
}

EntropyEstimate kde_entropy(const SampleBatch &batch, Bandwidth bandwidth, int folds)
{
    return kde_entropy(batch.data(), bandwidth, folds);
}

EntropyEstimate estimate_joint_entropy(const SampleBatch &batch, std::span<const Observation> cols,
                                       const EstimatorConfig &config)
{
    if (cols.empty())
        throw std::invalid_argument("Joint entropy needs at least one column.");
    const SampleBatch projected = batch.project(cols);
    switch (config.method)
    {
    case EstimatorMethod::knn:
        return knn_entropy(projected, config.k, config.folds);
    case EstimatorMethod::kde:
        return kde_entropy(projected, config.bandwidth, config.folds);
    }
    throw std::invalid_argument("Unsupported estimator method.");
}

} // namespace reflectkey
