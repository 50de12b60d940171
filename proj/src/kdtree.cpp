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

#include "reflectkey/kdtree.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace reflectkey
{

KdTree::KdTree(RowMatrix points, Eigen::Index leaf_size) : points_(std::move(points)), leaf_size_(leaf_size)
{
    if (points_.cols() < 1)
        throw std::invalid_argument("KdTree needs at least one dimension.");
    if (leaf_size_ < 1)
        throw std::invalid_argument("KdTree leaf size must be positive.");
    order_.resize(static_cast<std::size_t>(points_.rows()));
    std::iota(order_.begin(), order_.end(), Eigen::Index{0});
    if (points_.rows() > 0)
    {
        nodes_.reserve(static_cast<std::size_t>(2 * points_.rows() / leaf_size_ + 1));
        build(0, points_.rows());
    }
    packed_.resize(points_.rows(), points_.cols());
    for (Eigen::Index p = 0; p < points_.rows(); ++p)
        packed_.row(p) = points_.row(order_[static_cast<std::size_t>(p)]);
}

std::int32_t KdTree::build(Eigen::Index begin, Eigen::Index end)
{
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end});
    if (end - begin <= leaf_size_)
        return id;

    // Split the widest dimension at its median.
    int dim = 0;
    double widest = -1.0;
    for (Eigen::Index j = 0; j < points_.cols(); ++j)
    {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (Eigen::Index p = begin; p < end; ++p)
        {
            const double v = points_(order_[static_cast<std::size_t>(p)], j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > widest)
        {
            widest = hi - lo;
            dim = static_cast<int>(j);
        }
    }
    if (widest <= 0.0)
        return id; // all points coincide; keep as one leaf

    const Eigen::Index mid = begin + (end - begin) / 2;
    auto first = order_.begin() + begin;
    std::nth_element(first, order_.begin() + mid, order_.begin() + end,
                     [&](Eigen::Index a, Eigen::Index b) { return points_(a, dim) < points_(b, dim); });

    const double split = points_(order_[static_cast<std::size_t>(mid)], dim);
    const auto left = build(begin, mid);
    const auto right = build(mid, end);
    Node &node = nodes_[static_cast<std::size_t>(id)];
    node.split_dim = dim;
    node.split_value = split;
    node.left = left;
    node.right = right;
    return id;
}

double KdTree::kth_neighbor_distance(Eigen::Index query, int k) const
{
    if (k < 1 || k >= points_.rows())
        throw std::invalid_argument("Neighbor rank k must satisfy 1 <= k < number of points.");

    // Ascending list of the k best distances so far.
    std::vector<double> best(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());
    const double *q = points_.row(query).data();
    const Eigen::Index d = points_.cols();

    struct Frame
    {
        std::int32_t id;
        double bound;
    };
    std::vector<Frame> stack;
    stack.reserve(64);
    stack.push_back({0, 0.0});
    while (!stack.empty())
    {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.bound > best.back())
            continue;
        const Node &node = nodes_[static_cast<std::size_t>(f.id)];
        if (node.split_dim < 0)
        {
            for (Eigen::Index p = node.begin; p < node.end; ++p)
            {
                const double *x = packed_.data() + p * d;
                double dist = 0.0;
                for (Eigen::Index j = 0; j < d; ++j)
                    dist = std::max(dist, std::abs(q[j] - x[j]));
                if (dist < best.back() && order_[static_cast<std::size_t>(p)] != query)
                {
                    auto pos = std::upper_bound(best.begin(), best.end(), dist);
                    best.insert(pos, dist);
                    best.pop_back();
                }
            }
            continue;
        }
        const double delta = q[node.split_dim] - node.split_value;
        const std::int32_t near = delta <= 0.0 ? node.left : node.right;
        const std::int32_t far = delta <= 0.0 ? node.right : node.left;
        // Far side first on the stack so the near side is explored first.
        stack.push_back({far, std::max(f.bound, std::abs(delta))});
        stack.push_back({near, f.bound});
    }
    return best.back();
}

double KdTree::gaussian_kernel_sum(Eigen::Index query, double radius, double inv_two_h2) const
{
    if (nodes_.empty())
        return 0.0;
    const double *q = points_.row(query).data();
    const Eigen::Index d = points_.cols();
    const double radius2 = radius * radius;
    Eigen::ArrayXd exponent(leaf_size_ > 0 ? 2 * leaf_size_ + 1 : 1);

    double total = 0.0;
    std::vector<std::int32_t> stack;
    stack.reserve(64);
    stack.push_back(0);
    while (!stack.empty())
    {
        const Node &node = nodes_[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        if (node.split_dim < 0)
        {
            const Eigen::Index count = node.end - node.begin;
            if (exponent.size() < count)
                exponent.resize(count);
            Eigen::Index kept = 0;
            for (Eigen::Index p = node.begin; p < node.end; ++p)
            {
                const double *x = packed_.data() + p * d;
                double s = 0.0;
                for (Eigen::Index j = 0; j < d; ++j)
                    s += (q[j] - x[j]) * (q[j] - x[j]);
                if (s <= radius2 && order_[static_cast<std::size_t>(p)] != query)
                    exponent(kept++) = -s * inv_two_h2;
            }
            if (kept > 0)
                total += exponent.head(kept).exp().sum();
            continue;
        }
        const double delta = q[node.split_dim] - node.split_value;
        if (delta <= radius)
            stack.push_back(node.left);
        if (-delta <= radius)
            stack.push_back(node.right);
    }
    return total;
}

} // namespace reflectkey
