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

#ifndef REFLECTKEY_KDTREE_HPP
#define REFLECTKEY_KDTREE_HPP

#include "reflectkey/model.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace reflectkey
{

/// Exact kd-tree over the rows of a point matrix, Chebyshev (maximum) norm.
/// Built once; every query is const and may run concurrently.
class KdTree
{
public:
    explicit KdTree(RowMatrix points, Eigen::Index leaf_size = 16);

    Eigen::Index size() const { return points_.rows(); }
    Eigen::Index dims() const { return points_.cols(); }
    const RowMatrix &points() const { return points_; }

    /// Distance from row `query` to its k-th nearest other row (the row itself is excluded).
    double kth_neighbor_distance(Eigen::Index query, int k) const;

    /// Calls visit(j, squared_distance) for every row j != query whose Euclidean distance to row
    /// `query` is at most radius.
    template <typename Visit>
    void for_each_in_ball(Eigen::Index query, double radius, Visit &&visit) const
    {
        if (nodes_.empty())
            return;
        in_ball(0, points_.row(query).data(), query, radius, radius * radius, visit);
    }

    /// Sum of exp(-|x_j - x_query|^2 * inv_two_h2) over rows j != query within Euclidean `radius`.
    double gaussian_kernel_sum(Eigen::Index query, double radius, double inv_two_h2) const;

private:
    struct Node
    {
        Eigen::Index begin = 0;
        Eigen::Index end = 0;
        int split_dim = -1; // -1 marks a leaf
        double split_value = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
    };

    std::int32_t build(Eigen::Index begin, Eigen::Index end);

    template <typename Visit>
    void in_ball(std::int32_t id, const double *q, Eigen::Index self, double radius, double radius2,
                 Visit &visit) const
    {
        const Node &node = nodes_[static_cast<std::size_t>(id)];
        if (node.split_dim < 0)
        {
            const Eigen::Index d = points_.cols();
            for (Eigen::Index p = node.begin; p < node.end; ++p)
            {
                const double *x = packed_.data() + p * d;
                double s = 0.0;
                for (Eigen::Index j = 0; j < d; ++j)
                    s += (q[j] - x[j]) * (q[j] - x[j]);
                if (s <= radius2)
                {
                    const Eigen::Index row = order_[static_cast<std::size_t>(p)];
                    if (row != self)
                        visit(row, s);
                }
            }
            return;
        }
        const double delta = q[node.split_dim] - node.split_value;
        if (delta <= radius)
            in_ball(node.left, q, self, radius, radius2, visit);
        if (-delta <= radius)
            in_ball(node.right, q, self, radius, radius2, visit);
    }

    RowMatrix points_;
    RowMatrix packed_; // points_ permuted into tree order, so each leaf is contiguous
    Eigen::Index leaf_size_;
    std::vector<Eigen::Index> order_;
    std::vector<Node> nodes_;
};

} // namespace reflectkey

#endif
