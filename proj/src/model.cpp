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

#include "reflectkey/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

namespace reflectkey
{

std::string_view to_string(Observation obs)
{
    switch (obs)
    {
    case Observation::y_A:
        return "y_A";
    case Observation::y_B:
        return "y_B";
    case Observation::y_E3:
        return "y_E3";
    case Observation::y_E4:
        return "y_E4";
    }
    return "?";
}

Observation parse_observation(std::string_view name)
{
    for (auto obs : all_observations)
        if (to_string(obs) == name)
            return obs;
    throw std::invalid_argument("Unknown observation label '" + std::string(name) + "'.");
}

ObservationList parse_observation_list(std::string_view names)
{
    ObservationList out;
    while (!names.empty())
    {
        auto pos = names.find(',');
        auto token = names.substr(0, pos);
        while (!token.empty() && token.front() == ' ')
            token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ')
            token.remove_suffix(1);
        out.push_back(parse_observation(token));
        if (pos == std::string_view::npos)
            break;
        names.remove_prefix(pos + 1);
    }
    return out;
}

void ModelParams::validate() const
{
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw std::invalid_argument("sigma2 must be positive and finite.");
    // sigma2_e = 0 is the degenerate eavesdropper whose channels vanish.
    if (!(sigma2_e >= 0.0) || !std::isfinite(sigma2_e))
        throw std::invalid_argument("sigma2_e must be non-negative and finite.");
    if (!(std::abs(rho_ab) <= 1.0))
        throw std::invalid_argument("rho_ab must lie in [-1, 1].");
    if (!(std::abs(rho_e) <= 1.0))
        throw std::invalid_argument("rho_e must lie in [-1, 1].");
    if (!(std::abs(alpha) < 1.0))
        throw std::invalid_argument("alpha must satisfy |alpha| < 1.");
}

Snrs derived_snrs(const ModelParams &params)
{
    return {params.sigma2, params.alpha * params.alpha * params.sigma2_e * params.sigma2};
}

// ---------- SampleBatch ----------

SampleBatch::SampleBatch(ObservationList columns, RowMatrix data, std::uint64_t seed)
    : columns_(std::move(columns)), data_(std::move(data)), seed_(seed)
{
    if (columns_.empty())
        throw std::invalid_argument("SampleBatch needs at least one column.");
    if (static_cast<Eigen::Index>(columns_.size()) != data_.cols())
        throw std::invalid_argument("SampleBatch column count does not match data width.");
    if (data_.rows() < 1)
        throw std::invalid_argument("SampleBatch needs at least one row.");
    for (std::size_t i = 0; i < columns_.size(); ++i)
        for (std::size_t j = i + 1; j < columns_.size(); ++j)
            if (columns_[i] == columns_[j])
                throw std::invalid_argument("Duplicate column '" + std::string(to_string(columns_[i])) +
                                            "' in SampleBatch.");
}

Eigen::Index SampleBatch::column_index(Observation obs) const
{
    auto it = std::find(columns_.begin(), columns_.end(), obs);
    if (it == columns_.end())
        throw std::invalid_argument("Column '" + std::string(to_string(obs)) + "' is not part of the batch.");
    return static_cast<Eigen::Index>(it - columns_.begin());
}

SampleBatch SampleBatch::project(std::span<const Observation> cols) const
{
    RowMatrix out(data_.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        out.col(static_cast<Eigen::Index>(j)) = data_.col(column_index(cols[j]));
    return SampleBatch(ObservationList(cols.begin(), cols.end()), std::move(out), seed_);
}

void SampleBatch::write_csv(std::ostream &os) const
{
    for (std::size_t j = 0; j < columns_.size(); ++j)
        os << (j ? "," : "") << to_string(columns_[j]);
    os << '\n';
    char buf[32];
    for (Eigen::Index i = 0; i < data_.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < data_.cols(); ++j)
        {
            auto res = std::to_chars(buf, buf + sizeof(buf), data_(i, j));
            if (j)
                os << ',';
            os.write(buf, res.ptr - buf);
        }
        os << '\n';
    }
}

// ---------- Random streams ----------

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, Stream stream)
{
    return mix_seed(seed, static_cast<std::uint64_t>(stream));
}

namespace
{

// Cholesky factor of variance * [[1, rho], [rho, 1]] applied to two standard normals.
// At |rho| = 1 the second coefficient is an exact multiple of the first.
struct CorrelatedPair
{
    double scale;
    double rho;
    double tail;

    CorrelatedPair(double variance, double correlation)
        : scale(std::sqrt(variance)), rho(correlation), tail(std::sqrt(std::max(0.0, 1.0 - correlation * correlation)))
    {
    }

    std::pair<double, double> operator()(double u1, double u2) const
    {
        const double first = scale * u1;
        if (std::abs(rho) == 1.0)
            return {first, rho * first};
        return {first, scale * (rho * u1 + tail * u2)};
    }
};

void check_count(std::size_t n)
{
    if (n < 1)
        throw std::invalid_argument("Sample count must be at least 1.");
}

} // namespace

std::vector<ChannelSample> sample_channels(const ModelParams &params, std::size_t n, std::uint64_t seed)
{
    params.validate();
    check_count(n);

    std::mt19937_64 legit(stream_seed(seed, Stream::legit_channel));
    std::mt19937_64 eve(stream_seed(seed, Stream::eve_channel));
    std::normal_distribution<double> legit_normal, eve_normal;

    const CorrelatedPair legit_pair(params.sigma2, params.rho_ab);
    const CorrelatedPair eve_pair(params.sigma2_e, params.rho_e);

    std::vector<ChannelSample> out(n);
    for (auto &s : out)
    {
        const double u1 = legit_normal(legit);
        const double u2 = legit_normal(legit);
        std::tie(s.h_ba, s.h_ab) = legit_pair(u1, u2);
        const double v1 = eve_normal(eve);
        const double v2 = eve_normal(eve);
        std::tie(s.h_ae, s.h_be) = eve_pair(v1, v2);
    }
    return out;
}

namespace
{

SampleBatch assemble(const ModelParams &params, const std::vector<ChannelSample> &channels, std::uint64_t seed)
{
    std::mt19937_64 noise(stream_seed(seed, Stream::noise));
    std::normal_distribution<double> normal;

    RowMatrix data(static_cast<Eigen::Index>(channels.size()), 4);
    Eigen::Index i = 0;
    for (const auto &h : channels)
    {
        data(i, 0) = h.h_ba + normal(noise);
        data(i, 1) = h.h_ab + normal(noise);
        data(i, 2) = params.alpha * h.h_ba * h.h_ae + normal(noise);
        data(i, 3) = params.alpha * h.h_ab * h.h_be + normal(noise);
        ++i;
    }
    return SampleBatch(ObservationList(all_observations.begin(), all_observations.end()), std::move(data), seed);
}

} // namespace

SampleBatch sample_observations(const ModelParams &params, std::size_t n, std::uint64_t seed)
{
    return assemble(params, sample_channels(params, n, seed), seed);
}

SampleBatch sample_observations_given_eve_csi(const ModelParams &params, double h_ae, double h_be, std::size_t n,
                                              std::uint64_t seed)
{
    auto channels = sample_channels(params, n, seed);
    for (auto &h : channels)
    {
        h.h_ae = h_ae;
        h.h_be = h_be;
    }
    return assemble(params, channels, seed);
}

} // namespace reflectkey
