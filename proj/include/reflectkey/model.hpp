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

#ifndef REFLECTKEY_MODEL_HPP
#define REFLECTKEY_MODEL_HPP

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reflectkey
{

/// Dense row-major sample matrix, one row per draw.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// The four observations that carry information about the key source.
///   y_A  = h_BA + z_A               (Alice)
///   y_B  = h_AB + z_B               (Bob)
///   y_E3 = alpha h_BA h_AE + z_E3   (Eve, reflection from Alice's antenna)
///   y_E4 = alpha h_AB h_BE + z_E4   (Eve, reflection from Bob's antenna)
/// Eve's direct-path observations are independent of everything else and never enter a rate.
enum class Observation : std::uint8_t
{
    y_A,
    y_B,
    y_E3,
    y_E4
};

inline constexpr std::array<Observation, 4> all_observations{Observation::y_A, Observation::y_B,
                                                             Observation::y_E3, Observation::y_E4};

std::string_view to_string(Observation obs);

/// Parses "y_A", "y_B", "y_E3", "y_E4". Throws std::invalid_argument on anything else.
Observation parse_observation(std::string_view name);

using ObservationList = std::vector<Observation>;

/// Parses a comma-separated label list such as "y_A,y_E3,y_E4".
ObservationList parse_observation_list(std::string_view names);

/// Scalar parameters of the reflection channel model. The training symbol is fixed to 1.
struct ModelParams
{
    double sigma2 = 1.0;   ///< variance of h_AB and h_BA; also the SNR at Alice and Bob
    double sigma2_e = 1.0; ///< variance of h_AE and h_BE
    double rho_ab = 0.9;   ///< correlation of (h_BA, h_AB)
    double rho_e = 0.1;    ///< correlation of (h_AE, h_BE)
    double alpha = 0.05;   ///< reflection coefficient, |alpha| < 1

    /// Throws std::invalid_argument naming the first violated invariant.
    /// sigma2_e = 0 is accepted and models an eavesdropper whose channels are identically zero.
    void validate() const;

    bool operator==(const ModelParams &) const = default;
};

struct Snrs
{
    double snr;     ///< linear SNR at Alice/Bob (= sigma2)
    double snr_eve; ///< linear effective SNR at Eve, alpha^2 sigma2_e sigma2
};

Snrs derived_snrs(const ModelParams &params);

struct ChannelSample
{
    double h_ba = 0.0;
    double h_ab = 0.0;
    double h_ae = 0.0;
    double h_be = 0.0;
};

/// Immutable N x d batch of joint observation samples with named columns.
class SampleBatch
{
public:
    SampleBatch(ObservationList columns, RowMatrix data, std::uint64_t seed);

    const ObservationList &columns() const { return columns_; }
    const RowMatrix &data() const { return data_; }
    std::uint64_t seed() const { return seed_; }

    Eigen::Index rows() const { return data_.rows(); }
    Eigen::Index dims() const { return data_.cols(); }

    /// Position of a column; throws std::invalid_argument if absent.
    Eigen::Index column_index(Observation obs) const;

    /// Copy of the selected columns in the given order.
    SampleBatch project(std::span<const Observation> cols) const;

    /// Header line of column names, then one row per draw with shortest round-trip formatting.
    void write_csv(std::ostream &os) const;

private:
    ObservationList columns_;
    RowMatrix data_;
    std::uint64_t seed_;
};

// ---------- Random streams ----------

/// Independent stream identifiers. Channel pairs and noise come from separate streams so that the
/// noise is independent of the channels by construction and common random numbers are shared
/// between calls with the same seed.
enum class Stream : std::uint64_t
{
    legit_channel = 1,
    eve_channel = 2,
    noise = 3,
    estimator_jitter = 4,
    resampling = 5
};

/// splitmix64 finalizer; used to derive well-separated 64-bit seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// Seed for one stream of a run.
std::uint64_t stream_seed(std::uint64_t seed, Stream stream);

// ---------- Sampling ----------

/// Draws n independent channel quadruples. (h_ba, h_ab) has covariance sigma2 [[1, rho_ab], [rho_ab, 1]],
/// (h_ae, h_be) has covariance sigma2_e [[1, rho_e], [rho_e, 1]], and the two pairs are independent.
std::vector<ChannelSample> sample_channels(const ModelParams &params, std::size_t n, std::uint64_t seed);

/// Columns (y_A, y_B, y_E3, y_E4), fresh channels and unit-variance noise per row.
SampleBatch sample_observations(const ModelParams &params, std::size_t n, std::uint64_t seed);

/// As sample_observations but with Eve's channel coefficients held at (h_ae, h_be) for every row.
/// The legitimate channel and noise draws coincide with sample_observations for the same seed.
SampleBatch sample_observations_given_eve_csi(const ModelParams &params, double h_ae, double h_be, std::size_t n,
                                              std::uint64_t seed);

} // namespace reflectkey

#endif
