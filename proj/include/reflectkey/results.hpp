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

#ifndef REFLECTKEY_RESULTS_HPP
#define REFLECTKEY_RESULTS_HPP

#include "reflectkey/bounds.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace reflectkey
{

/// One output row. Carries every parameter needed to reproduce the point on its own.
struct ResultRecord
{
    double snr_db = 0.0;
    double snr_eve_db = 0.0;
    double sigma2 = 0.0;
    double sigma2_e = 0.0;
    double rho_ab = 0.0;
    double rho_e = 0.0;
    double alpha = 0.0;
    std::string regime;
    double lower_bits = 0.0;
    double lower_stderr = 0.0;
    double upper_bits = 0.0;
    double upper_stderr = 0.0;
    std::string method; ///< prefixed with "failed:" when the point could not be evaluated
    std::uint64_t n = 0; ///< samples (no_csie), channel draws (full_csie) or 0 (no_eve)
    std::uint64_t seed = 0;
    std::uint64_t clamp_count = 0;

    /// Field-wise equality where NaN equals NaN.
    bool same_as(const ResultRecord &other) const;
};

inline constexpr std::array<std::string_view, 16> result_columns{
    "snr_db", "snr_eve_db", "sigma2", "sigma2_e", "rho_ab", "rho_e", "alpha", "regime",
    "lower_bits", "lower_stderr", "upper_bits", "upper_stderr", "method", "n", "seed", "clamp_count"};

ResultRecord to_record(const BoundEstimate &estimate);

enum class OutputFormat
{
    csv,
    json
};

OutputFormat parse_output_format(std::string_view name);

/// CSV with a header row of result_columns, RFC 4180 quoting, shortest round-trip numbers.
void write_csv(std::ostream &os, const std::vector<ResultRecord> &records);
std::vector<ResultRecord> read_csv(std::istream &is);

/// JSON array of flat objects keyed by result_columns. Non-finite numbers are the strings
/// "nan", "inf" and "-inf".
void write_json(std::ostream &os, const std::vector<ResultRecord> &records);
std::vector<ResultRecord> read_json(std::istream &is);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

} // namespace reflectkey

#endif
