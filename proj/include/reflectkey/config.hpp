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

#ifndef REFLECTKEY_CONFIG_HPP
#define REFLECTKEY_CONFIG_HPP

#include "reflectkey/bounds.hpp"
#include "reflectkey/results.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace reflectkey
{

/// Parses a grid axis: numbers and inclusive ranges "start:step:stop", separated by commas
/// or whitespace. "-10:5:10, 30" gives -10 -5 0 5 10 30. Errors name the field.
std::vector<double> parse_grid(std::string_view field, std::string_view text);

/// Everything needed to run a sweep and write its result file.
struct RunConfig
{
    Regime regime = Regime::no_csie;

    // Grid axes. SNR values are in dB, 10 log10(sigma2). When snr_eve_db is set it replaces
    // sigma2_e through sigma2_e = 10^(snr_eve_db / 10) / (alpha^2 sigma2).
    std::vector<double> snr_db;
    std::vector<double> snr_eve_db;
    std::vector<double> sigma2_e{1.0};
    std::vector<double> alpha{0.05};
    std::vector<double> rho_ab{0.9};
    std::vector<double> rho_e{0.1};

    /// knn, kde or both; empty selects knn for no_csie. Must stay empty for the other regimes.
    std::string estimator;
    int k = 4;
    Bandwidth bandwidth = Bandwidth::silverman();

    std::size_t n_samples = 100000;
    std::size_t n_channel_draws = 1000;
    std::uint64_t seed = 1;
    unsigned workers = 1;

    std::string output;
    OutputFormat format = OutputFormat::csv;

    /// Throws std::invalid_argument whose message starts with the offending field name.
    void validate() const;

    /// Methods evaluated per grid point, in output order.
    std::vector<EstimatorMethod> methods() const;
};

struct GridPoint
{
    ModelParams params;
    double snr_db = 0.0;     ///< as requested
    double snr_eve_db = 0.0; ///< as requested, or derived from sigma2_e
};

/// One "key = value" line of a config file.
struct ConfigEntry
{
    std::string key;
    std::string value;
    int line = 0;
};

/// Reads a config file: "key = value" lines, '#' or ';' comments, blank lines. Values may be
/// double-quoted. Malformed lines throw std::invalid_argument as "source:line: message".
std::vector<ConfigEntry> parse_config_text(std::istream &is, const std::string &source);

/// Sets one field from its text form. Keys are the RunConfig field names. Throws
/// std::invalid_argument as "key: message", also for unknown keys.
void apply_setting(RunConfig &config, std::string_view key, std::string_view value);

/// File entries first, then overrides (later wins), then validation. workers falls back to
/// REFLECTKEY_WORKERS and then 1 when neither source sets it.
RunConfig load_run_config(const std::vector<ConfigEntry> &file, const std::string &source,
                          const std::vector<std::pair<std::string, std::string>> &overrides);

/// Grid points in output order: alpha, rho_ab, rho_e, then the Eve axis (snr_eve_db or sigma2_e),
/// with snr_db varying fastest.
std::vector<GridPoint> expand_grid(const RunConfig &config);

/// Runs the sweep. With several methods each grid point yields one record per method, adjacent.
/// Progress goes to log; failed points appear as records and do not abort the run.
std::vector<ResultRecord> run(const RunConfig &config, std::ostream &log);

/// Writes records to config.output in config.format.
void write_results(const RunConfig &config, const std::vector<ResultRecord> &records);

/// Worker count from REFLECTKEY_WORKERS, or fallback when unset. Throws on a malformed value.
unsigned workers_from_environment(unsigned fallback = 1);

} // namespace reflectkey

#endif
