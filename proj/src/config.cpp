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

#include "reflectkey/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace reflectkey
{

namespace
{

[[noreturn]] void field_error(std::string_view field, const std::string &message)
{
    throw std::invalid_argument(std::string(field) + ": " + message);
}

double parse_finite(std::string_view field, std::string_view token)
{
    double value = 0.0;
    const char *begin = token.data();
    const char *end = begin + token.size();
    if (begin != end && *begin == '+')
        ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value))
        field_error(field, "'" + std::string(token) + "' is not a finite number");
    return value;
}

void append_range(std::string_view field, std::string_view token, std::vector<double> &out)
{
    const auto c1 = token.find(':');
    const auto c2 = token.find(':', c1 + 1);
    if (c2 == std::string_view::npos || token.find(':', c2 + 1) != std::string_view::npos)
        field_error(field, "range '" + std::string(token) + "' must have the form start:step:stop");
    const double start = parse_finite(field, token.substr(0, c1));
    const double step = parse_finite(field, token.substr(c1 + 1, c2 - c1 - 1));
    const double stop = parse_finite(field, token.substr(c2 + 1));
    if (step == 0.0)
        field_error(field, "range '" + std::string(token) + "' has a zero step");
    const double span = (stop - start) / step;
    if (span < -1e-9)
        field_error(field, "range '" + std::string(token) + "' steps away from its stop value");
    const double steps = std::floor(span + 1e-9);
    if (steps > 1e6)
        field_error(field, "range '" + std::string(token) + "' has too many points");
    const auto count = static_cast<std::size_t>(steps) + 1;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(start + static_cast<double>(i) * step);
    // Land exactly on stop when the range reaches it.
    if (std::abs(span - steps) <= 1e-9)
        out.back() = stop;
}

void require_axis(std::string_view field, const std::vector<double> &axis)
{
    if (axis.empty())
        field_error(field, "grid is empty");
}

template <class T>
T parse_integer(std::string_view field, std::string_view text)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        field_error(field, "'" + std::string(text) + "' is not a valid integer");
    return value;
}

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

std::vector<ConfigEntry> parse_config_text(std::istream &is, const std::string &source)
{
    std::vector<ConfigEntry> out;
    std::string raw;
    int line = 0;
    while (std::getline(is, raw))
    {
        ++line;
        auto fail = [&](const std::string &message) {
            throw std::invalid_argument(source + ":" + std::to_string(line) + ": " + message);
        };
        std::string_view text = trim(raw);
        if (text.empty() || text.front() == '#' || text.front() == ';')
            continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos)
            fail("expected 'key = value'");
        ConfigEntry entry;
        entry.key = std::string(trim(text.substr(0, eq)));
        entry.line = line;
        if (entry.key.empty())
            fail("missing key before '='");
        std::string_view value = trim(text.substr(eq + 1));
        if (!value.empty() && value.front() == '"')
        {
            const auto close = value.find('"', 1);
            if (close == std::string_view::npos)
                fail(entry.key + ": unterminated quoted value");
            const auto rest = trim(value.substr(close + 1));
            if (!rest.empty() && rest.front() != '#' && rest.front() != ';')
                fail(entry.key + ": unexpected text after quoted value");
            value = value.substr(1, close - 1);
        }
        else
        {
            const auto comment = value.find_first_of("#;");
            if (comment != std::string_view::npos)
                value = trim(value.substr(0, comment));
        }
        entry.value = std::string(value);
        out.push_back(std::move(entry));
    }
    return out;
}

void apply_setting(RunConfig &c, std::string_view key, std::string_view value)
{
    const std::string text(trim(value));
    try
    {
        if (key == "regime")
            c.regime = parse_regime(text);
        else if (key == "bandwidth")
            c.bandwidth = parse_bandwidth(text);
        else if (key == "format")
            c.format = parse_output_format(text);
    }
    catch (const std::invalid_argument &ex)
    {
        field_error(key, ex.what());
    }
    if (key == "regime" || key == "bandwidth" || key == "format")
        return;

    if (key == "snr_db")
        c.snr_db = parse_grid(key, text);
    else if (key == "snr_eve_db")
        c.snr_eve_db = parse_grid(key, text);
    else if (key == "sigma2_e")
        c.sigma2_e = parse_grid(key, text);
    else if (key == "alpha")
        c.alpha = parse_grid(key, text);
    else if (key == "rho_ab")
        c.rho_ab = parse_grid(key, text);
    else if (key == "rho_e")
        c.rho_e = parse_grid(key, text);
    else if (key == "estimator")
        c.estimator = text;
    else if (key == "k")
        c.k = parse_integer<int>(key, text);
    else if (key == "n_samples")
        c.n_samples = parse_integer<std::size_t>(key, text);
    else if (key == "n_channel_draws")
        c.n_channel_draws = parse_integer<std::size_t>(key, text);
    else if (key == "seed")
        c.seed = parse_integer<std::uint64_t>(key, text);
    else if (key == "workers")
        c.workers = parse_integer<unsigned>(key, text);
    else if (key == "output")
        c.output = text;
    else
        field_error(key, "unknown setting");
}

RunConfig load_run_config(const std::vector<ConfigEntry> &file, const std::string &source,
                          const std::vector<std::pair<std::string, std::string>> &overrides)
{
    RunConfig c;
    c.workers = 0;
    for (const auto &entry : file)
    {
        try
        {
            apply_setting(c, entry.key, entry.value);
        }
        catch (const std::invalid_argument &ex)
        {
            throw std::invalid_argument(source + ":" + std::to_string(entry.line) + ": " + ex.what());
        }
    }
    for (const auto &[key, value] : overrides)
        apply_setting(c, key, value);
    if (c.workers == 0)
        c.workers = workers_from_environment(1);
    if (c.output.empty())
        field_error("output", "no output path given");
    c.validate();
    return c;
}

std::vector<double> parse_grid(std::string_view field, std::string_view text)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size())
    {
        const auto begin = text.find_first_not_of(", \t\r\n", pos);
        if (begin == std::string_view::npos)
            break;
        auto end = text.find_first_of(", \t\r\n", begin);
        if (end == std::string_view::npos)
            end = text.size();
        const auto token = text.substr(begin, end - begin);
        if (token.find(':') != std::string_view::npos)
            append_range(field, token, out);
        else
            out.push_back(parse_finite(field, token));
        pos = end;
    }
    return out;
}

void RunConfig::validate() const
{
    require_axis("snr_db", snr_db);
    if (snr_eve_db.empty())
        require_axis("sigma2_e", sigma2_e);
    require_axis("alpha", alpha);
    require_axis("rho_ab", rho_ab);
    require_axis("rho_e", rho_e);

    if (regime == Regime::no_csie)
    {
        if (!estimator.empty() && estimator != "knn" && estimator != "kde" && estimator != "both")
            field_error("estimator", "'" + estimator + "' is not one of knn, kde, both");
        if (n_samples < 1000)
            field_error("n_samples", "must be at least 1000");
    }
    else if (!estimator.empty())
        field_error("estimator", "only applies to regime no_csie (regime is " + std::string(to_string(regime)) + ")");

    if (regime == Regime::full_csie && n_channel_draws < 100)
        field_error("n_channel_draws", "must be at least 100");
    if (k < 1)
        field_error("k", "must be positive");
    if (bandwidth.rule == Bandwidth::Rule::fixed && !(bandwidth.value > 0.0))
        field_error("bandwidth", "must be positive");
    if (workers < 1)
        field_error("workers", "must be positive");

    if (!snr_eve_db.empty())
        for (double a : alpha)
            if (a == 0.0)
                field_error("snr_eve_db", "cannot be set when alpha is 0 (Eve's SNR is identically zero)");

    for (const auto &point : expand_grid(*this))
    {
        try
        {
            point.params.validate();
        }
        catch (const std::invalid_argument &ex)
        {
            throw std::invalid_argument(std::string(ex.what()).substr(0, std::string(ex.what()).find(' ')) +
                                        ": " + ex.what() + " (at snr_db=" + format_number(point.snr_db) +
                                        ", snr_eve_db=" + format_number(point.snr_eve_db) + ")");
        }
    }
}

std::vector<EstimatorMethod> RunConfig::methods() const
{
    if (regime != Regime::no_csie)
        return {};
    if (estimator == "both")
        return {EstimatorMethod::knn, EstimatorMethod::kde};
    if (estimator == "kde")
        return {EstimatorMethod::kde};
    return {EstimatorMethod::knn};
}

std::vector<GridPoint> expand_grid(const RunConfig &config)
{
    const bool eve_in_db = !config.snr_eve_db.empty();
    const auto &eve_axis = eve_in_db ? config.snr_eve_db : config.sigma2_e;

    std::vector<GridPoint> out;
    for (double alpha : config.alpha)
        for (double rho_ab : config.rho_ab)
            for (double rho_e : config.rho_e)
                for (double eve : eve_axis)
                    for (double snr_db : config.snr_db)
                    {
                        GridPoint p;
                        p.snr_db = snr_db;
                        p.params.sigma2 = std::pow(10.0, snr_db / 10.0);
                        p.params.alpha = alpha;
                        p.params.rho_ab = rho_ab;
                        p.params.rho_e = rho_e;
                        if (eve_in_db)
                        {
                            p.snr_eve_db = eve;
                            p.params.sigma2_e = std::pow(10.0, eve / 10.0) / (alpha * alpha * p.params.sigma2);
                        }
                        else
                        {
                            p.params.sigma2_e = eve;
                            p.snr_eve_db = 10.0 * std::log10(derived_snrs(p.params).snr_eve);
                        }
                        out.push_back(p);
                    }
    return out;
}

std::vector<ResultRecord> run(const RunConfig &config, std::ostream &log)
{
    config.validate();
    const auto grid = expand_grid(config);
    std::vector<ModelParams> params;
    params.reserve(grid.size());
    for (const auto &p : grid)
        params.push_back(p.params);

    auto methods = config.methods();
    const bool estimated = !methods.empty();
    if (!estimated)
        methods.push_back(EstimatorMethod::knn); // unused placeholder

    std::vector<std::vector<BoundEstimate>> per_method;
    for (const auto method : methods)
    {
        SweepSettings settings;
        settings.n_samples = config.n_samples;
        settings.n_channel_draws = config.n_channel_draws;
        settings.seed = config.seed;
        settings.workers = config.workers;
        settings.estimator.method = method;
        settings.estimator.k = config.k;
        settings.estimator.bandwidth = config.bandwidth;

        const std::string label = estimated ? std::string(to_string(method)) : std::string(to_string(config.regime));
        std::size_t done = 0;
        settings.on_point = [&](std::size_t i, const BoundEstimate &e) {
            ++done;
            log << "[" << label << " " << done << "/" << grid.size() << "] snr_db=" << format_number(grid[i].snr_db)
                << " snr_eve_db=" << format_number(grid[i].snr_eve_db);
            if (e.ok())
                log << " lower=" << format_number(e.lower.bits) << " upper=" << format_number(e.upper.bits);
            else
                log << " FAILED: " << e.diagnostics.error;
            log << '\n';
            log.flush();
        };
        per_method.push_back(sweep(params, config.regime, settings));
    }

    std::vector<ResultRecord> records;
    records.reserve(grid.size() * per_method.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (const auto &results : per_method)
        {
            ResultRecord r = to_record(results[i]);
            r.snr_db = grid[i].snr_db;
            r.snr_eve_db = grid[i].snr_eve_db;
            records.push_back(std::move(r));
        }
    return records;
}

void write_results(const RunConfig &config, const std::vector<ResultRecord> &records)
{
    if (config.output.empty())
        field_error("output", "no output path given");
    std::ofstream os(config.output, std::ios::binary | std::ios::trunc);
    if (!os)
        field_error("output", "cannot open '" + config.output + "' for writing");
    if (config.format == OutputFormat::csv)
        write_csv(os, records);
    else
        write_json(os, records);
    os.close();
    if (!os)
        field_error("output", "failed writing '" + config.output + "'");
}

unsigned workers_from_environment(unsigned fallback)
{
    const char *value = std::getenv("REFLECTKEY_WORKERS");
    if (value == nullptr || *value == '\0')
        return fallback;
    unsigned workers = 0;
    const std::string_view text(value);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), workers);
    if (ec != std::errc{} || ptr != text.data() + text.size() || workers < 1)
        throw std::invalid_argument("REFLECTKEY_WORKERS: '" + std::string(text) + "' is not a positive integer");
    return workers;
}

} // namespace reflectkey
