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

#include "reflectkey/results.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace reflectkey
{

namespace
{

bool same_double(double a, double b)
{
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

double parse_double(std::string_view text, std::string_view field)
{
    double value = 0.0;
    const char *begin = text.data();
    const char *end = begin + text.size();
    // from_chars rejects a leading '+'.
    if (begin != end && *begin == '+')
        ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw std::invalid_argument("Field '" + std::string(field) + "': cannot parse '" + std::string(text) +
                                    "' as a number.");
    return value;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view field)
{
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("Field '" + std::string(field) + "': cannot parse '" + std::string(text) +
                                    "' as a non-negative integer.");
    return value;
}

std::string quote_csv(const std::string &s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Splits one CSV record, reading further lines when a quoted field spans them.
bool read_csv_record(std::istream &is, std::vector<std::string> &fields)
{
    fields.clear();
    std::string line;
    if (!std::getline(is, line))
        return false;
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    while (true)
    {
        if (i == line.size())
        {
            if (quoted)
            {
                field += '\n';
                if (!std::getline(is, line))
                    throw std::invalid_argument("CSV: unterminated quoted field.");
                i = 0;
                continue;
            }
            break;
        }
        const char c = line[i++];
        if (quoted)
        {
            if (c == '"')
            {
                if (i < line.size() && line[i] == '"')
                {
                    field += '"';
                    ++i;
                }
                else
                    quoted = false;
            }
            else
                field += c;
        }
        else if (c == '"')
            quoted = true;
        else if (c == ',')
        {
            fields.push_back(std::move(field));
            field.clear();
        }
        else if (c != '\r' || i != line.size())
            field += c;
    }
    fields.push_back(std::move(field));
    return true;
}

nlohmann::json number_to_json(double v)
{
    if (std::isfinite(v))
        return v;
    return format_number(v);
}

double number_from_json(const nlohmann::json &j, std::string_view field)
{
    if (j.is_number())
        return j.get<double>();
    if (j.is_string())
    {
        const auto s = j.get<std::string>();
        if (s == "nan" || s == "inf" || s == "-inf")
            return parse_double(s, field);
    }
    throw std::invalid_argument("Field '" + std::string(field) + "': expected a number.");
}

std::uint64_t unsigned_from_json(const nlohmann::json &j, std::string_view field)
{
    if (!j.is_number_unsigned())
        throw std::invalid_argument("Field '" + std::string(field) + "': expected a non-negative integer.");
    return j.get<std::uint64_t>();
}

} // namespace

bool ResultRecord::same_as(const ResultRecord &o) const
{
    return same_double(snr_db, o.snr_db) && same_double(snr_eve_db, o.snr_eve_db) && same_double(sigma2, o.sigma2) &&
           same_double(sigma2_e, o.sigma2_e) && same_double(rho_ab, o.rho_ab) && same_double(rho_e, o.rho_e) &&
           same_double(alpha, o.alpha) && regime == o.regime && same_double(lower_bits, o.lower_bits) &&
           same_double(lower_stderr, o.lower_stderr) && same_double(upper_bits, o.upper_bits) &&
           same_double(upper_stderr, o.upper_stderr) && method == o.method && n == o.n && seed == o.seed &&
           clamp_count == o.clamp_count;
}

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{})
        throw std::runtime_error("Number formatting failed.");
    return std::string(buf, ptr);
}

ResultRecord to_record(const BoundEstimate &e)
{
    ResultRecord r;
    const auto snrs = derived_snrs(e.params);
    r.snr_db = 10.0 * std::log10(snrs.snr);
    r.snr_eve_db = 10.0 * std::log10(snrs.snr_eve);
    r.sigma2 = e.params.sigma2;
    r.sigma2_e = e.params.sigma2_e;
    r.rho_ab = e.params.rho_ab;
    r.rho_e = e.params.rho_e;
    r.alpha = e.params.alpha;
    r.regime = std::string(to_string(e.regime));
    r.lower_bits = e.lower.bits;
    r.lower_stderr = e.lower.std_error;
    r.upper_bits = e.upper.bits;
    r.upper_stderr = e.upper.std_error;
    r.method = e.ok() ? e.diagnostics.method : "failed:" + e.diagnostics.method;
    switch (e.regime)
    {
    case Regime::no_csie:
        r.n = e.diagnostics.n_samples;
        break;
    case Regime::full_csie:
        r.n = e.diagnostics.n_channel_draws;
        break;
    case Regime::no_eve:
        r.n = 0;
        break;
    }
    r.seed = e.seed;
    r.clamp_count = e.diagnostics.clamp_count;
    return r;
}

OutputFormat parse_output_format(std::string_view name)
{
    if (name == "csv")
        return OutputFormat::csv;
    if (name == "json")
        return OutputFormat::json;
    throw std::invalid_argument("Unknown output format '" + std::string(name) + "' (expected csv or json).");
}

void write_csv(std::ostream &os, const std::vector<ResultRecord> &records)
{
    for (std::size_t i = 0; i < result_columns.size(); ++i)
        os << (i ? "," : "") << result_columns[i];
    os << '\n';
    for (const auto &r : records)
    {
        os << format_number(r.snr_db) << ',' << format_number(r.snr_eve_db) << ',' << format_number(r.sigma2) << ','
           << format_number(r.sigma2_e) << ',' << format_number(r.rho_ab) << ',' << format_number(r.rho_e) << ','
           << format_number(r.alpha) << ',' << quote_csv(r.regime) << ',' << format_number(r.lower_bits) << ','
           << format_number(r.lower_stderr) << ',' << format_number(r.upper_bits) << ','
           << format_number(r.upper_stderr) << ',' << quote_csv(r.method) << ',' << r.n << ',' << r.seed << ','
           << r.clamp_count << '\n';
    }
}

std::vector<ResultRecord> read_csv(std::istream &is)
{
    std::vector<std::string> f;
    if (!read_csv_record(is, f))
        throw std::invalid_argument("CSV: missing header row.");
    if (f.size() != result_columns.size())
        throw std::invalid_argument("CSV: header has " + std::to_string(f.size()) + " columns, expected " +
                                    std::to_string(result_columns.size()) + ".");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] != result_columns[i])
            throw std::invalid_argument("CSV: header column " + std::to_string(i + 1) + " is '" + f[i] +
                                        "', expected '" + std::string(result_columns[i]) + "'.");

    std::vector<ResultRecord> out;
    std::size_t line = 1;
    while (read_csv_record(is, f))
    {
        ++line;
        if (f.size() == 1 && f[0].empty())
            continue;
        if (f.size() != result_columns.size())
            throw std::invalid_argument("CSV: record " + std::to_string(line) + " has " + std::to_string(f.size()) +
                                        " fields.");
        const auto &c = result_columns;
        ResultRecord r;
        r.snr_db = parse_double(f[0], c[0]);
        r.snr_eve_db = parse_double(f[1], c[1]);
        r.sigma2 = parse_double(f[2], c[2]);
        r.sigma2_e = parse_double(f[3], c[3]);
        r.rho_ab = parse_double(f[4], c[4]);
        r.rho_e = parse_double(f[5], c[5]);
        r.alpha = parse_double(f[6], c[6]);
        r.regime = f[7];
        r.lower_bits = parse_double(f[8], c[8]);
        r.lower_stderr = parse_double(f[9], c[9]);
        r.upper_bits = parse_double(f[10], c[10]);
        r.upper_stderr = parse_double(f[11], c[11]);
        r.method = f[12];
        r.n = parse_unsigned(f[13], c[13]);
        r.seed = parse_unsigned(f[14], c[14]);
        r.clamp_count = parse_unsigned(f[15], c[15]);
        out.push_back(std::move(r));
    }
    return out;
}

void write_json(std::ostream &os, const std::vector<ResultRecord> &records)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto &r : records)
    {
        nlohmann::ordered_json o;
        o["snr_db"] = number_to_json(r.snr_db);
        o["snr_eve_db"] = number_to_json(r.snr_eve_db);
        o["sigma2"] = number_to_json(r.sigma2);
        o["sigma2_e"] = number_to_json(r.sigma2_e);
        o["rho_ab"] = number_to_json(r.rho_ab);
        o["rho_e"] = number_to_json(r.rho_e);
        o["alpha"] = number_to_json(r.alpha);
        o["regime"] = r.regime;
        o["lower_bits"] = number_to_json(r.lower_bits);
        o["lower_stderr"] = number_to_json(r.lower_stderr);
        o["upper_bits"] = number_to_json(r.upper_bits);
        o["upper_stderr"] = number_to_json(r.upper_stderr);
        o["method"] = r.method;
        o["n"] = r.n;
        o["seed"] = r.seed;
        o["clamp_count"] = r.clamp_count;
        arr.push_back(std::move(o));
    }
    os << arr.dump(2) << '\n';
}

std::vector<ResultRecord> read_json(std::istream &is)
{
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(is);
    }
    catch (const nlohmann::json::parse_error &ex)
    {
        throw std::invalid_argument(std::string("JSON: ") + ex.what());
    }
    if (!doc.is_array())
        throw std::invalid_argument("JSON: expected an array of records.");

    std::vector<ResultRecord> out;
    for (const auto &o : doc)
    {
        if (!o.is_object())
            throw std::invalid_argument("JSON: every record must be an object.");
        for (auto name : result_columns)
            if (!o.contains(std::string(name)))
                throw std::invalid_argument("JSON: record lacks field '" + std::string(name) + "'.");
        auto num = [&](const char *name) { return number_from_json(o.at(name), name); };
        auto str = [&](const char *name) {
            if (!o.at(name).is_string())
                throw std::invalid_argument(std::string("Field '") + name + "': expected a string.");
            return o.at(name).get<std::string>();
        };
        ResultRecord r;
        r.snr_db = num("snr_db");
        r.snr_eve_db = num("snr_eve_db");
        r.sigma2 = num("sigma2");
        r.sigma2_e = num("sigma2_e");
        r.rho_ab = num("rho_ab");
        r.rho_e = num("rho_e");
        r.alpha = num("alpha");
        r.regime = str("regime");
        r.lower_bits = num("lower_bits");
        r.lower_stderr = num("lower_stderr");
        r.upper_bits = num("upper_bits");
        r.upper_stderr = num("upper_stderr");
        r.method = str("method");
        r.n = unsigned_from_json(o.at("n"), "n");
        r.seed = unsigned_from_json(o.at("seed"), "seed");
        r.clamp_count = unsigned_from_json(o.at("clamp_count"), "clamp_count");
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace reflectkey
