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

#include "reflectkey/antenna.hpp"
#include "reflectkey/config.hpp"
#include "reflectkey/oracle.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

using namespace reflectkey;

namespace
{

// Sweep flags, in the order they are applied over the config file.
const std::vector<std::pair<const char *, const char *>> sweep_flags{
    {"regime", "no_csie | full_csie | no_eve"},
    {"snr_db", "SNR grid [dB], e.g. -10:5:80 or 0,10,20"},
    {"snr_eve_db", "Eve SNR grid [dB]; replaces sigma2_e"},
    {"sigma2_e", "Eve channel variance grid (default 1)"},
    {"alpha", "reflection coefficient grid (default 0.05)"},
    {"rho_ab", "Alice-Bob correlation grid (default 0.9)"},
    {"rho_e", "Eve channel correlation grid (default 0.1)"},
    {"estimator", "knn | kde | both (no_csie only; default knn)"},
    {"k", "kNN neighbor rank (default 4)"},
    {"bandwidth", "KDE bandwidth: silverman | scott | <h> (default silverman)"},
    {"n_samples", "samples per point, no_csie (default 100000)"},
    {"n_channel_draws", "Eve channel draws per point, full_csie (default 1000)"},
    {"seed", "run seed (default 1)"},
    {"workers", "worker threads (default: REFLECTKEY_WORKERS or 1)"},
    {"output", "result file"},
    {"format", "csv | json (default csv)"},
};

std::string flag_name(std::string key)
{
    for (auto &c : key)
        if (c == '_')
            c = '-';
    return "--" + key;
}

template <class T>
T with_field(const char *field, T (*parse)(std::string_view), const std::string &text)
{
    try
    {
        return parse(text);
    }
    catch (const std::invalid_argument &ex)
    {
        throw std::invalid_argument(std::string(field) + ": " + ex.what());
    }
}

int run_sweep(const std::string &config_path, const std::vector<std::pair<std::string, std::string>> &overrides)
{
    RunConfig config;
    try
    {
        std::vector<ConfigEntry> entries;
        if (!config_path.empty())
        {
            std::ifstream in(config_path);
            if (!in)
                throw std::invalid_argument("config: cannot open '" + config_path + "'");
            entries = parse_config_text(in, config_path);
        }
        config = load_run_config(entries, config_path.empty() ? "<flags>" : config_path, overrides);
    }
    catch (const std::invalid_argument &ex)
    {
        std::cerr << "config error: " << ex.what() << '\n';
        return 2;
    }
    const auto records = run(config, std::cerr);
    write_results(config, records);
    std::size_t failed = 0;
    for (const auto &r : records)
        failed += r.method.rfind("failed:", 0) == 0;
    std::cerr << "wrote " << records.size() << " records to " << config.output;
    if (failed)
        std::cerr << " (" << failed << " failed)";
    std::cerr << '\n';
    return 0;
}

struct AntennaArgs
{
    double r_loss = 0.0;
    double r_rad = 50.0;
    double x_a = 0.0;
    double v_oc = 1.0;
    double coupling = 1.0;
    bool json = false;
};

int run_antenna(const AntennaArgs &a)
{
    antenna::AntennaCircuit circuit;
    circuit.r_loss = a.r_loss;
    circuit.r_rad = a.r_rad;
    circuit.x_a = a.x_a;
    circuit.v_oc = a.v_oc;
    antenna::PowerBreakdown p;
    double alpha = 0.0;
    try
    {
        p = antenna::power_breakdown(antenna::matched_load(circuit));
        alpha = antenna::suggest_alpha(p.ratio, a.coupling);
    }
    catch (const std::invalid_argument &ex)
    {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }

    if (a.json)
    {
        nlohmann::ordered_json j;
        j["r_loss"] = a.r_loss;
        j["r_rad"] = a.r_rad;
        j["x_a"] = a.x_a;
        j["v_oc"] = a.v_oc;
        j["p_load"] = p.p_load;
        j["p_diss"] = p.p_diss;
        j["p_rerad"] = p.p_rerad;
        j["p_total"] = p.p_total;
        j["ratio"] = p.ratio;
        j["coupling"] = a.coupling;
        j["alpha"] = alpha;
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    auto row = [](const char *name, double v) {
        std::cout << std::left << std::setw(18) << name << format_number(v) << '\n';
    };
    row("P_load [W]", p.p_load);
    row("P_diss [W]", p.p_diss);
    row("P_rerad [W]", p.p_rerad);
    row("P_total [W]", p.p_total);
    row("ratio", p.ratio);
    row("coupling", a.coupling);
    row("suggested alpha", alpha);
    return 0;
}

struct OracleArgs
{
    std::string method = "both";
    std::vector<int> dims{1, 2, 3, 4};
    int cases = 20;
    Eigen::Index n = 20000;
    int k = 4;
    std::string bandwidth = "silverman";
    double tolerance = 3.0;
    std::uint64_t seed = 2026;
};

int run_validate(const OracleArgs &a)
{
    OracleOptions o;
    try
    {
        if (a.method == "both")
            o.methods = {EstimatorMethod::knn, EstimatorMethod::kde};
        else
            o.methods = {with_field("method", parse_estimator_method, a.method)};
        o.bandwidth = with_field("bandwidth", parse_bandwidth, a.bandwidth);
    }
    catch (const std::invalid_argument &ex)
    {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
    o.dims = a.dims;
    o.cases = a.cases;
    o.n = a.n;
    o.k = a.k;
    o.tolerance = a.tolerance;
    o.seed = a.seed;

    std::size_t failures = 0, total = 0;
    run_oracle_suite(o, [&](const OracleCase &c) {
        ++total;
        failures += !c.pass;
        std::cout << (c.pass ? "PASS" : "FAIL") << "  d=" << c.dim << " case=" << std::setw(2) << c.index << ' '
                  << to_string(c.method) << std::fixed << std::setprecision(4) << "  truth=" << c.truth
                  << "  estimate=" << c.estimate << "  stderr=" << c.std_error << std::setprecision(2)
                  << "  z=" << c.z << std::defaultfloat << std::setprecision(6) << std::endl;
    });
    std::cout << (failures ? "FAIL" : "PASS") << "  " << total - failures << "/" << total
              << " cases within " << a.tolerance << " standard errors\n";
    return failures ? 1 : 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Secret-key rate bounds for reciprocal channels with antenna reflections."};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sweep_values(sweep_flags.size());
    auto *sweep_cmd = app.add_subcommand("sweep", "Evaluate key-rate bounds over a parameter grid.");
    sweep_cmd->add_option("--config,-c", config_path, "key = value config file; flags override its values");
    for (std::size_t i = 0; i < sweep_flags.size(); ++i)
    {
        const std::string key = sweep_flags[i].first;
        std::string names = flag_name(key);
        if (key == "output")
            names += ",-o";
        sweep_cmd->add_option(names, sweep_values[i], sweep_flags[i].second)->allow_extra_args(false);
    }

    AntennaArgs an;
    auto *antenna_cmd = app.add_subcommand("antenna", "Power breakdown of a conjugate-matched antenna.");
    antenna_cmd->add_option("--r-loss", an.r_loss, "loss resistance [ohm]")->capture_default_str();
    antenna_cmd->add_option("--r-rad", an.r_rad, "radiation resistance [ohm]")->capture_default_str();
    antenna_cmd->add_option("--x-a", an.x_a, "antenna reactance [ohm]")->capture_default_str();
    antenna_cmd->add_option("--v-oc", an.v_oc, "open-circuit voltage [V]")->capture_default_str();
    antenna_cmd->add_option("--coupling", an.coupling, "coupling factor for the suggested alpha")
        ->capture_default_str();
    antenna_cmd->add_flag("--json", an.json, "print JSON instead of a table");

    OracleArgs orc;
    auto *validate_cmd =
        app.add_subcommand("validate-estimators", "Check the entropy estimators against Gaussian closed forms.");
    validate_cmd->add_option("--method", orc.method, "knn | kde | both")->capture_default_str();
    validate_cmd->add_option("--dims", orc.dims, "dimensions to test")->capture_default_str();
    validate_cmd->add_option("--cases", orc.cases, "covariances per dimension")->capture_default_str();
    validate_cmd->add_option("--n", orc.n, "samples per case")->capture_default_str();
    validate_cmd->add_option("--k", orc.k, "kNN neighbor rank")->capture_default_str();
    validate_cmd->add_option("--bandwidth", orc.bandwidth, "KDE bandwidth")->capture_default_str();
    validate_cmd->add_option("--tolerance", orc.tolerance, "allowed error in standard errors")
        ->capture_default_str();
    validate_cmd->add_option("--seed", orc.seed, "suite seed")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (sweep_cmd->parsed())
        {
            std::vector<std::pair<std::string, std::string>> overrides;
            for (std::size_t i = 0; i < sweep_flags.size(); ++i)
                if (sweep_cmd->get_option(flag_name(sweep_flags[i].first))->count() > 0)
                    overrides.emplace_back(sweep_flags[i].first, sweep_values[i]);
            return run_sweep(config_path, overrides);
        }
        if (antenna_cmd->parsed())
            return run_antenna(an);
        if (validate_cmd->parsed())
            return run_validate(orc);
    }
    catch (const std::exception &ex)
    {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
