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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero if any fails.
// Recipes are run through the command-line tool, twice each, and the outputs are reused.

#include "reflectkey/antenna.hpp"
#include "reflectkey/bounds.hpp"
#include "reflectkey/gauss.hpp"
#include "reflectkey/oracle.hpp"
#include "reflectkey/results.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace reflectkey;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4)
{
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

int failures = 0;

void report(int id, const std::string &name, bool pass, const std::string &detail)
{
    failures += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  [" << id << "] " << name << ": " << detail << std::endl;
}

std::string slurp(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<ResultRecord> read_records(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    return read_csv(in);
}

int run_cli(const std::string &args, const std::string &log)
{
    const std::string cmd = std::string(REFLECTKEY_CLI) + " " + args + " 2> " + log;
    return std::system(cmd.c_str());
}

struct RecipeRun
{
    bool ok = false;
    bool identical = false;
    double seconds = 0.0;
    std::vector<ResultRecord> records;
};

std::map<int, RecipeRun> recipes;

void run_recipes()
{
    for (int fig = 4; fig <= 8; ++fig)
    {
        RecipeRun r;
        const std::string cfg = std::string(REFLECTKEY_RECIPES) + "/fig" + std::to_string(fig) + ".cfg";
        const std::string a = "fig" + std::to_string(fig) + "_a.csv";
        const std::string b = "fig" + std::to_string(fig) + "_b.csv";
        const auto t0 = Clock::now();
        const int ra = run_cli("sweep -c " + cfg + " -o " + a, "fig" + std::to_string(fig) + "_a.log");
        const int rb = run_cli("sweep -c " + cfg + " -o " + b, "fig" + std::to_string(fig) + "_b.log");
        r.seconds = seconds_since(t0);
        r.ok = ra == 0 && rb == 0;
        if (r.ok)
        {
            const std::string da = slurp(a), db = slurp(b);
            r.identical = !da.empty() && da == db;
            r.records = read_records(a);
        }
        std::cerr << "recipe fig" << fig << ": " << r.records.size() << " rows, " << fmt(r.seconds, 1) << " s\n";
        recipes[fig] = std::move(r);
    }
}

ModelParams figure_params(double snr_db)
{
    ModelParams p;
    p.sigma2 = std::pow(10.0, snr_db / 10.0);
    p.sigma2_e = 1.0;
    p.rho_ab = 0.9;
    p.rho_e = 0.1;
    p.alpha = 0.05;
    return p;
}

// ---------------------------------------------------------------------------------------------

void criterion_1()
{
    const auto t0 = Clock::now();
    ModelParams p = figure_params(10.0);
    const double c10 = sk_capacity_no_eve(p);
    p.sigma2 = 1e15;
    const double c_sat = sk_capacity_no_eve(p);
    bool pass = std::abs(c10 - 0.7985) < 5e-5 && std::abs(c_sat - 1.198) < 5e-4 &&
                std::abs(c_sat - 0.5 * std::log2(1.0 / 0.19)) < 1e-9;

    double cli_err = std::numeric_limits<double>::infinity();
    if (run_cli("sweep --regime no_eve --snr-db -20:5:60 --rho-ab 0.9 -o no_eve.csv", "no_eve.log") == 0)
    {
        cli_err = 0.0;
        for (const auto &r : read_records("no_eve.csv"))
        {
            ModelParams q;
            q.sigma2 = r.sigma2;
            q.rho_ab = r.rho_ab;
            cli_err = std::max({cli_err, std::abs(r.lower_bits - sk_capacity_no_eve(q)),
                                std::abs(r.upper_bits - sk_capacity_no_eve(q))});
        }
    }
    pass = pass && cli_err <= 1e-9;

    // I(y_A; y_B) = h(y_A) + h(y_B) - h(y_A, y_B), all three estimated.
    p = figure_params(10.0);
    const auto batch = sample_observations(p, 100000, 101);
    EstimatorConfig knn;
    const std::array<Observation, 1> a{Observation::y_A}, b{Observation::y_B};
    const std::array<Observation, 2> ab{Observation::y_A, Observation::y_B};
    const auto ha = estimate_joint_entropy(batch, a, knn);
    const auto hb = estimate_joint_entropy(batch, b, knn);
    const auto hab = estimate_joint_entropy(batch, ab, knn);
    const double mi = ha.value + hb.value - hab.value;
    const double se = std::sqrt(ha.std_error * ha.std_error + hb.std_error * hb.std_error + hab.std_error * hab.std_error);
    const double z = (mi - c10) / se;
    pass = pass && std::abs(z) <= 3.0;

    const double secs = seconds_since(t0);
    pass = pass && secs < 60.0;
    report(1, "No-Eve capacity", pass,
           "C(SNR=10)=" + fmt(c10, 6) + ", C(SNR->inf)=" + fmt(c_sat, 6) + ", CLI max error " +
               format_number(cli_err) + ", kNN I(y_A;y_B)=" + fmt(mi) + " +- " + fmt(se) + " (z=" + fmt(z, 2) +
               "), " + fmt(secs, 1) + " s");
}

void criterion_2()
{
    const auto t0 = Clock::now();
    OracleOptions o; // dims 1-4, 20 cases each, N = 2e4, kNN (k=4) and KDE
    std::map<std::pair<int, int>, std::pair<int, int>> tally; // (method, dim) -> (passed, total)
    std::map<std::pair<int, int>, double> worst;
    const auto cases = run_oracle_suite(o, [&](const OracleCase &c) {
        auto &t = tally[{static_cast<int>(c.method), c.dim}];
        t.first += c.pass;
        ++t.second;
        auto &w = worst[{static_cast<int>(c.method), c.dim}];
        w = std::max(w, std::abs(c.z));
    });
    const double secs = seconds_since(t0);
    std::size_t passed = 0;
    for (const auto &c : cases)
        passed += c.pass;

    std::string detail = std::to_string(passed) + "/" + std::to_string(cases.size()) + " within 3 stderr;";
    for (auto method : o.methods)
    {
        detail += std::string(" ") + std::string(to_string(method)) + ":";
        for (int d : o.dims)
        {
            const auto &t = tally[{static_cast<int>(method), d}];
            detail += " d" + std::to_string(d) + " " + std::to_string(t.first) + "/" + std::to_string(t.second) +
                      " (max|z| " + fmt(worst[{static_cast<int>(method), d}], 1) + ")";
        }
        detail += ";";
    }
    detail += " " + fmt(secs, 1) + " s";
    report(2, "Estimator oracle suite", passed == cases.size() && secs < 300.0, detail);
}

void criterion_3()
{
    const std::vector<double> grid{-10.0, 0.0, 10.0, 20.0, 30.0};
    bool pass = true;
    double worst_z = 0.0, worst_exact = 0.0;
    for (double snr_db : grid)
    {
        ModelParams p = figure_params(snr_db);
        p.alpha = 0.0;
        const double c = sk_capacity_no_eve(p);
        const auto est = bounds_no_csie(p, 100000, 1);
        const double zl = std::abs(est.lower.bits - c) / est.lower.std_error;
        const double zu = std::abs(est.upper.bits - c) / est.upper.std_error;
        worst_z = std::max({worst_z, zl, zu});
        const auto full = bounds_full_csie(p, 1000, 1);
        worst_exact = std::max({worst_exact, std::abs(full.lower.bits - c), std::abs(full.upper.bits - c)});
    }
    pass = worst_z <= 3.0 && worst_exact <= 1e-9;
    report(3, "Collapse without reflection", pass,
           "no-CSIE max |error|/stderr " + fmt(worst_z, 2) + ", full-CSIE max |error| " + format_number(worst_exact) +
               " on SNR -10:10:30 dB");
}

void criterion_4()
{
    const auto &run = recipes[4];
    if (!run.ok || run.records.size() < 5)
    {
        report(4, "Fig. 4 shape", false, "recipe run failed");
        return;
    }
    const auto &r = run.records;
    const double saturation = 0.5 * std::log2(1.0 / 0.19);
    const auto peak = static_cast<std::size_t>(
        std::max_element(r.begin(), r.end(), [](auto &x, auto &y) { return x.lower_bits < y.lower_bits; }) -
        r.begin());

    auto se2 = [](const ResultRecord &x, const ResultRecord &y) {
        return std::hypot(x.lower_stderr, y.lower_stderr);
    };

    bool rises = peak > 0 && r[peak].lower_bits > r.front().lower_bits + 3.0 * se2(r[peak], r.front());
    for (std::size_t i = 1; i <= peak; ++i)
        rises = rises && r[i].lower_bits >= r[i - 1].lower_bits - 3.0 * se2(r[i], r[i - 1]);

    double dip = r[peak].lower_bits;
    for (std::size_t i = peak; i < r.size(); ++i)
        dip = std::min(dip, r[i].lower_bits);
    const bool dips = peak + 1 < r.size() && dip < r[peak].lower_bits - 3.0 * r[peak].lower_stderr;

    bool plateau = true;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, max_se = 0.0;
    for (const auto &x : r)
        if (x.snr_db >= 30.0)
        {
            plateau = plateau && x.lower_bits > 3.0 * x.lower_stderr && x.lower_bits < saturation;
            if (x.snr_db >= r.back().snr_db - 10.0)
            {
                lo = std::min(lo, x.lower_bits);
                hi = std::max(hi, x.lower_bits);
                max_se = std::max(max_se, x.lower_stderr);
            }
        }
    const bool settles = hi - lo <= 3.0 * std::sqrt(2.0) * max_se;

    bool ordered = true;
    for (const auto &x : r)
        ordered = ordered && x.lower_bits <= x.upper_bits + 3.0 * std::hypot(x.lower_stderr, x.upper_stderr);

    report(4, "Fig. 4 shape", rises && dips && plateau && settles && ordered,
           "peak " + fmt(r[peak].lower_bits) + " bits at " + fmt(r[peak].snr_db, 0) + " dB, plateau " + fmt(lo) +
               ".." + fmt(hi) + " bits over the last 10 dB (saturation " + fmt(saturation, 3) + "); rises " +
               (rises ? "yes" : "no") + ", dips " + (dips ? "yes" : "no") + ", positive below saturation from 30 dB " +
               (plateau ? "yes" : "no") + ", settles " + (settles ? "yes" : "no") + ", lower <= upper " +
               (ordered ? "yes" : "no"));
}

void criterion_5()
{
    // SNR_Alice = 30 dB, sigma2_e set from SNR_Eve = alpha^2 sigma2_e sigma2.
    ModelParams p = figure_params(30.0);
    std::vector<double> eve_db{-10.0, 0.0, 10.0, 20.0, 30.0, 40.0};
    std::vector<double> lower;
    for (double e : eve_db)
    {
        p.sigma2_e = std::pow(10.0, e / 10.0) / (p.alpha * p.alpha * p.sigma2);
        lower.push_back(bounds_full_csie(p, 1000, 1).lower.bits);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < lower.size(); ++i)
        decreasing = decreasing && lower[i] <= lower[i - 1];
    bool small = true;
    for (std::size_t i = 0; i < eve_db.size(); ++i)
        if (eve_db[i] >= 20.0)
            small = small && lower[i] < 0.02;

    const auto &run = recipes[6];
    const bool recipe_ok = run.ok && !run.records.empty() && run.records.back().lower_bits < 0.02;

    std::string detail = "lower at SNR 30 dB for SNR_Eve";
    for (std::size_t i = 0; i < eve_db.size(); ++i)
        detail += " " + fmt(eve_db[i], 0) + "dB:" + fmt(lower[i]);
    detail += "; recipe last point " + (run.records.empty() ? std::string("n/a") : fmt(run.records.back().lower_bits));
    report(5, "Fig. 6 behavior", decreasing && small && recipe_ok, detail);
}

void criterion_6()
{
    const auto &run = recipes[8];
    if (!run.ok || run.records.empty())
    {
        report(6, "Fig. 8 zero region", false, "recipe run failed");
        return;
    }
    double worst_low_snr = 0.0, worst_high_eve = 0.0, best = 0.0;
    std::size_t n_low = 0, n_high = 0;
    for (const auto &r : run.records)
    {
        best = std::max(best, r.lower_bits);
        if (r.snr_db <= -10.0)
        {
            worst_low_snr = std::max(worst_low_snr, r.lower_bits);
            ++n_low;
        }
        if (r.snr_eve_db >= 20.0)
        {
            worst_high_eve = std::max(worst_high_eve, r.lower_bits);
            ++n_high;
        }
    }
    const bool pass = n_low > 0 && n_high > 0 && worst_low_snr < 0.01 && worst_high_eve < 0.01 && best > 0.1;
    report(6, "Fig. 8 zero region", pass,
           "max rate " + fmt(worst_low_snr) + " over " + std::to_string(n_low) + " points with SNR <= -10 dB, " +
               fmt(worst_high_eve) + " over " + std::to_string(n_high) + " points with SNR_Eve >= 20 dB; peak " +
               fmt(best) + " elsewhere");
}

void criterion_7()
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    int passed = 0;
    for (int t = 0; t < 10; ++t)
    {
        ModelParams p;
        p.sigma2 = std::pow(10.0, (-5.0 + 30.0 * unit(rng)) / 10.0);
        p.rho_ab = 0.6 + 0.39 * unit(rng);
        p.rho_e = -0.9 + 1.8 * unit(rng);
        p.alpha = 0.02 + 0.18 * unit(rng);
        p.sigma2_e = 1.0;
        const double h_ae = normal(rng), h_be = normal(rng);
        const auto exact = bounds_given_eve_csi(p, h_ae, h_be);
        const auto est = bounds_given_eve_csi_estimated(p, h_ae, h_be, 100000, static_cast<std::uint64_t>(t + 1));
        const double zu = std::abs(est.upper.bits - exact.upper.bits) / est.upper.std_error;
        const double zl = std::abs(est.lower.bits - exact.lower.bits) / est.lower.std_error;
        worst = std::max({worst, zu, zl});
        passed += zu <= 3.0 && zl <= 3.0;
    }
    report(7, "Cross-pipeline oracle", passed == 10,
           std::to_string(passed) + "/10 parameter draws agree, max |error|/stderr " + fmt(worst, 2));
}

void criterion_8()
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> resistance(0.1, 200.0);
    std::uniform_real_distribution<double> reactance(-100.0, 100.0);
    std::uniform_real_distribution<double> voltage(0.01, 10.0);
    int conserved = 0, lossless = 0, monotone = 0;
    for (int i = 0; i < 100; ++i)
    {
        antenna::AntennaCircuit c;
        c.r_rad = resistance(rng);
        c.r_loss = resistance(rng);
        c.x_a = reactance(rng);
        c.v_oc = voltage(rng);
        const auto p = antenna::power_breakdown(antenna::matched_load(c));
        conserved += p.p_load + p.p_diss + p.p_rerad == p.p_total;

        auto ideal = c;
        ideal.r_loss = 0.0;
        lossless += antenna::power_breakdown(antenna::matched_load(ideal)).ratio == 0.5;

        bool strictly = true;
        double previous = 0.5;
        for (double r_loss = 0.5; r_loss <= 500.0; r_loss *= 1.5)
        {
            auto lossy = c;
            lossy.r_loss = r_loss;
            const double ratio = antenna::power_breakdown(antenna::matched_load(lossy)).ratio;
            strictly = strictly && ratio < previous;
            previous = ratio;
        }
        monotone += strictly;
    }
    report(8, "Antenna conservation and limits", conserved == 100 && lossless == 100 && monotone == 100,
           "conservation " + std::to_string(conserved) + "/100, lossless ratio 1/2 " + std::to_string(lossless) +
               "/100, strictly decreasing in R_l " + std::to_string(monotone) + "/100");
}

void criterion_9()
{
    const auto &line = recipes[4];
    const auto &plane = recipes[5];
    if (!line.ok || !plane.ok)
    {
        report(9, "Diagonal-cut consistency", false, "recipe run failed");
        return;
    }
    const double offset = 20.0 * std::log10(0.05);
    std::size_t matched = 0, agree = 0;
    double worst = 0.0;
    for (const auto &p : plane.records)
    {
        if (std::abs(p.snr_eve_db - (p.snr_db + offset)) > 1e-6)
            continue;
        for (const auto &l : line.records)
            if (l.snr_db == p.snr_db)
            {
                ++matched;
                const double diff = std::abs(p.lower_bits - l.lower_bits);
                const double se = std::hypot(p.lower_stderr, l.lower_stderr);
                worst = std::max(worst, diff / se);
                agree += diff <= se;
            }
    }
    report(9, "Diagonal-cut consistency", matched >= 5 && agree == matched,
           std::to_string(agree) + "/" + std::to_string(matched) +
               " diagonal points within combined stderr, max |difference|/stderr " + format_number(worst));
}

void criterion_10()
{
    std::string detail;
    bool pass = true;
    for (const auto &[fig, run] : recipes)
    {
        pass = pass && run.ok && run.identical;
        detail += "fig" + std::to_string(fig) + " " + (run.identical ? "identical" : "DIFFERENT") + " (" +
                  std::to_string(run.records.size()) + " rows); ";
    }
    report(10, "Determinism", pass && recipes.size() == 5, detail);
}

} // namespace

int main()
{
    const auto t0 = Clock::now();
    try
    {
        run_recipes();
        criterion_1();
        criterion_2();
        criterion_3();
        criterion_4();
        criterion_5();
        criterion_6();
        criterion_7();
        criterion_8();
        criterion_9();
        criterion_10();
    }
    catch (const std::exception &ex)
    {
        std::cout << "FAIL  acceptance aborted: " << ex.what() << std::endl;
        return 2;
    }
    std::cout << (failures ? "FAIL" : "PASS") << "  " << 10 - failures << "/10 criteria, " << fmt(seconds_since(t0), 0)
              << " s total" << std::endl;
    return failures ? 1 : 0;
}
