// SPDX-License-Identifier: Apache-2.0
//
// ris-alloc: resource allocation for RIS-assisted cellular networks
// Copyright (C) 2026 The ris-alloc authors
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

#include "ris/config.hpp"
#include "ris/harness.hpp"
#include "ris/results.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

using namespace ris;

namespace
{
    ExperimentConfig tiny(const std::string &experiment)
    {
        ExperimentConfig c;
        c.experiment = experiment;
        c.trials = 3;
        c.seed = 11;
        c.constants.bs_antennas = 2;
        c.constants.ris_elements = 4;
        c.constants.users = 2;
        c.nr_list = {2, 4};
        c.p_jt = {0.5};
        c.cdf_points = 5;
        c.threads = 1;
        return c;
    }

    std::vector<ResultRow> only(const std::vector<ResultRow> &rows, const std::string &metric)
    {
        std::vector<ResultRow> out;
        std::copy_if(rows.begin(), rows.end(), std::back_inserter(out),
                     [&](const ResultRow &r) { return r.metric == metric; });
        return out;
    }
}

TEST(Config, RoundTripThroughText)
{
    ExperimentConfig c = tiny("jt-sweep");
    c.estimators = {"PCSI", "MMSEQ"};
    c.methods = {"JointOpt", "NoOpt"};
    c.p_jt = {0.0, 0.125, 1.0};
    c.constants.max_bs_power_w = 0.1 + 0.2;
    c.am_init = "random";
    std::stringstream s;
    write_config(s, c);
    const ExperimentConfig back = parse_config(s);

    std::stringstream a, b;
    write_config(a, c);
    write_config(b, back);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(back.p_jt, c.p_jt);
    EXPECT_EQ(back.constants.max_bs_power_w, c.constants.max_bs_power_w);
    EXPECT_EQ(back.methods, c.methods);
}

TEST(Config, UnknownKeyListsValidKeys)
{
    ExperimentConfig c;
    try
    {
        set_config_value(c, "ris_elemnts", "16");
        FAIL() << "no exception";
    }
    catch (const std::invalid_argument &e)
    {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("ris_elemnts"), std::string::npos);
        EXPECT_NE(msg.find("ris_elements"), std::string::npos);
        EXPECT_NE(msg.find("bs_antennas"), std::string::npos);
    }
}

TEST(Config, MalformedValueAndLineNumbers)
{
    ExperimentConfig c;
    EXPECT_THROW(set_config_value(c, "trials", "ten"), std::invalid_argument);
    EXPECT_THROW(set_config_value(c, "trials", "10x"), std::invalid_argument);
    EXPECT_THROW(set_config_value(c, "rho", ""), std::invalid_argument);

    std::istringstream in("trials = 3\n\n# note\nseed 4\n");
    try
    {
        parse_config(in);
        FAIL() << "no exception";
    }
    catch (const std::exception &e)
    {
        EXPECT_NE(std::string(e.what()).find("4"), std::string::npos) << e.what();
    }
}

TEST(Config, CommentsBlankLinesAndLists)
{
    std::istringstream in("# header\n  experiment = su-cdf   # trailing\n\nnr_list = 8, 16 ,32\nrho=0.5\n");
    const ExperimentConfig c = parse_config(in);
    EXPECT_EQ(c.experiment, "su-cdf");
    EXPECT_EQ(c.nr_list, (std::vector<int>{8, 16, 32}));
    EXPECT_DOUBLE_EQ(c.constants.ris_amplitude, 0.5);
    EXPECT_EQ(c.trials, ExperimentConfig{}.trials);
}

TEST(Config, KeysAndExperiments)
{
    const auto keys = config_keys();
    for (const char *k : {"experiment", "trials", "seed", "bs_antennas", "ris_elements", "users", "p_jt", "output"})
        EXPECT_NE(std::find(keys.begin(), keys.end(), k), keys.end()) << k;
    EXPECT_EQ(experiment_names().size(), 6u);
}

TEST(Config, ValidateRejectsBadValues)
{
    auto expect_bad = [](auto change) {
        ExperimentConfig c;
        change(c);
        EXPECT_THROW(c.validate(), std::invalid_argument);
    };
    expect_bad([](ExperimentConfig &c) { c.experiment = "nope"; });
    expect_bad([](ExperimentConfig &c) { c.trials = 0; });
    expect_bad([](ExperimentConfig &c) { c.p_jt = {1.5}; });
    expect_bad([](ExperimentConfig &c) { c.nr_list = {}; });
    expect_bad([](ExperimentConfig &c) { c.estimators = {"ML"}; });
    expect_bad([](ExperimentConfig &c) { c.methods = {"Best"}; });
    expect_bad([](ExperimentConfig &c) { c.am_init = "ones"; });
    expect_bad([](ExperimentConfig &c) { c.constants.base_stations = 3; });
    ExperimentConfig{}.validate();
}

TEST(Config, FullScale)
{
    ExperimentConfig c;
    c.apply_full_scale();
    EXPECT_EQ(c.constants.bs_antennas, 64);
    EXPECT_EQ(c.constants.ris_elements, 64);
    EXPECT_EQ(c.constants.users, 20);
}

TEST(Results, RoundTrip)
{
    std::vector<ResultRow> rows;
    rows.push_back({"mu-cdf", "JointOpt", "PCSI", 16, 0.25, 3, 1, "sinr_db", std::numeric_limits<double>::quiet_NaN(),
                    0.1 + 0.2});
    rows.push_back({"mu-cdf", "JointOpt", "PCSI", 16, 0.25, -1, -1, "cdf_sinr_db", -3.75, 1.0 / 3.0});
    rows.push_back({"nmse-vs-nr", "-", "LS", 8, 0.0, -1, -1, "nmse", std::numeric_limits<double>::quiet_NaN(),
                    1e-300});
    std::stringstream s;
    write_results(s, rows);
    EXPECT_EQ(read_results(s), rows);
}

TEST(Results, HeaderAndEmptyX)
{
    std::vector<ResultRow> rows(2);
    rows[0].metric = rows[1].metric = "gmean_db";
    std::stringstream s;
    write_results(s, rows);
    std::string line;
    std::getline(s, line);
    EXPECT_EQ(line, results_header);
    std::getline(s, line);
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9);
    EXPECT_NE(line.find(",gmean_db,,"), std::string::npos) << line;
    int headers = 0;
    std::stringstream again(s.str());
    while (std::getline(again, line))
        headers += line == results_header;
    EXPECT_EQ(headers, 1);
}

TEST(Results, MalformedInputReportsLine)
{
    std::istringstream in(std::string(results_header) + "\na,b,c,1,0.5,0,0,m,,1\na,b,c,x,0.5,0,0,m,,1\n");
    try
    {
        read_results(in);
        FAIL() << "no exception";
    }
    catch (const std::runtime_error &e)
    {
        EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
    }
}

TEST(Results, FormatDouble)
{
    for (double v : {0.1, 1.0 / 3.0, -2.5e-13, 6.02214076e23, 0.0})
        EXPECT_EQ(std::stod(format_double(v)), v);
    EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Summaries, CdfOfOneSample)
{
    const auto cdf = compute_cdf({2.5}, 3);
    ASSERT_EQ(cdf.size(), 3u);
    for (const auto &[x, f] : cdf)
    {
        EXPECT_EQ(x, 2.5);
        EXPECT_EQ(f, 1.0);
    }
}

TEST(Summaries, CdfIsMonotoneAndEndsAtOne)
{
    std::mt19937_64 gen(3);
    std::normal_distribution<double> normal;
    std::vector<double> v(4001);
    for (auto &x : v)
        x = normal(gen);
    const auto cdf = compute_cdf(v, 201);
    for (std::size_t n = 1; n < cdf.size(); ++n)
    {
        EXPECT_GT(cdf[n].first, cdf[n - 1].first);
        EXPECT_GE(cdf[n].second, cdf[n - 1].second);
    }
    EXPECT_EQ(cdf.back().second, 1.0);
    EXPECT_EQ(cdf.front().first, *std::min_element(v.begin(), v.end()));
    EXPECT_NEAR(median(v), 0.0, 0.06);
    auto at_zero = std::min_element(cdf.begin(), cdf.end(), [](auto &a, auto &b) {
        return std::abs(a.first) < std::abs(b.first);
    });
    EXPECT_NEAR(at_zero->second, 0.5, 0.03);
    EXPECT_THROW(compute_cdf({}, 5), std::invalid_argument);
    EXPECT_THROW(compute_cdf({1.0}, 1), std::invalid_argument);
}

TEST(Summaries, AverageAndMedian)
{
    EXPECT_NEAR(average_db({1.0, 100.0}), 10 * std::log10(50.5), 1e-12);
    EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
    EXPECT_DOUBLE_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
    EXPECT_THROW(average_db({}), std::invalid_argument);
    EXPECT_THROW(median({}), std::invalid_argument);
}

TEST(ParallelFor, VisitsEveryIndexOnce)
{
    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, 4, [&](int t) { hits[t]++; });
    for (const auto &h : hits)
        EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsFirstFailure)
{
    EXPECT_THROW(parallel_for(20, 3,
                              [](int t) {
                                  if (t == 7)
                                      throw std::runtime_error("trial 7");
                              }),
                 std::runtime_error);
    parallel_for(0, 2, [](int) { FAIL(); });
}

TEST(RunExperiment, DeterministicAcrossThreadCounts)
{
    for (const char *exp : {"mu-cdf", "su-cdf", "nmse-vs-nr"})
    {
        ExperimentConfig one = tiny(exp);
        ExperimentConfig many = one;
        many.threads = 3;
        EXPECT_EQ(run_experiment(one), run_experiment(many)) << exp;
    }
}

TEST(RunExperiment, TrialPrefixIsStable)
{
    ExperimentConfig a = tiny("mu-sinr-vs-nr");
    ExperimentConfig b = a;
    b.trials = 5;
    const auto ra = run_experiment(a);
    const auto rb = run_experiment(b);
    std::vector<ResultRow> per_trial_a, per_trial_b;
    for (const auto &r : ra)
        if (r.trial >= 0)
            per_trial_a.push_back(r);
    for (const auto &r : rb)
        if (r.trial >= 0 && r.trial < 3)
            per_trial_b.push_back(r);
    EXPECT_EQ(per_trial_a, per_trial_b);
}

TEST(RunExperiment, NoiselessTrainingIsExact)
{
    ExperimentConfig c = tiny("nmse-vs-nr");
    c.training_noise_scale = 0.0;
    c.estimators = {"LS", "MMSEQ"};
    for (const auto &r : only(run_experiment(c), "nmse"))
        EXPECT_LT(r.value, 1e-20) << r.estimator << " N_R=" << r.n_r;
}

TEST(RunExperiment, RowSchema)
{
    const ExperimentConfig c = tiny("mu-cdf");
    const auto rows = run_experiment(c);
    ASSERT_FALSE(rows.empty());
    const auto sinr = only(rows, "sinr_db");
    EXPECT_EQ(sinr.size(), std::size_t(c.trials * c.constants.users * 4));
    for (const auto &r : sinr)
    {
        EXPECT_GE(r.user, 0);
        EXPECT_TRUE(std::isnan(r.x));
    }
    const auto cdf = only(rows, "cdf_sinr_db");
    EXPECT_EQ(cdf.size(), std::size_t(4 * c.cdf_points));
    for (const auto &r : cdf)
        EXPECT_FALSE(std::isnan(r.x));
    EXPECT_EQ(only(rows, "avg_gmean_db").size(), 4u);
    EXPECT_EQ(only(rows, "median_gmean_db").size(), 4u);
}

TEST(RunExperiment, SingleUserBoundRows)
{
    const auto rows = run_experiment(tiny("su-vs-nr"));
    const auto bound = only(rows, "bound_db");
    ASSERT_FALSE(bound.empty());
    for (const auto &r : bound)
        EXPECT_EQ(r.method, "UB");
    EXPECT_TRUE(only(rows, "cdf_snr_db").empty());
}

TEST(RunExperiment, RejectsMismatchedMethods)
{
    ExperimentConfig c = tiny("su-cdf");
    c.methods = {"JointOpt"};
    EXPECT_THROW(run_experiment(c), std::invalid_argument);
    c = tiny("nmse-vs-nr");
    c.estimators = {"PCSI"};
    EXPECT_THROW(run_experiment(c), std::invalid_argument);
}
