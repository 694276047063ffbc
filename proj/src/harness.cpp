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

#include "ris/harness.hpp"
#include "ris/channel_estimation.hpp"
#include "ris/multi_user.hpp"
#include "ris/single_user.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace ris
{
    namespace
    {
        // Random streams within one trial.
        enum Stream : std::uint64_t
        {
            geometry = 0,
            fading = 1,
            training = 2,
            random_phases = 3,
            am_start = 4,
        };

        std::uint64_t stream_id(Stream s, int n_r, double p_jt = 0.0)
        {
            return std::uint64_t(s) + 8 * (std::uint64_t(n_r) + 4096 * std::uint64_t(std::lround(p_jt * 1000)));
        }

        struct TrialOutput
        {
            std::vector<ResultRow> rows;
            // Summed NMSE terms keyed by (estimator, n_r, bs)
            std::map<std::tuple<std::string, int, int>, NmseTerms> nmse;
        };

        std::vector<std::string> with_default(const std::vector<std::string> &v, std::vector<std::string> d)
        {
            return v.empty() ? d : v;
        }

        bool is_single_user(const std::string &experiment)
        {
            return experiment == "su-cdf" || experiment == "su-vs-nr";
        }

        std::vector<std::string> estimators_for(const ExperimentConfig &cfg)
        {
            if (cfg.experiment == "nmse-vs-nr")
            {
                auto e = with_default(cfg.estimators, {"LS", "MMSE1", "MMSEQ"});
                e.erase(std::remove(e.begin(), e.end(), "PCSI"), e.end());
                if (e.empty())
                    throw std::invalid_argument("nmse-vs-nr needs at least one of LS, MMSE1, MMSEQ");
                return e;
            }
            return with_default(cfg.estimators, {"PCSI"});
        }

        std::vector<std::string> methods_for(const ExperimentConfig &cfg)
        {
            if (cfg.experiment == "nmse-vs-nr")
                return {"-"};
            const std::vector<std::string> su = {"UB", "LB", "AM", "NoOpt"};
            const std::vector<std::string> mu = {"JointOpt", "OnlyRIS", "OnlyPowers", "NoOpt"};
            const auto &valid = is_single_user(cfg.experiment) ? su : mu;
            const auto methods = with_default(cfg.methods, valid);
            for (const auto &m : methods)
                if (std::find(valid.begin(), valid.end(), m) == valid.end())
                    throw std::invalid_argument("method '" + m + "' is not valid for experiment " + cfg.experiment);
            return methods;
        }

        std::vector<int> nr_values(const ExperimentConfig &cfg)
        {
            if (cfg.experiment == "nmse-vs-nr" || cfg.experiment == "su-vs-nr" || cfg.experiment == "mu-sinr-vs-nr")
                return cfg.nr_list;
            return {cfg.constants.ris_elements};
        }

        std::vector<double> pjt_values(const ExperimentConfig &cfg)
        {
            if (cfg.experiment == "jt-sweep")
                return cfg.p_jt;
            return {cfg.p_jt.front()};
        }

        Estimator estimator_from(const std::string &name)
        {
            if (name == "LS")
                return Estimator::ls;
            if (name == "MMSE1")
                return Estimator::mmse_1;
            if (name == "MMSEQ")
                return Estimator::mmse_q;
            throw std::invalid_argument("unknown estimator '" + name + "'");
        }

        CascadedChannels channel_knowledge(const CascadedChannels &truth, const Scenario &scenario,
                                           const std::string &estimator, const ExperimentConfig &cfg, double noise,
                                           Rng &rng)
        {
            if (estimator == "PCSI")
                return truth;
            TrainingSetup setup;
            setup.estimator = estimator_from(estimator);
            setup.noise_var = noise * cfg.training_noise_scale;
            setup.symbol_power_w = cfg.constants.pilot_power_w;
            setup.rho = cfg.constants.ris_amplitude;
            std::vector<EstimateSet> per_bs;
            for (int i = 0; i < truth.num_bs(); ++i)
                per_bs.push_back(train_and_estimate(truth, scenario, i, setup, rng));
            return assemble(per_bs);
        }

        ResultRow make_row(const ExperimentConfig &cfg, const std::string &method, const std::string &estimator,
                           int n_r, double p_jt, int trial, int user, const std::string &metric, double value)
        {
            ResultRow r;
            r.experiment = cfg.experiment;
            r.method = method;
            r.estimator = estimator;
            r.n_r = n_r;
            r.p_jt = p_jt;
            r.trial = trial;
            r.user = user;
            r.metric = metric;
            r.value = value;
            return r;
        }

        void nmse_trial(const ExperimentConfig &cfg, int trial, TrialOutput &out)
        {
            const double noise = noise_power(cfg.constants);
            for (int n_r : nr_values(cfg))
            {
                SystemConstants c = cfg.constants;
                c.ris_elements = n_r;
                Rng geo = make_stream(cfg.seed, trial, stream_id(geometry, 0));
                const Scenario scenario = generate_scenario(c, geo);
                Rng fade = make_stream(cfg.seed, trial, stream_id(fading, n_r));
                const CascadedChannels truth = sample_fading(scenario, c, fade).links;

                for (const auto &est : estimators_for(cfg))
                {
                    Rng train = make_stream(cfg.seed, trial, stream_id(training, n_r));
                    const CascadedChannels hat = channel_knowledge(truth, scenario, est, cfg, noise, train);
                    for (int i = 0; i < truth.num_bs(); ++i)
                    {
                        EstimateSet e;
                        e.cascade = hat.cascade[i];
                        e.direct = hat.direct[i];
                        const NmseTerms t = nmse_terms(truth, i, e);
                        out.rows.push_back(make_row(cfg, "-", est, n_r, 0.0, trial, -1,
                                                    "nmse_bs" + std::to_string(i + 1), t.value()));
                        out.nmse[{est, n_r, i}] += t;
                    }
                }
            }
        }

        void single_user_trial(const ExperimentConfig &cfg, int trial, TrialOutput &out)
        {
            for (int n_r : nr_values(cfg))
            {
                SystemConstants c = cfg.constants;
                c.ris_elements = n_r;
                c.users = 1;
                c.base_stations = 1;
                const double noise = noise_power(c);
                const double rho = c.ris_amplitude;

                Rng geo = make_stream(cfg.seed, trial, stream_id(geometry, 0));
                const Scenario scenario = generate_scenario(c, geo);
                Rng fade = make_stream(cfg.seed, trial, stream_id(fading, n_r));
                const CascadedChannels truth = sample_fading(scenario, c, fade).links;
                const cmat &D = truth.cascade[0][0];
                const cvec &h = truth.direct[0][0];

                for (const auto &est : estimators_for(cfg))
                {
                    Rng train = make_stream(cfg.seed, trial, stream_id(training, n_r));
                    const CascadedChannels hat = channel_knowledge(truth, scenario, est, cfg, noise, train);
                    const cmat &Dh = hat.cascade[0][0];
                    const cvec &hh = hat.direct[0][0];

                    for (const auto &method : methods_for(cfg))
                    {
                        SingleUserSolution sol;
                        if (method == "UB")
                            sol = optimize_ub(Dh, hh, rho);
                        else if (method == "LB")
                            sol = optimize_lb(Dh, hh, rho);
                        else if (method == "AM")
                        {
                            Rng start = make_stream(cfg.seed, trial, stream_id(am_start, n_r));
                            const RisConfig init = cfg.am_init == "random" ? RisConfig::random(n_r, rho, start)
                                                                           : RisConfig::zeros(n_r, rho);
                            sol = optimize_am(Dh, hh, rho, init);
                        }
                        else
                        {
                            Rng phases = make_stream(cfg.seed, trial, stream_id(random_phases, n_r));
                            sol = random_configuration(Dh, hh, rho, phases);
                        }
                        const double value = snr(sol.beamformer, D, h, sol.config, c.max_bs_power_w, noise);
                        out.rows.push_back(make_row(cfg, method, est, n_r, 0.0, trial, 0, "snr_db", to_db(value)));
                        if (method == "UB")
                            out.rows.push_back(make_row(cfg, method, est, n_r, 0.0, trial, 0, "bound_db",
                                                        to_db(c.max_bs_power_w / noise * sol.bound)));
                    }
                }
            }
        }

        MultiUserMethod mu_method(const std::string &name)
        {
            if (name == "JointOpt")
                return MultiUserMethod::joint;
            if (name == "OnlyRIS")
                return MultiUserMethod::only_ris;
            if (name == "OnlyPowers")
                return MultiUserMethod::only_powers;
            return MultiUserMethod::none;
        }

        void multi_user_trial(const ExperimentConfig &cfg, int trial, TrialOutput &out)
        {
            for (int n_r : nr_values(cfg))
            {
                SystemConstants c = cfg.constants;
                c.ris_elements = n_r;
                const double noise = noise_power(c);

                Rng geo = make_stream(cfg.seed, trial, stream_id(geometry, 0));
                Scenario scenario = generate_scenario(c, geo);
                Rng fade = make_stream(cfg.seed, trial, stream_id(fading, n_r));
                const CascadedChannels truth = sample_fading(scenario, c, fade).links;
                Rng phases = make_stream(cfg.seed, trial, stream_id(random_phases, n_r));
                const RisConfig random_config = RisConfig::random(n_r, c.ris_amplitude, phases);

                for (double p_jt : pjt_values(cfg))
                {
                    scenario.association = associate_users(scenario, p_jt);
                    for (const auto &est : estimators_for(cfg))
                    {
                        Rng train = make_stream(cfg.seed, trial, stream_id(training, n_r, p_jt));
                        const CascadedChannels hat = channel_knowledge(truth, scenario, est, cfg, noise, train);

                        AllocationParams base;
                        base.rho = c.ris_amplitude;
                        base.noise_power = noise;
                        base.budgets = rvec::Constant(scenario.num_bs(), c.max_bs_power_w);

                        for (const auto &method : methods_for(cfg))
                        {
                            const AllocationParams params = method_params(mu_method(method), base, random_config);
                            const AllocationResult res = allocate(hat, scenario, params);
                            // Designs come from the estimates, performance from the true channels.
                            const rvec sinr = evaluate_sinr(truth, res.beamformers, res.powers, res.config,
                                                            scenario.association, noise);
                            for (int k = 0; k < sinr.size(); ++k)
                                out.rows.push_back(
                                    make_row(cfg, method, est, n_r, p_jt, trial, k, "sinr_db", to_db(sinr(k))));
                            out.rows.push_back(make_row(cfg, method, est, n_r, p_jt, trial, -1, "gmean_db",
                                                        to_db(geometric_mean(sinr))));
                        }
                    }
                }
            }
        }

        using GroupKey = std::tuple<std::string, std::string, int, double, std::string>;

        void append_summaries(const ExperimentConfig &cfg, const std::vector<TrialOutput> &trials,
                              std::vector<ResultRow> &rows)
        {
            const bool cdf = cfg.experiment == "su-cdf" || cfg.experiment == "mu-cdf";

            if (cfg.experiment == "nmse-vs-nr")
            {
                std::map<std::tuple<std::string, int, int>, NmseTerms> total;
                std::map<std::tuple<std::string, int>, NmseTerms> all;
                for (const auto &t : trials)
                    for (const auto &[key, terms] : t.nmse)
                    {
                        total[key] += terms;
                        all[{std::get<0>(key), std::get<1>(key)}] += terms;
                    }
                for (const auto &[key, terms] : total)
                    rows.push_back(make_row(cfg, "-", std::get<0>(key), std::get<1>(key), 0.0, -1, -1,
                                            "nmse_bs" + std::to_string(std::get<2>(key) + 1), terms.value()));
                for (const auto &[key, terms] : all)
                    rows.push_back(
                        make_row(cfg, "-", std::get<0>(key), std::get<1>(key), 0.0, -1, -1, "nmse", terms.value()));
                return;
            }

            std::map<GroupKey, std::vector<double>> groups;
            for (const auto &t : trials)
                for (const auto &r : t.rows)
                    groups[{r.method, r.estimator, r.n_r, r.p_jt, r.metric}].push_back(r.value);

            for (const auto &[key, values] : groups)
            {
                const auto &[method, est, n_r, p_jt, metric] = key;
                std::vector<double> linear(values.size());
                std::transform(values.begin(), values.end(), linear.begin(), from_db);
                rows.push_back(make_row(cfg, method, est, n_r, p_jt, -1, -1, "avg_" + metric, average_db(linear)));
                rows.push_back(make_row(cfg, method, est, n_r, p_jt, -1, -1, "median_" + metric, median(values)));
                if (cdf)
                    for (const auto &[x, f] : compute_cdf(values, cfg.cdf_points))
                    {
                        ResultRow r = make_row(cfg, method, est, n_r, p_jt, -1, -1, "cdf_" + metric, f);
                        r.x = x;
                        rows.push_back(r);
                    }
            }
        }
    }

    double average_db(const std::vector<double> &linear)
    {
        if (linear.empty())
            throw std::invalid_argument("average_db: empty input");
        double s = 0.0;
        for (double v : linear)
            s += v;
        return to_db(s / double(linear.size()));
    }

    double median(std::vector<double> values)
    {
        if (values.empty())
            throw std::invalid_argument("median: empty input");
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();
        return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    }

    std::vector<std::pair<double, double>> compute_cdf(std::vector<double> values, int points)
    {
        if (values.empty())
            throw std::invalid_argument("compute_cdf: empty input");
        if (points < 2)
            throw std::invalid_argument("compute_cdf: at least two grid points required");
        for (double v : values)
            if (std::isnan(v))
                throw std::invalid_argument("compute_cdf: NaN sample");
        std::sort(values.begin(), values.end());
        const double lo = values.front();
        const double hi = values.back();
        const double n = double(values.size());

        std::vector<std::pair<double, double>> out;
        out.reserve(points);
        for (int p = 0; p < points; ++p)
        {
            const double x = p + 1 == points ? hi : lo + (hi - lo) * p / (points - 1);
            const auto below = std::upper_bound(values.begin(), values.end(), x) - values.begin();
            out.emplace_back(x, double(below) / n);
        }
        return out;
    }

    void parallel_for(int count, int threads, const std::function<void(int)> &body)
    {
        if (threads <= 0)
            threads = std::max(1u, std::thread::hardware_concurrency());
        threads = std::min(threads, std::max(count, 1));

        std::atomic<int> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;

        auto worker = [&] {
            while (!failed.load())
            {
                const int t = next.fetch_add(1);
                if (t >= count)
                    return;
                try
                {
                    body(t);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    failed = true;
                }
            }
        };

        if (threads == 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (int n = 0; n < threads; ++n)
                pool.emplace_back(worker);
            for (auto &th : pool)
                th.join();
        }
        if (error)
            std::rethrow_exception(error);
    }

    std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg)
    {
        cfg.validate();
        // Resolve method and estimator lists once so that bad combinations fail before any work.
        estimators_for(cfg);
        methods_for(cfg);

        std::vector<TrialOutput> trials(cfg.trials);
        parallel_for(cfg.trials, cfg.threads, [&](int t) {
            TrialOutput &out = trials[t];
            if (cfg.experiment == "nmse-vs-nr")
                nmse_trial(cfg, t, out);
            else if (is_single_user(cfg.experiment))
                single_user_trial(cfg, t, out);
            else
                multi_user_trial(cfg, t, out);
        });

        std::vector<ResultRow> rows;
        for (const auto &t : trials)
            rows.insert(rows.end(), t.rows.begin(), t.rows.end());
        append_summaries(cfg, trials, rows);
        return rows;
    }
}
