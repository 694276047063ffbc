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

// Acceptance checks. One line per criterion; exit status 1 if any fails.

#include "ris/channel_estimation.hpp"
#include "ris/harness.hpp"
#include "ris/multi_user.hpp"
#include "ris/single_user.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

using namespace ris;

namespace
{
    struct Outcome
    {
        bool pass = false;
        std::string detail;
    };

    int failures = 0;

    void check(const std::string &name, const std::function<Outcome()> &body)
    {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = body();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), s);
        std::fflush(stdout);
        if (!o.pass)
            ++failures;
    }

    std::string fmt(const char *f, double a)
    {
        char buf[128];
        std::snprintf(buf, sizeof buf, f, a);
        return buf;
    }

    // summary value for (method, estimator, n_r, metric)
    std::map<std::tuple<std::string, std::string, int, std::string>, double> summaries(
        const std::vector<ResultRow> &rows)
    {
        std::map<std::tuple<std::string, std::string, int, std::string>, double> out;
        for (const auto &r : rows)
            if (r.trial == -1 && std::isnan(r.x))
                out[{r.method, r.estimator, r.n_r, r.metric}] = r.value;
        return out;
    }

    ExperimentConfig desk(const std::string &experiment, int trials)
    {
        ExperimentConfig cfg;
        cfg.experiment = experiment;
        cfg.trials = trials;
        cfg.seed = 2026;
        cfg.threads = 0;
        return cfg;
    }

    bool non_decreasing(const std::vector<double> &t, double tol, double &worst)
    {
        bool ok = true;
        for (std::size_t n = 1; n < t.size(); ++n)
        {
            const double drop = t[n - 1] - t[n];
            worst = std::max(worst, drop);
            if (drop > tol)
                ok = false;
        }
        return ok;
    }

    struct MultiUserInstance
    {
        Scenario scenario;
        CascadedChannels channels;
        rmat powers;
        double noise = 0.0;
    };

    MultiUserInstance multi_user_instance(int users, int ris_elements, double p_jt, std::uint64_t seed)
    {
        SystemConstants c = ExperimentConfig::desk_constants();
        c.users = users;
        c.ris_elements = ris_elements;
        Rng rng(seed);
        MultiUserInstance inst;
        inst.scenario = generate_scenario(c, rng);
        inst.scenario.association = associate_users(inst.scenario, p_jt);
        inst.channels = sample_fading(inst.scenario, c, rng).links;
        inst.noise = noise_power(c);
        // random feasible powers
        std::uniform_real_distribution<double> u(0.2, 1.0);
        inst.powers = uniform_powers(inst.scenario.association, rvec::Constant(inst.scenario.num_bs(), c.max_bs_power_w));
        for (Eigen::Index i = 0; i < inst.powers.size(); ++i)
            inst.powers(i) *= u(rng);
        return inst;
    }
}

int main()
{
    check("noiseless LS exactness (N_B=4, N_R=8, K=2)", [] {
        SystemConstants c;
        c.bs_antennas = 4;
        c.ris_elements = 8;
        c.users = 2;
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
        {
            Rng rng(seed);
            const Scenario s = generate_scenario(c, rng);
            const CascadedChannels truth = sample_fading(s, c, rng).links;
            const PilotBook pilots = generate_pilot_book(c.users, c.users, c.pilot_power_w);
            const auto configs = generate_training_configs(c.ris_elements, c.ris_elements + 1, 1.0, rng);
            for (int bs = 0; bs < s.num_bs(); ++bs)
            {
                const auto obs = simulate_training(truth, bs, pilots, configs, 0.0, rng);
                worst = std::max(worst, nmse(truth, bs, estimate_ls(obs, pilots)));
                worst = std::max(worst, nmse(truth, bs, estimate_ls(build_stacked_system(obs, pilots))));
            }
        }
        return Outcome{worst < 1e-10, "max NMSE " + fmt("%.3e", worst) + " over decoupled and dense routes (< 1e-10)"};
    });

    check("estimator ordering (desk scale, 200 trials)", [] {
        ExperimentConfig cfg = desk("nmse-vs-nr", 200);
        cfg.nr_list = {cfg.constants.ris_elements};
        const auto rows = run_experiment(cfg);
        std::map<std::string, double> sum;
        std::map<std::string, int> count;
        for (const auto &r : rows)
            if (r.trial >= 0)
            {
                sum[r.estimator] += r.value;
                ++count[r.estimator];
            }
        const double ls = sum["LS"] / count["LS"];
        const double m1 = sum["MMSE1"] / count["MMSE1"];
        const double mq = sum["MMSEQ"] / count["MMSEQ"];
        std::ostringstream d;
        d << "mean NMSE LS=" << ls << " MMSE1=" << m1 << " MMSEQ=" << mq << " (MMSEQ < MMSE1, MMSEQ < LS)";
        return Outcome{mq < m1 && mq < ls, d.str()};
    });

    check("single-user N_R gain (N_B=64, PCSI, AM, 100 trials)", [] {
        ExperimentConfig cfg = desk("su-vs-nr", 100);
        cfg.constants.bs_antennas = 64;
        cfg.nr_list = {8, 128};
        cfg.methods = {"AM"};
        const auto s = summaries(run_experiment(cfg));
        const double lo = s.at({"AM", "PCSI", 8, "avg_snr_db"});
        const double hi = s.at({"AM", "PCSI", 128, "avg_snr_db"});
        const double gain = hi - lo;
        return Outcome{gain >= 12.0 && gain <= 18.0,
                       "avg SNR " + fmt("%.2f", lo) + " -> " + fmt("%.2f", hi) + " dB, gain " + fmt("%.2f", gain) +
                           " dB (in [12, 18])"};
    });

    check("single-user optimizer ordering (desk scale, 200 trials)", [] {
        const auto s = summaries(run_experiment(desk("su-cdf", 200)));
        auto med = [&](const char *m) { return s.at({m, "PCSI", 16, "median_snr_db"}); };
        const double ub = med("UB"), lb = med("LB"), am = med("AM"), rnd = med("NoOpt");
        std::ostringstream d;
        d << "median SNR UB=" << ub << " LB=" << lb << " AM=" << am << " NoOpt=" << rnd
          << " dB (AM >= LB, each optimizer >= NoOpt + 3)";
        const bool ok = am >= lb && ub >= rnd + 3.0 && lb >= rnd + 3.0 && am >= rnd + 3.0;
        return Outcome{ok, d.str()};
    });

    check("gradient vs central differences (100 instances)", [] {
        const int Ks[] = {1, 2, 4};
        const int NRs[] = {2, 8, 16};
        const double pjts[] = {0.0, 1.0};
        double worst = 0.0;
        int n = 0;
        for (int inst = 0; inst < 100; ++inst)
        {
            const int K = Ks[inst % 3];
            const int NR = NRs[(inst / 3) % 3];
            const double p = pjts[(inst / 9) % 2];
            const MultiUserInstance mi = multi_user_instance(K, NR, p, 1000 + inst);
            const DownlinkSetup setup{mi.scenario.association, mi.powers, 1.0, mi.noise};
            Rng rng(5000 + inst);
            const rvec phi = sample_phases(rng, NR);
            const rvec g = grad_G(phi, mi.channels, setup);
            const double h = 1e-6;
            for (int e = 0; e < NR; ++e)
            {
                rvec a = phi, b = phi;
                a(e) += h;
                b(e) -= h;
                const double fd = (objective_G(a, mi.channels, setup) - objective_G(b, mi.channels, setup)) / (2 * h);
                worst = std::max(worst, std::abs(g(e) - fd) / (1.0 + std::abs(g(e))));
            }
            ++n;
        }
        return Outcome{worst < 1e-5, "max |grad - fd| / (1 + |grad|) = " + fmt("%.3e", worst) + " over " +
                                         std::to_string(n) + " instances (< 1e-5)"};
    });

    check("monotone traces (50 instances)", [] {
        double w_am = 0, w_pg = 0, w_sca = 0, w_outer = 0;
        bool ok = true;
        for (int inst = 0; inst < 50; ++inst)
        {
            const MultiUserInstance mi = multi_user_instance(4, 16, 0.25, 7000 + inst);
            const double P = 10.0;

            // single user, first BS, trace in linear SNR
            const cmat &D = mi.channels.cascade[0][0];
            const cvec &h = mi.channels.direct[0][0];
            Rng rng(9000 + inst);
            auto am = optimize_am(D, h, 1.0, RisConfig::random(D.cols(), 1.0, rng));
            for (double &v : am.trace)
                v *= P / mi.noise;
            ok &= non_decreasing(am.trace, 1e-9, w_am);

            const DownlinkSetup setup{mi.scenario.association, mi.powers, 1.0, mi.noise};
            const auto pg = optimize_phases(RisConfig::random(D.cols(), 1.0, rng), mi.channels, setup);
            ok &= non_decreasing(pg.trace, 1e-9, w_pg);

            const auto cc = coupling(mi.channels, mi.powers, pg.config, mi.scenario.association);
            const auto sca = optimize_powers(mi.powers, cc.a, mi.scenario.association,
                                             rvec::Constant(mi.scenario.num_bs(), P), mi.noise);
            ok &= non_decreasing(sca.trace, 1e-9, w_sca);

            AllocationParams params;
            params.noise_power = mi.noise;
            params.budgets = rvec::Constant(mi.scenario.num_bs(), P);
            const auto res = allocate(mi.channels, mi.scenario, params);
            ok &= non_decreasing(res.trace, 1e-9, w_outer);
        }
        std::ostringstream d;
        d << "largest decrease AM=" << w_am << " ascent=" << w_pg << " SCA=" << w_sca << " outer=" << w_outer
          << " (<= 1e-9)";
        return Outcome{ok, d.str()};
    });

    check("multi-user ordering (desk scale, p_JT=25%, 100 trials, PCSI)", [] {
        const auto s = summaries(run_experiment(desk("mu-cdf", 100)));
        auto med = [&](const char *m) { return s.at({m, "PCSI", 16, "median_gmean_db"}); };
        const double j = med("JointOpt"), r = med("OnlyRIS"), p = med("OnlyPowers"), n = med("NoOpt");
        std::ostringstream d;
        d << "median geometric-mean SINR JointOpt=" << j << " OnlyRIS=" << r << " OnlyPowers=" << p
          << " NoOpt=" << n << " dB";
        return Outcome{j >= r && r >= n && j >= p && p >= n, d.str()};
    });

    check("random RIS does not help (desk scale, NoOpt, 300 trials)", [] {
        ExperimentConfig cfg = desk("mu-sinr-vs-nr", 300);
        cfg.nr_list = {8, 64};
        cfg.methods = {"NoOpt"};
        const auto s = summaries(run_experiment(cfg));
        const double a8 = s.at({"NoOpt", "PCSI", 8, "avg_sinr_db"});
        const double a64 = s.at({"NoOpt", "PCSI", 64, "avg_sinr_db"});
        return Outcome{a64 <= a8 + 0.5, "avg SINR N_R=8: " + fmt("%.3f", a8) + " dB, N_R=64: " + fmt("%.3f", a64) +
                                            " dB (N_R=64 <= N_R=8 + 0.5)"};
    });

    check("small-instance global optimum (N_R=2, N_B=2, K=1, 50 instances)", [] {
        double worst_am = 0.0, worst_pg = 0.0;
        const int grid = 72;
        for (int inst = 0; inst < 50; ++inst)
        {
            Rng rng(12000 + inst);
            const cmat D = sample_cn_matrix(rng, 2, 2);
            const cvec h = sample_cn_vector(rng, 2);
            double best = 0.0;
            RisConfig cfg = RisConfig::zeros(2);
            for (int a = 0; a < grid; ++a)
                for (int b = 0; b < grid; ++b)
                {
                    cfg.phases << two_pi * a / grid, two_pi * b / grid;
                    best = std::max(best, composite_channel(D, h, cfg).squaredNorm());
                }

            const auto am = optimize_am(D, h, 1.0, RisConfig::zeros(2));
            worst_am = std::max(worst_am, to_db(best) - to_db(am.objective));

            CascadedChannels ch;
            ch.cascade = {{D}};
            ch.direct = {{h}};
            const DownlinkSetup setup{imat::Ones(1, 1), rmat::Ones(1, 1), 1.0, 1.0};
            const auto pg = optimize_phases(RisConfig::zeros(2), ch, setup);
            worst_pg = std::max(worst_pg, to_db(best) - to_db(composite_channel(D, h, pg.config).squaredNorm()));
        }
        std::ostringstream d;
        d << "largest gap to grid optimum AM=" << worst_am << " dB, gradient=" << worst_pg << " dB (<= 0.1)";
        return Outcome{worst_am <= 0.1 && worst_pg <= 0.1, d.str()};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
