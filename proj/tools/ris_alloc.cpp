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

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"Monte-Carlo experiments for RIS-assisted downlink networks"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    int trials = 0;
    std::uint64_t seed = 0;
    bool full_scale = false;

    auto *run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("--config", config_path, "Config file (key = value lines)")->required()->check(CLI::ExistingFile);
    auto *out_opt = run->add_option("--out", out_path, "Output CSV, overrides the config's output key");
    auto *trials_opt = run->add_option("--trials", trials, "Number of Monte-Carlo trials")->check(CLI::PositiveNumber);
    auto *seed_opt = run->add_option("--seed", seed, "Base random seed");
    run->add_flag("--full-scale", full_scale, "64 BS antennas, 64 RIS elements, 20 users");

    auto *list = app.add_subcommand("list-experiments", "Print the available experiment ids");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*list)
        {
            for (const auto &name : ris::experiment_names())
                std::cout << name << "\n";
            return 0;
        }

        ris::ExperimentConfig cfg = ris::read_config(config_path);
        if (full_scale)
            cfg.apply_full_scale();
        if (*out_opt)
            cfg.output = out_path;
        if (*trials_opt)
            cfg.trials = trials;
        if (*seed_opt)
            cfg.seed = seed;

        const auto start = std::chrono::steady_clock::now();
        const auto rows = ris::run_experiment(cfg);
        ris::write_results(cfg.output, rows);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cerr << cfg.experiment << ": " << cfg.trials << " trials, " << rows.size() << " rows -> " << cfg.output
                  << " (" << seconds << " s)\n";
    }
    catch (const std::exception &e)
    {
        std::cerr << "ris-alloc: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
