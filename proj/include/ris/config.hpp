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

#ifndef RIS_CONFIG_HPP
#define RIS_CONFIG_HPP

#include "ris/channel_model.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

// Experiment configuration. On disk it is a flat list of key = value lines;
// '#' starts a comment, lists are comma separated.

namespace ris
{
    struct ExperimentConfig
    {
        std::string experiment = "mu-cdf";
        int trials = 50;
        std::uint64_t seed = 1;
        SystemConstants constants = desk_constants();
        std::vector<int> nr_list = {8, 16, 32, 64};
        std::vector<std::string> estimators; // empty: experiment default
        std::vector<std::string> methods;    // empty: experiment default
        std::vector<double> p_jt = {0.25};
        std::string output = "results.csv";
        int threads = 0; // 0: hardware concurrency
        double training_noise_scale = 1.0;
        int cdf_points = 101;
        std::string am_init = "zero"; // zero | random

        // 8 BS antennas, 16 RIS elements, 4 users.
        static SystemConstants desk_constants();

        // 64 BS antennas, 64 RIS elements, 20 users.
        void apply_full_scale();

        // Throws std::invalid_argument describing the first problem found.
        void validate() const;
    };

    std::vector<std::string> config_keys();
    std::vector<std::string> experiment_names();

    // Applies one assignment. Throws std::invalid_argument for an unknown key
    // (listing the valid ones) or a malformed value.
    void set_config_value(ExperimentConfig &cfg, const std::string &key, const std::string &value);

    ExperimentConfig parse_config(std::istream &in, ExperimentConfig base = {});
    ExperimentConfig read_config(const std::string &path, ExperimentConfig base = {});
    void write_config(std::ostream &out, const ExperimentConfig &cfg);
    void write_config(const std::string &path, const ExperimentConfig &cfg);
}

#endif
