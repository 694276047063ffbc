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

#ifndef RIS_HARNESS_HPP
#define RIS_HARNESS_HPP

#include "ris/config.hpp"
#include "ris/results.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace ris
{
    /// Runs every trial of the configured experiment and appends the summary
    /// rows. Trials are independent (their random streams depend only on seed
    /// and trial index), so the output does not depend on the thread count.
    std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg);

    // Empirical CDF sampled on an even grid from min to max of the data.
    std::vector<std::pair<double, double>> compute_cdf(std::vector<double> values, int points);

    // 10 log10 of the mean of the linear values.
    double average_db(const std::vector<double> &linear);

    double median(std::vector<double> values);

    // Calls body(t) for t in [0, count) on up to threads workers. The first
    // exception thrown by a body is rethrown after all workers stop.
    void parallel_for(int count, int threads, const std::function<void(int)> &body);
}

#endif
