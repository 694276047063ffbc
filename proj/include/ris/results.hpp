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

#ifndef RIS_RESULTS_HPP
#define RIS_RESULTS_HPP

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

// Long-format result table, one measurement per row:
//
//   experiment,method,estimator,n_r,p_jt,trial,user,metric,x,value
//
// trial = -1 marks a summary over trials, user = -1 a per-trial quantity that
// is not tied to one user. x is empty except for CDF rows, where it holds the
// abscissa and value the empirical probability.

namespace ris
{
    struct ResultRow
    {
        std::string experiment;
        std::string method;
        std::string estimator;
        int n_r = 0;
        double p_jt = 0.0;
        int trial = -1;
        int user = -1;
        std::string metric;
        double x = std::numeric_limits<double>::quiet_NaN();
        double value = 0.0;

        bool operator==(const ResultRow &other) const;
    };

    inline constexpr const char *results_header = "experiment,method,estimator,n_r,p_jt,trial,user,metric,x,value";

    void write_results(std::ostream &out, const std::vector<ResultRow> &rows);
    void write_results(const std::string &path, const std::vector<ResultRow> &rows);

    // Throws std::runtime_error with the offending line number on malformed input.
    std::vector<ResultRow> read_results(std::istream &in);
    std::vector<ResultRow> read_results(const std::string &path);

    // Shortest decimal form that reads back to the same double.
    std::string format_double(double v);
}

#endif
